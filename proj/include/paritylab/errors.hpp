#pragma once

#include <stdexcept>
#include <string>

namespace paritylab {

// Violated precondition or impossible request on well-formed input (CLI exit 1).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or structurally incomplete input (CLI exit 2).
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace paritylab
