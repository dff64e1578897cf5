#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace paritylab {

/// Finite binary string. The empty string is the root state of every game.
///
/// Stored as a string of '0'/'1' characters so that the natural string order
/// is the lexicographic order on bit sequences (a proper prefix sorts first).
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::string_view bits);

  static BitString repeat(int bit, std::size_t count);
  static BitString from_index(std::size_t length, std::uint64_t index);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }
  int last() const { return (*this)[size() - 1]; }

  BitString child(int bit) const;
  BitString parent() const;
  BitString prefix(std::size_t n) const;
  BitString operator+(const BitString& tail) const;
  BitString& push_back(int bit);
  void pop_back() { bits_.pop_back(); }

  bool is_prefix_of(const BitString& other) const;
  bool is_proper_prefix_of(const BitString& other) const {
    return size() < other.size() && is_prefix_of(other);
  }

  // Position among the strings of the same length, read as a binary number.
  std::uint64_t index() const;

  const std::string& str() const { return bits_; }
  // "λ" for the empty string, the bits otherwise.
  std::string display() const;

  auto operator<=>(const BitString&) const = default;
  bool operator==(const BitString&) const = default;

 private:
  std::string bits_;
};

}  // namespace paritylab

template <>
struct std::hash<paritylab::BitString> {
  std::size_t operator()(const paritylab::BitString& b) const noexcept {
    return std::hash<std::string>{}(b.str());
  }
};
