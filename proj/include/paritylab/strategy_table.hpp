#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paritylab/bitstring.hpp"
#include "paritylab/rational.hpp"
#include "paritylab/tags.hpp"

namespace paritylab {

using Evaluator = std::function<Capital(const BitString&)>;

/// Total table of capitals on every string of length <= depth.
///
/// Values are stored in breadth-first order: the string σ lives at
/// 2^|σ| - 1 + index(σ). Tables are immutable values; the declared kind and
/// tags are claims that validate() checks by exhaustive scan.
class StrategyTable {
 public:
  static constexpr std::size_t kMaxDepth = 22;

  StrategyTable(std::size_t depth, Kind kind, ParityTag parity, SidedTag sided,
                std::vector<Capital> values);

  /// Throws StructuralError naming the lexicographically least absent state.
  static StrategyTable from_map(std::size_t depth, Kind kind, ParityTag parity, SidedTag sided,
                                const std::map<BitString, Capital>& values);

  static StrategyTable tabulate(std::size_t depth, const Evaluator& f, Kind kind = Kind::Martingale,
                                ParityTag parity = ParityTag::Unrestricted,
                                SidedTag sided = SidedTag::Unrestricted);

  static StrategyTable constant(std::size_t depth, const Capital& c);

  std::size_t depth() const { return depth_; }
  Kind kind() const { return kind_; }
  ParityTag parity() const { return parity_; }
  SidedTag sided() const { return sided_; }

  const Capital& at(const BitString& s) const;
  const Capital& operator()(const BitString& s) const { return at(s); }

  // Value at σ, or at σ's depth-prefix when σ is deeper than the table.
  const Capital& value_or_frozen(const BitString& s) const;

  const std::vector<Capital>& values() const { return values_; }

  StrategyTable with_tags(Kind kind, ParityTag parity, SidedTag sided) const;

  static std::size_t slot(const BitString& s) {
    return (std::size_t{1} << s.size()) - 1 + static_cast<std::size_t>(s.index());
  }
  static std::size_t table_size(std::size_t depth) { return (std::size_t{2} << depth) - 1; }

  // Visits every state in order of increasing length, then index.
  template <typename F>
  void for_each_state(F&& f) const {
    for (std::size_t len = 0; len <= depth_; ++len) {
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
        f(BitString::from_index(len, i));
      }
    }
  }

  bool operator==(const StrategyTable& other) const;

 private:
  std::size_t depth_;
  Kind kind_;
  ParityTag parity_;
  SidedTag sided_;
  std::vector<Capital> values_;
};

struct Violation {
  std::string property;
  BitString state;
  std::string detail;
};

struct Diagnosis {
  bool nonnegative = true;
  bool martingale = true;
  bool supermartingale = true;
  bool zero_propagation = true;
  bool bets_on_even = true;
  bool bets_on_odd = true;
  bool zero_sided = true;
  bool one_sided = true;

  // Least violating state per property name, for every property that fails.
  std::map<std::string, BitString> witnesses;
  // Lexicographically least state violating one of the declared properties.
  std::optional<Violation> first_violation;

  bool declared_ok() const { return !first_violation.has_value(); }
  std::optional<Kind> kind_verdict() const;
};

Diagnosis validate(const StrategyTable& table);

// Validates and throws DomainError describing the first violation.
void require_valid(const StrategyTable& table, const std::string& what);

}  // namespace paritylab
