#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paritylab/stage_approx.hpp"

namespace paritylab {

struct BuilderParams {
  std::size_t n = 0;
  Rational q;
  Integer p;
  Integer s;
  Integer description_length;  // ceil(q·s)
  Rational budget_lhs;         // s·q - p
  Rational budget_rhs;         // n + Σ_{i<n} p_i
  bool budget_ok = false;
  bool s_even = false;
};

/// Entries 0..n of the (q, p, s) recurrences with s_0 = 0.
std::vector<BuilderParams> params_upto(std::size_t n);
BuilderParams params(std::size_t n);

/// Prefix-free description requests with an exact Kraft weight.
class RequestLedger {
 public:
  struct Request {
    BitString target;
    std::size_t length;
  };

  // Throws DomainError if the weight would exceed 1.
  void add(const BitString& target, std::size_t length);
  std::optional<std::size_t> kv(const BitString& target) const;
  const Rational& weight() const { return weight_; }
  const std::vector<Request>& requests() const { return requests_; }

 private:
  std::vector<Request> requests_;
  std::map<BitString, std::size_t> best_;
  Rational weight_ = 0;
};

/// Martingale below a supermartingale on 2^{<=k}. Plain mode keeps the leaves
/// and averages backwards; parity mode returns a martingale of the given tag,
/// maximal at the root, which need not agree with m on 2^k.
StrategyTable martingale_floor(const StrategyTable& m, std::size_t k, ParityTag parity = ParityTag::Unrestricted);

struct GrowthVerdict {
  Capital floor_increase;  // M^k_t(σ) - M^k_s(σ)
  bool premise = false;    // floor_increase < 2^{-p}
  Capital lhs;             // M_t(τ)
  Capital rhs;             // M_s(τ) + 2^{(|τ|-|σ|)/2 - p}
  Capital floor_lhs, floor_rhs;
  bool holds = true;       // premise implies lhs < rhs, on M and on the floors
};

/// n is BetsOnOdd and t is BetsOnEven; τ has even length k, σ ≺ τ has even length.
GrowthVerdict check_growth_bound(const StageApprox& n, const StageApprox& t, const BitString& sigma,
                                 const BitString& tau, long s, long later, long p);

/// Bit-by-bit walk from base choosing the leftmost child with value <= bound.
BitString greedy_leftmost_extension(const Evaluator& m, const BitString& base, const Capital& bound,
                                    std::size_t length);

struct BuilderEvent {
  long stage = 0;
  std::string action;  // define | undefine | describe
  std::size_t n = 0;
  BitString sigma;
  std::size_t length = 0;  // description length for describe
  Capital capital;         // M at sigma after the stage
};

struct BuilderRun {
  std::vector<std::optional<BitString>> sigma;
  long stages = 0;
  RequestLedger ledger;
  std::vector<BuilderEvent> events;
  BitString x;  // deepest defined σ_n

  Rational max_weight;
  bool capital_ok = true;
  std::optional<std::string> capital_witness;
  std::vector<std::size_t> max_changes;      // per n, within stable-parent intervals
  std::vector<std::size_t> lex_decreases;    // per n, within stable-parent intervals
  bool lengths_ok = true;                    // every description of σ_n has length ceil(q_n s_n)
};

/// Runs stages 1..S of the construction against M = N + T for n <= n_max.
BuilderRun run_stage_machine(const StageApprox& n, const StageApprox& t, long stages, std::size_t n_max);

}  // namespace paritylab
