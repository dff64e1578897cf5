#pragma once

#include <map>
#include <utility>
#include <vector>

#include "paritylab/stage_approx.hpp"
#include "paritylab/strategy_table.hpp"

namespace paritylab {

/// Pointwise weighted sum of equal-depth tables. The result is a
/// supermartingale if any input is; a tag survives only if every input shares it.
StrategyTable combine(const std::vector<std::pair<Capital, StrategyTable>>& terms);

/// Weighted sum of programs as an approximation whose components are all
/// active from stage 0.
StageApprox combine(const std::vector<std::pair<Capital, BetProgram>>& terms);

/// Pointwise product of two martingales that never bet at the same state.
/// Throws DomainError naming the least state where both factors move.
StrategyTable product(const StrategyTable& a, const StrategyTable& b);

/// x0 y0 x1 y1 ...; requires |x| - |y| in {0, 1}.
BitString interleave(const BitString& x, const BitString& y);

/// Online view N(τ|σ) of a single-parity table of even depth.
/// For BetsOnOdd tables N(τ|σ) = M(σ⊕τ): the bets fall on τ and may depend
/// on all of σ revealed so far. BetsOnEven tables use N(τ|σ) = M(τ⊕σ).
struct OnlineTable {
  ParityTag source_parity = ParityTag::BetsOnOdd;
  Kind source_kind = Kind::Martingale;
  std::size_t half_depth = 0;
  // Keyed by (τ, σ) with |τ| = |σ| <= half_depth.
  std::map<std::pair<BitString, BitString>, Capital> values;

  const Capital& at(const BitString& tau, const BitString& sigma) const;
};

OnlineTable to_online(const StrategyTable& m);
StrategyTable from_online(const OnlineTable& n);

// N(τ̂0|σ) + N(τ̂1|σ) = 2 N(τ̂|σ̂) at every pair (<= for supermartingales); returns the first failing (τ, σ).
std::optional<std::pair<BitString, BitString>> online_law_violation(const OnlineTable& n);

}  // namespace paritylab
