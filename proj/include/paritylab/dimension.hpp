#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paritylab/log_expr.hpp"
#include "paritylab/parity_casino.hpp"

namespace paritylab {

struct STestLevel {
  std::size_t level = 0;
  std::string weight;  // Σ c_r·2^{-r/b} with s = a/b
  bool ok = true;      // weight < 2^{-level}
  std::size_t min_length = 0;
};

/// Exact per-level check of Σ_{σ∈V_k} 2^{-s|σ|} < 2^{-k} for rational s in (0, 1].
std::vector<STestLevel> validate_s_test(const TestArray& t, const Rational& s);
bool is_valid_s_test(const TestArray& t, const Rational& s);

/// Levels k at which some member of V_k is a prefix of x.
std::vector<std::size_t> weak_s_random_check(const BitString& x, const TestArray& t);

struct TestStrategies {
  StageApprox n;  // BetsOnEven
  StageApprox t;  // BetsOnOdd
};

/// Sums of all-in target strategies, one per test member, activated in
/// enumeration order. Requires a valid test with s = 1/2.
TestStrategies strategies_from_test(const TestArray& t);

BetProgram unit_strategy(const BitString& sigma, ParityTag tag);

struct DimSample {
  std::size_t n = 0;
  Capital value;
  std::optional<LogExpr> s_hat;  // nullopt when value is 0 (+∞)
  double approx = 0;
};

struct DimReport {
  std::vector<DimSample> samples;
  std::optional<double> min, max;  // over finite samples
};

/// ŝ(n) = 1 - log2(M(x↾n))/n for n = 1..|x|, from the capital trajectory.
DimReport empirical_dim_bound(const std::vector<Capital>& trajectory);
DimReport empirical_dim_bound(const StrategyTable& m, const BitString& x);
DimReport empirical_dim_bound(const StageApprox& m, long stage, const BitString& x);
DimReport empirical_dim_bound(const Evaluator& m, const BitString& x);

}  // namespace paritylab
