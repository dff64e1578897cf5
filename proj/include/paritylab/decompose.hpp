#pragma once

#include "paritylab/strategy_table.hpp"

namespace paritylab {

struct ParityFactors {
  StrategyTable e;  // BetsOnOdd, λ-value 1
  StrategyTable o;  // BetsOnEven, λ-value 1
};

/// Splits a martingale into M(λ)·O·E, where O collects the conditional
/// ratios at even-length states and E those at odd-length states.
/// Beyond the first zero on a path both factors stop moving.
ParityFactors parity_factorize(const StrategyTable& m);

struct BlockSpec {
  Capital m00, m10, n0, n1, c;
};

/// Least-root BetsOnOdd martingale on 2^{<=2} with the given values at 00 and 10.
StrategyTable block_min_even(const Capital& m00, const Capital& m10);

/// BetsOnEven martingale on 2^{<=2} with N0(0) = n0, N0(1) = n1.
StrategyTable block_first_round(const Capital& n0, const Capital& n1);

struct BlockDecomposition {
  StrategyTable m0, n0, d_m, d_n;
};

/// M = M0 + D_M and N = N0 + D_N on a two-bit block. Throws DomainError with a
/// witness when a hypothesis fails or a remainder would be negative.
BlockDecomposition block_decompose(const StrategyTable& m, const StrategyTable& n, const BlockSpec& spec);

}  // namespace paritylab
