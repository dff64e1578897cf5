#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paritylab/rational.hpp"

namespace paritylab {

struct OracleReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::vector<std::string> counterexamples;  // first few
  std::vector<std::string> notes;
  bool pass() const { return failures == 0; }
};

/// Random instances of the two-round inequality plus exhaustive grids
/// (martingales with denominator 8, supermartingales with denominator 4).
OracleReport two_round_oracle(std::size_t random_instances, std::uint64_t seed, bool with_grid = true);

/// Brute force over BetsOnOdd martingales on 2^{<=2} with values k/den <= max_value:
/// every one meeting the leaf constraints must dominate block_min_even pointwise.
OracleReport minimality_oracle(unsigned long den = 4, unsigned long max_value = 4);

/// Parity floor on depth-2 BetsOnOdd supermartingales: below the input, a
/// tagged martingale, and no grid martingale below the input has a larger root.
OracleReport floor_maximality_oracle(std::size_t instances, std::uint64_t seed);

/// Random stage pairs on depth-k parity approximations built from martingale components.
OracleReport growth_oracle(std::size_t instances, std::uint64_t seed, std::size_t depth = 8);

/// Random positive martingales: M(λ)·O·E = M and both factors revalidate.
OracleReport factorization_oracle(std::size_t instances, std::uint64_t seed, std::size_t depth = 8);

}  // namespace paritylab
