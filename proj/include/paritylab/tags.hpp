#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace paritylab {

enum class Kind { Martingale, Supermartingale };

// Where a strategy is allowed to change its value.
//   BetsOnEven: M(σi) = M(σ) whenever |σ| is odd.
//   BetsOnOdd:  M(σi) = M(σ) whenever |σ| is even.
// The "even-parity" strategies of the introduction and of the 3/4-test
// construction are BetsOnOdd; the strategies built from a 1/2-test are
// BetsOnEven.
enum class ParityTag { BetsOnEven, BetsOnOdd, Unrestricted };

// i-sided: M(σi) >= M(σ(1-i)) at every state.
enum class SidedTag { ZeroSided, OneSided, Unrestricted };

inline bool bets_at(ParityTag tag, std::size_t state_length) {
  switch (tag) {
    case ParityTag::BetsOnEven: return state_length % 2 == 0;
    case ParityTag::BetsOnOdd: return state_length % 2 == 1;
    case ParityTag::Unrestricted: return true;
  }
  return true;
}

inline ParityTag opposite(ParityTag tag) {
  switch (tag) {
    case ParityTag::BetsOnEven: return ParityTag::BetsOnOdd;
    case ParityTag::BetsOnOdd: return ParityTag::BetsOnEven;
    case ParityTag::Unrestricted: return ParityTag::Unrestricted;
  }
  return tag;
}

// Outcome that an i-sided strategy favors.
inline int favored_outcome(SidedTag tag) { return tag == SidedTag::OneSided ? 1 : 0; }

std::string to_string(Kind k);
std::string to_string(ParityTag t);
std::string to_string(SidedTag t);
Kind parse_kind(std::string_view s);
ParityTag parse_parity(std::string_view s);
SidedTag parse_sided(std::string_view s);

}  // namespace paritylab
