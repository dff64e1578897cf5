#pragma once

// Hand-rolled generators and small reference helpers shared by the unit tests.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "paritylab/bitstring.hpp"
#include "paritylab/rational.hpp"
#include "paritylab/strategy_table.hpp"

namespace gen {

using paritylab::BitString;
using paritylab::Capital;
using paritylab::Integer;
using paritylab::Rational;

using Rng = std::mt19937_64;

inline Rational q(long num, long den = 1) { return paritylab::frac(num, den); }

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

// k/den with lo <= k/den <= hi.
inline Rational grid(Rng& rng, long lo_num, long hi_num, long den) { return q(uniform(rng, lo_num, hi_num), den); }

inline bool moves_at(paritylab::ParityTag tag, std::size_t len) {
  if (tag == paritylab::ParityTag::Unrestricted) return true;
  return (tag == paritylab::ParityTag::BetsOnEven) == (len % 2 == 0);
}

// Values keyed by bit string, every string of length <= depth.
using Values = std::map<std::string, Rational>;

// Random martingale: at every betting state the value v splits as (v·k/den, v·(2den-k)/den).
// With positive=true, k stays in 1..2den-1 so no value reaches zero.
inline Values martingale(Rng& rng, std::size_t depth, paritylab::ParityTag tag, bool positive, const Rational& root,
                         long den = 4) {
  Values v{{"", root}};
  std::vector<std::string> frontier{""};
  for (std::size_t len = 0; len < depth; ++len) {
    std::vector<std::string> next;
    for (const auto& s : frontier) {
      const Rational x = v[s];
      if (moves_at(tag, len)) {
        const long k = positive ? uniform(rng, 1, 2 * den - 1) : uniform(rng, 0, 2 * den);
        v[s + "0"] = x * q(k, den);
        v[s + "1"] = x * q(2 * den - k, den);
      } else {
        v[s + "0"] = x;
        v[s + "1"] = x;
      }
      next.push_back(s + "0");
      next.push_back(s + "1");
    }
    frontier = std::move(next);
  }
  return v;
}

// Random supermartingale: a martingale split followed by a random loss on each child.
inline Values supermartingale(Rng& rng, std::size_t depth, paritylab::ParityTag tag, const Rational& root,
                              long den = 4) {
  Values v{{"", root}};
  std::vector<std::string> frontier{""};
  for (std::size_t len = 0; len < depth; ++len) {
    std::vector<std::string> next;
    for (const auto& s : frontier) {
      const Rational x = v[s];
      if (moves_at(tag, len)) {
        const long k = uniform(rng, 0, 2 * den);
        v[s + "0"] = x * q(k, den) * q(uniform(rng, 0, den), den);
        v[s + "1"] = x * q(2 * den - k, den) * q(uniform(rng, 0, den), den);
      } else {
        v[s + "0"] = x;
        v[s + "1"] = x;
      }
      next.push_back(s + "0");
      next.push_back(s + "1");
    }
    frontier = std::move(next);
  }
  return v;
}

inline paritylab::StrategyTable table(std::size_t depth, const Values& v,
                                      paritylab::Kind kind = paritylab::Kind::Martingale,
                                      paritylab::ParityTag tag = paritylab::ParityTag::Unrestricted,
                                      paritylab::SidedTag sided = paritylab::SidedTag::Unrestricted) {
  std::map<BitString, Capital> m;
  for (const auto& [s, x] : v) m[BitString(s)] = x;
  return paritylab::StrategyTable::from_map(depth, kind, tag, sided, m);
}

inline BitString bits(Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(uniform(rng, 0, 1) ? '1' : '0');
  return BitString(s);
}

// Reference checks written against the plain map, independent of validate().
inline bool is_martingale(const Values& v, std::size_t depth) {
  for (const auto& [s, x] : v) {
    if (s.size() < depth && v.at(s + "0") + v.at(s + "1") != 2 * x) return false;
  }
  return true;
}

inline bool is_supermartingale(const Values& v, std::size_t depth) {
  for (const auto& [s, x] : v) {
    if (x < 0) return false;
    if (s.size() < depth && v.at(s + "0") + v.at(s + "1") > 2 * x) return false;
  }
  return true;
}

inline bool frozen_where_idle(const Values& v, std::size_t depth, paritylab::ParityTag tag) {
  for (const auto& [s, x] : v) {
    if (s.size() < depth && !moves_at(tag, s.size()) && (v.at(s + "0") != x || v.at(s + "1") != x)) return false;
  }
  return true;
}

inline Values values_of(const paritylab::StrategyTable& t) {
  Values v;
  t.for_each_state([&](const BitString& s) { v[s.str()] = t.at(s); });
  return v;
}

}  // namespace gen
