#include "paritylab/oracles.hpp"

#include <random>

#include "paritylab/decompose.hpp"
#include "paritylab/dim_builder.hpp"
#include "paritylab/parity_casino.hpp"

namespace paritylab {

namespace {

using Rng = std::mt19937_64;

// Uniform k/den in [lo, hi] over a random denominator up to max_den.
Rational draw(Rng& rng, const Rational& lo, const Rational& hi, unsigned long max_den = 16) {
  if (hi <= lo) return lo;
  const unsigned long den = std::uniform_int_distribution<unsigned long>(1, max_den)(rng);
  const Integer a = ceil(lo * den);
  const Rational hd = hi * den;
  Integer b;
  mpz_fdiv_q(b.get_mpz_t(), hd.get_num_mpz_t(), hd.get_den_mpz_t());
  if (b < a) return lo;
  const Integer span = b - a;
  const unsigned long k = std::uniform_int_distribution<unsigned long>(0, span.get_ui())(rng);
  return frac(a + k, den);
}

StrategyTable depth2(const Rational& l, const Rational& z, const Rational& o, const Rational& zz, const Rational& zo,
                     const Rational& oz, const Rational& oo, ParityTag tag) {
  std::map<BitString, Capital> v{{BitString(""), l},   {BitString("0"), z},   {BitString("1"), o},
                                 {BitString("00"), zz}, {BitString("01"), zo}, {BitString("10"), oz},
                                 {BitString("11"), oo}};
  return StrategyTable::from_map(2, Kind::Supermartingale, tag, SidedTag::Unrestricted, v);
}

void note_failure(OracleReport& r, const std::string& what) {
  ++r.failures;
  if (r.counterexamples.size() < 5) r.counterexamples.push_back(what);
}

std::string fmt(std::initializer_list<std::pair<const char*, Rational>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += std::string(out.empty() ? "" : " ") + k + "=" + to_string(v);
  return out;
}

// Runs one two-round instance through the checker and an inline conclusion check.
void check_instance(OracleReport& r, const Rational& a, const Rational& b, const Rational& m00v,
                    const Rational& m01v, const Rational& m10v, const Rational& m11v, const Rational& n0v,
                    const Rational& n1v, const BlockSpec& spec) {
  ++r.instances;
  const StrategyTable M = depth2(a, a, a, m00v, m01v, m10v, m11v, ParityTag::BetsOnOdd);
  const StrategyTable N = depth2(b, n0v, n1v, n0v, n0v, n1v, n1v, ParityTag::BetsOnEven);
  const BlockCheck chk = verify_block_inequality([&](const BitString& s) { return M.at(s); },
                                                 [&](const BitString& s) { return N.at(s); }, BitString(), spec);
  const Rational direct = spec.n0 <= spec.n1 ? m01v + n0v : m11v + n1v;
  if (chk.rejected || !chk.holds || direct > spec.c || chk.lhs != direct) {
    note_failure(r, fmt({{"M(λ)", a}, {"M(00)", m00v}, {"M(01)", m01v}, {"M(10)", m10v}, {"M(11)", m11v},
                         {"N(λ)", b}, {"N(0)", n0v}, {"N(1)", n1v}, {"m00", spec.m00}, {"m10", spec.m10},
                         {"n0", spec.n0}, {"n1", spec.n1}, {"c", spec.c}}) +
                        (chk.rejected ? " rejected: " + *chk.rejected : ""));
  }
}

}  // namespace

OracleReport two_round_oracle(std::size_t random_instances, std::uint64_t seed, bool with_grid) {
  OracleReport r;
  r.name = "two-round";
  Rng rng(seed);
  std::size_t accepted = 0, attempts = 0;
  while (accepted < random_instances) {
    ++attempts;
    const bool mart = rng() % 2 == 0;
    const Rational c = draw(rng, 0, 2);
    const Rational a = draw(rng, 0, c);
    const Rational b = draw(rng, 0, c - a);
    auto leaf_pair = [&](const Rational& parent) {
      const Rational x = rng() % 2 ? draw(rng, parent, 2 * parent) : draw(rng, 0, 2 * parent);
      const Rational y = mart ? Rational(2 * parent - x) : draw(rng, 0, 2 * parent - x);
      return std::pair{x, y};
    };
    const auto [m00v, m01v] = leaf_pair(a);
    const auto [m10v, m11v] = leaf_pair(a);
    const auto [n0v, n1v] = leaf_pair(b);
    const bool tight = rng() % 2 == 0;
    BlockSpec spec{tight ? m00v : draw(rng, 0, m00v), tight ? m10v : draw(rng, 0, m10v),
                   tight ? n0v : draw(rng, 0, n0v), tight ? n1v : draw(rng, 0, n1v), c};
    if (spec.m00 + spec.n0 < c || spec.m10 + spec.n1 < c) continue;
    ++accepted;
    check_instance(r, a, b, m00v, m01v, m10v, m11v, n0v, n1v, spec);
  }
  r.notes.push_back(std::to_string(accepted) + " random instances from " + std::to_string(attempts) + " draws");

  if (!with_grid) return r;
  // Martingale grid, denominator 8: tight m, slack n, every c in [M(λ)+N(λ), 1].
  std::size_t grid = 0;
  const long D = 8;
  for (long c = 0; c <= D; ++c)
    for (long a = 0; a <= c; ++a)
      for (long b = 0; a + b <= c; ++b)
        for (long x0 = 0; x0 <= 2 * a; ++x0)
          for (long x1 = 0; x1 <= 2 * a; ++x1)
            for (long y0 = 0; y0 <= 2 * b; ++y0) {
              const long y1 = 2 * b - y0;
              for (long n0 = 0; n0 <= y0; ++n0)
                for (long n1 = 0; n1 <= y1; ++n1) {
                  if (x0 + n0 < c || x1 + n1 < c) continue;
                  ++grid;
                  auto q = [&](long v) { return frac(v, D); };
                  check_instance(r, q(a), q(b), q(x0), q(2 * a - x0), q(x1), q(2 * a - x1), q(y0), q(y1),
                                 BlockSpec{q(x0), q(x1), q(n0), q(n1), q(c)});
                }
            }
  r.notes.push_back(std::to_string(grid) + " martingale grid instances (denominator 8)");
  // Supermartingale grid, denominator 4: tight m and n.
  grid = 0;
  const long E = 4;
  for (long c = 0; c <= E; ++c)
    for (long a = 0; a <= c; ++a)
      for (long b = 0; a + b <= c; ++b)
        for (long x0 = 0; x0 <= 2 * a; ++x0)
          for (long z0 = 0; x0 + z0 <= 2 * a; ++z0)
            for (long x1 = 0; x1 <= 2 * a; ++x1)
              for (long z1 = 0; x1 + z1 <= 2 * a; ++z1)
                for (long y0 = 0; y0 <= 2 * b; ++y0)
                  for (long y1 = 0; y0 + y1 <= 2 * b; ++y1) {
                    if (x0 + y0 < c || x1 + y1 < c) continue;
                    ++grid;
                    auto q = [&](long v) { return frac(v, E); };
                    check_instance(r, q(a), q(b), q(x0), q(z0), q(x1), q(z1), q(y0), q(y1),
                                   BlockSpec{q(x0), q(x1), q(y0), q(y1), q(c)});
                  }
  r.notes.push_back(std::to_string(grid) + " supermartingale grid instances (denominator 4)");
  return r;
}

OracleReport minimality_oracle(unsigned long den, unsigned long max_value) {
  OracleReport r;
  r.name = "minimality";
  const long top = static_cast<long>(den * max_value);
  std::size_t partial_ok = 0, minimal_ok = 0;
  for (long m00 = 0; m00 <= top; ++m00) {
    for (long m10 = 0; m10 <= top; ++m10) {
      ++r.instances;
      const StrategyTable m0 = block_min_even(frac(m00, den), frac(m10, den));
      bool violated = false, partial_violated = false, root_ok = true;
      std::string witness;
      // BetsOnOdd martingales on the grid: root a, leaves (x0, 2a-x0), (x1, 2a-x1), all <= max_value.
      for (long a = 0; 2 * a <= top; ++a) {
        for (long x0 = m00; x0 <= 2 * a; ++x0) {
          for (long x1 = m10; x1 <= 2 * a; ++x1) {
            const std::map<std::string, long> g{{"", a},      {"0", a},           {"1", a},
                                                {"00", x0},   {"01", 2 * a - x0}, {"10", x1},
                                                {"11", 2 * a - x1}};
            for (const auto& [s, v] : g) {
              if (frac(v, den) >= m0.at(BitString(s))) continue;
              const bool leaf_side = s == "01" || s == "11";
              if (!leaf_side) partial_violated = true;
              if (!violated) {
                witness = "m00=" + to_string(frac(m00, den)) + " m10=" + to_string(frac(m10, den)) +
                          ": M = {λ:" + to_string(frac(a, den)) + ", 00:" + to_string(frac(x0, den)) +
                          ", 01:" + to_string(frac(2 * a - x0, den)) + ", 10:" + to_string(frac(x1, den)) +
                          ", 11:" + to_string(frac(2 * a - x1, den)) + "} has M(" + s + ") = " +
                          to_string(frac(v, den)) + " < M0(" + s + ") = " + to_string(m0.at(BitString(s)));
              }
              violated = true;
            }
            bool below = true, equal = true;
            for (const auto& [s, v] : g) {
              below = below && frac(v, den) <= m0.at(BitString(s));
              equal = equal && frac(v, den) == m0.at(BitString(s));
            }
            if (below && !equal) root_ok = false;
          }
        }
      }
      if (violated) note_failure(r, witness);
      if (!partial_violated) ++partial_ok;
      if (root_ok) ++minimal_ok;
    }
  }
  r.notes.push_back("domination at λ, 0, 1, 00, 10 holds for " + std::to_string(partial_ok) + "/" +
                    std::to_string(r.instances) + " leaf pairs");
  r.notes.push_back("no feasible martingale lies strictly below block_min_even for " + std::to_string(minimal_ok) +
                    "/" + std::to_string(r.instances) + " leaf pairs");
  return r;
}

OracleReport floor_maximality_oracle(std::size_t instances, std::uint64_t seed) {
  OracleReport r;
  r.name = "floor-maximality";
  Rng rng(seed);
  const long D = 4, F = 8;  // input grid, search grid
  auto pick = [&](long hi) { return hi <= 0 ? 0L : std::uniform_int_distribution<long>(0, hi)(rng); };
  for (std::size_t i = 0; i < instances; ++i) {
    ++r.instances;
    // Unrestricted supermartingale on 2^{<=2}, integer numerators over D.
    const long l = pick(2 * D);
    const long z = pick(2 * l), o = pick(2 * l - z);
    const long zz = pick(2 * z), zo = pick(2 * z - zz);
    const long oz = pick(2 * o), oo = pick(2 * o - oz);
    auto q = [&](long v) { return frac(v, D); };
    const StrategyTable m = depth2(q(l), q(z), q(o), q(zz), q(zo), q(oz), q(oo), ParityTag::Unrestricted);
    const StrategyTable f = martingale_floor(m, 2, ParityTag::BetsOnOdd);
    const std::string where = fmt({{"λ", q(l)}, {"0", q(z)}, {"1", q(o)}, {"00", q(zz)}, {"01", q(zo)},
                                   {"10", q(oz)}, {"11", q(oo)}});
    const Diagnosis d = validate(f);
    bool below = true;
    for (std::size_t k = 0; k < f.values().size(); ++k) below = below && f.values()[k] <= m.values()[k];
    // Largest root of a BetsOnOdd martingale below m on the finer grid.
    Rational best = -1;
    for (long a = 0; a <= 2 * D * F; ++a) {
      const Rational ra = frac(a, D * F);
      if (ra > q(l) || ra > q(z) || ra > q(o)) break;
      bool feasible = false;
      for (long x = 0; x <= 2 * a && !feasible; ++x) {
        if (frac(x, D * F) > q(zz) || frac(2 * a - x, D * F) > q(zo)) continue;
        for (long y = 0; y <= 2 * a; ++y) {
          if (frac(y, D * F) <= q(oz) && frac(2 * a - y, D * F) <= q(oo)) {
            feasible = true;
            break;
          }
        }
      }
      if (feasible) best = ra;
    }
    if (!d.declared_ok() || !below || best != f.at(BitString())) {
      note_failure(r, where + " floor root " + to_string(f.at(BitString())) + ", grid optimum " + to_string(best));
    }
  }
  return r;
}

namespace {

BetProgram random_program(Rng& rng, ParityTag tag) {
  ContextRule rule;
  rule.order = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
  for (std::size_t len = 0; len <= rule.order; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      const long den = std::uniform_int_distribution<long>(1, 4)(rng);
      const long num = std::uniform_int_distribution<long>(-den, den)(rng);
      rule.stakes[BitString::from_index(len, i)] = frac(num, den);
    }
  }
  const Rational initial = draw(rng, Rational(1, 16), 1, 8);
  return BetProgram::fractional(initial, rule, tag);
}

StageApprox random_approx(Rng& rng, ParityTag tag, long max_stage) {
  std::vector<StageComponent> comps;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  for (std::size_t i = 0; i < k; ++i) {
    const long stage = std::uniform_int_distribution<long>(0, max_stage)(rng);
    comps.push_back(StageComponent{stage, draw(rng, Rational(1, 64), Rational(1, 2), 8), random_program(rng, tag)});
  }
  return StageApprox(Kind::Martingale, tag, SidedTag::Unrestricted, std::move(comps));
}

}  // namespace

OracleReport growth_oracle(std::size_t instances, std::uint64_t seed, std::size_t depth) {
  OracleReport r;
  r.name = "growth-bound";
  Rng rng(seed);
  std::size_t with_premise = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    ++r.instances;
    const StageApprox n = random_approx(rng, ParityTag::BetsOnOdd, 20);
    const StageApprox t = random_approx(rng, ParityTag::BetsOnEven, 20);
    const BitString tau = BitString::from_index(depth, rng() & ((std::uint64_t{1} << depth) - 1));
    const std::size_t half = std::uniform_int_distribution<std::size_t>(0, depth / 2)(rng);
    const BitString sigma = tau.prefix(2 * half);
    const long s = std::uniform_int_distribution<long>(0, 19)(rng);
    const long later = std::uniform_int_distribution<long>(s + 1, 20)(rng);
    // Tightest p for which the premise holds; arbitrary when the floor did not move.
    const GrowthVerdict probe = check_growth_bound(n, t, sigma, tau, s, later, 0);
    long p = std::uniform_int_distribution<long>(0, 12)(rng);
    if (probe.floor_increase > 0) {
      p = -64;
      while (pow2(-(p + 1)) > probe.floor_increase) ++p;
    }
    const GrowthVerdict v = check_growth_bound(n, t, sigma, tau, s, later, p);
    if (v.premise) ++with_premise;
    if (!v.holds) {
      note_failure(r, "σ=" + sigma.display() + " τ=" + tau.display() + " s=" + std::to_string(s) +
                          " t=" + std::to_string(later) + " p=" + std::to_string(p) + " lhs=" + to_string(v.lhs) +
                          " rhs=" + to_string(v.rhs));
    }
  }
  r.notes.push_back(std::to_string(with_premise) + " instances with the premise in force");
  return r;
}

OracleReport factorization_oracle(std::size_t instances, std::uint64_t seed, std::size_t depth) {
  OracleReport r;
  r.name = "factorization";
  Rng rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    ++r.instances;
    std::vector<Capital> v(StrategyTable::table_size(depth));
    v[0] = draw(rng, Rational(1, 8), 4);
    for (std::size_t j = 0; 2 * j + 2 < v.size(); ++j) {
      const long den = std::uniform_int_distribution<long>(2, 8)(rng);
      const long num = std::uniform_int_distribution<long>(-(den - 1), den - 1)(rng);
      const Rational f = frac(num, den);
      v[2 * j + 1] = v[j] * (1 - f);
      v[2 * j + 2] = v[j] * (1 + f);
    }
    const StrategyTable m(depth, Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted, v);
    const ParityFactors pf = parity_factorize(m);
    bool ok = validate(pf.e).declared_ok() && validate(pf.o).declared_ok() && pf.e.values()[0] == 1 &&
              pf.o.values()[0] == 1;
    for (std::size_t j = 0; j < v.size() && ok; ++j) ok = v[0] * pf.o.values()[j] * pf.e.values()[j] == v[j];
    if (!ok) note_failure(r, "instance " + std::to_string(i));
  }
  return r;
}

}  // namespace paritylab
