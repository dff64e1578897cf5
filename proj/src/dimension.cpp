#include "paritylab/dimension.hpp"

#include "paritylab/errors.hpp"

namespace paritylab {

namespace {

// Rational bracket [lo, hi] of 2^{-r/b}, of width at most 2^{-bits}.
std::pair<Rational, Rational> root_bracket(unsigned long r, unsigned long b, long bits) {
  if (r == 0) return {Rational(1), Rational(1)};
  const Rational target = pow2(-static_cast<long>(r));
  Rational lo = 0, hi = 1;
  const Rational eps = pow2(-bits);
  while (hi - lo > eps) {
    Rational mid = (lo + hi) / 2;
    if (pow(mid, b) < target) lo = mid;
    else hi = mid;
  }
  return {lo, hi};
}

}  // namespace

std::vector<STestLevel> validate_s_test(const TestArray& t, const Rational& s) {
  if (s <= 0 || s > 1) throw DomainError("s must lie in (0, 1]");
  const unsigned long a = s.get_num().get_ui(), b = s.get_den().get_ui();
  std::vector<STestLevel> out;
  for (std::size_t k = 0; k < t.levels.size(); ++k) {
    STestLevel lv;
    lv.level = k;
    // weight = Σ_r c[r]·2^{-r/b}
    std::vector<Rational> c(b, Rational(0));
    std::size_t min_len = SIZE_MAX;
    for (const auto& sigma : t.levels[k]) {
      const unsigned long e = a * sigma.size();
      c[e % b] += pow2(-static_cast<long>(e / b));
      min_len = std::min(min_len, sigma.size());
    }
    lv.min_length = t.levels[k].empty() ? 0 : min_len;
    const Rational bound = pow2(-static_cast<long>(k));
    bool irrational = false;
    for (unsigned long r = 1; r < b; ++r) irrational = irrational || c[r] != 0;
    for (unsigned long r = 0; r < b; ++r) {
      if (c[r] == 0 && !(r == 0 && !irrational)) continue;
      if (!lv.weight.empty()) lv.weight += " + ";
      lv.weight += to_string(c[r]);
      if (r) lv.weight += "*2^(-" + std::to_string(r) + "/" + std::to_string(b) + ")";
    }
    if (!irrational) {
      lv.ok = c[0] < bound;
    } else {
      // 1, 2^{-1/b}, ..., 2^{-(b-1)/b} are linearly independent over Q, so the
      // weight differs from the rational bound and bisection terminates.
      for (long bits = 16;; bits *= 2) {
        if (bits > 1 << 16) throw DomainError("s-test comparison did not resolve");
        Rational lo = c[0], hi = c[0];
        for (unsigned long r = 1; r < b; ++r) {
          if (c[r] == 0) continue;
          const auto [l, h] = root_bracket(r, b, bits);
          lo += c[r] * l;
          hi += c[r] * h;
        }
        if (hi < bound) {
          lv.ok = true;
          break;
        }
        if (lo >= bound) {
          lv.ok = false;
          break;
        }
      }
    }
    out.push_back(std::move(lv));
  }
  return out;
}

bool is_valid_s_test(const TestArray& t, const Rational& s) {
  for (const auto& lv : validate_s_test(t, s)) {
    if (!lv.ok) return false;
  }
  return true;
}

std::vector<std::size_t> weak_s_random_check(const BitString& x, const TestArray& t) {
  std::vector<std::size_t> hits;
  for (std::size_t k = 0; k < t.levels.size(); ++k) {
    for (const auto& sigma : t.levels[k]) {
      if (sigma.is_prefix_of(x)) {
        hits.push_back(k);
        break;
      }
    }
  }
  return hits;
}

BetProgram unit_strategy(const BitString& sigma, ParityTag tag) {
  const std::size_t half = sigma.size() / 2;
  const std::size_t doublings = tag == ParityTag::BetsOnEven ? sigma.size() - half : half;
  return BetProgram::fractional(pow2(-static_cast<long>(doublings)), TargetRule{sigma, Rational(1)}, tag);
}

TestStrategies strategies_from_test(const TestArray& t) {
  if (t.s != Rational(1, 2)) throw DomainError("strategies are built from a 1/2-test");
  for (const auto& lv : validate_s_test(t, t.s)) {
    if (!lv.ok) throw DomainError("level " + std::to_string(lv.level) + " violates the 1/2-test weight bound");
  }
  std::vector<StageComponent> n, tt;
  long index = 0;
  for (const auto& level : t.levels) {
    for (const auto& sigma : level) {
      n.push_back(StageComponent{index, Rational(1), unit_strategy(sigma, ParityTag::BetsOnEven)});
      tt.push_back(StageComponent{index, Rational(1), unit_strategy(sigma, ParityTag::BetsOnOdd)});
      ++index;
    }
  }
  return TestStrategies{StageApprox(Kind::Martingale, ParityTag::BetsOnEven, SidedTag::Unrestricted, std::move(n)),
                        StageApprox(Kind::Martingale, ParityTag::BetsOnOdd, SidedTag::Unrestricted, std::move(tt))};
}

DimReport empirical_dim_bound(const std::vector<Capital>& trajectory) {
  DimReport out;
  for (std::size_t n = 1; n < trajectory.size(); ++n) {
    DimSample smp;
    smp.n = n;
    smp.value = trajectory[n];
    if (smp.value > 0) {
      const Rational inv_n(1, static_cast<unsigned long>(n));
      smp.s_hat = LogExpr::rational(1) - LogExpr::log2_of(smp.value) * inv_n;
      smp.approx = smp.s_hat->to_double();
      if (!out.min || smp.approx < *out.min) out.min = smp.approx;
      if (!out.max || smp.approx > *out.max) out.max = smp.approx;
    }
    out.samples.push_back(std::move(smp));
  }
  return out;
}

DimReport empirical_dim_bound(const StrategyTable& m, const BitString& x) {
  std::vector<Capital> traj;
  for (std::size_t n = 0; n <= x.size(); ++n) traj.push_back(m.value_or_frozen(x.prefix(n)));
  return empirical_dim_bound(traj);
}

DimReport empirical_dim_bound(const StageApprox& m, long stage, const BitString& x) {
  std::vector<Capital> traj(x.size() + 1, Capital(0));
  for (const auto& c : m.components()) {
    if (c.stage > stage) continue;
    const auto part = c.program.trajectory(x);
    for (std::size_t i = 0; i < traj.size(); ++i) traj[i] += c.weight * part[i];
  }
  return empirical_dim_bound(traj);
}

DimReport empirical_dim_bound(const Evaluator& m, const BitString& x) {
  std::vector<Capital> traj;
  for (std::size_t n = 0; n <= x.size(); ++n) traj.push_back(m(x.prefix(n)));
  return empirical_dim_bound(traj);
}

}  // namespace paritylab
