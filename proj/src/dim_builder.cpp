#include "paritylab/dim_builder.hpp"

#include <unordered_map>

#include "paritylab/errors.hpp"

namespace paritylab {

std::vector<BuilderParams> params_upto(std::size_t n) {
  std::vector<BuilderParams> out;
  Integer sum_p = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    BuilderParams e;
    const unsigned long ii = static_cast<unsigned long>(i);
    e.n = i;
    e.q = Rational(1, 2) + frac(3, ii + 2);
    e.s = i == 0 ? Integer(0) : Integer((ii + 2) * (2 * ii + 2 + sum_p));
    e.p = (e.s + 1) / 2 + ii + 2;  // rounded up when s is odd
    e.description_length = ceil(e.q * e.s);
    e.budget_lhs = e.s * e.q - e.p;
    e.budget_rhs = ii + sum_p;
    e.budget_ok = e.budget_lhs > e.budget_rhs;
    e.s_even = mpz_even_p(e.s.get_mpz_t()) != 0;
    sum_p += e.p;
    out.push_back(e);
  }
  return out;
}

BuilderParams params(std::size_t n) { return params_upto(n).back(); }

void RequestLedger::add(const BitString& target, std::size_t length) {
  const Rational w = weight_ + pow2(-static_cast<long>(length));
  if (w > 1) throw DomainError("Kraft weight would exceed 1 with a request of length " + std::to_string(length));
  weight_ = w;
  requests_.push_back(Request{target, length});
  auto it = best_.find(target);
  if (it == best_.end() || length < it->second) best_[target] = length;
}

std::optional<std::size_t> RequestLedger::kv(const BitString& target) const {
  auto it = best_.find(target);
  if (it == best_.end()) return std::nullopt;
  return it->second;
}

StrategyTable martingale_floor(const StrategyTable& m, std::size_t k, ParityTag parity) {
  if (k > m.depth()) throw DomainError("floor depth exceeds the table depth");
  if (parity != ParityTag::Unrestricted && k % 2 == 1) throw DomainError("parity floor needs an even depth");
  const std::size_t size = StrategyTable::table_size(k);
  std::vector<Capital> out(size);
  if (parity == ParityTag::Unrestricted) {
    for (std::size_t i = (std::size_t{1} << k) - 1; i < size; ++i) out[i] = m.values()[i];
    for (std::size_t i = (std::size_t{1} << k) - 1; i-- > 0;) out[i] = (out[2 * i + 1] + out[2 * i + 2]) / 2;
    return StrategyTable(k, Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted, std::move(out));
  }
  // Bottom-up cap B: the largest value a tagged martingale below m can take at each node.
  std::vector<Capital> cap(size);
  for (std::size_t i = size; i-- > 0;) {
    const Capital& v = m.values()[i];
    if (2 * i + 1 >= size) {
      cap[i] = v;
      continue;
    }
    std::size_t len = 0;
    while ((std::size_t{2} << len) - 1 <= i) ++len;
    const Capital& b0 = cap[2 * i + 1];
    const Capital& b1 = cap[2 * i + 2];
    cap[i] = bets_at(parity, len) ? min(v, (b0 + b1) / 2) : min(v, min(b0, b1));
  }
  out[0] = cap[0];
  for (std::size_t i = 0; 2 * i + 1 < size; ++i) {
    std::size_t len = 0;
    while ((std::size_t{2} << len) - 1 <= i) ++len;
    if (!bets_at(parity, len)) {
      out[2 * i + 1] = out[i];
      out[2 * i + 2] = out[i];
      continue;
    }
    const Capital avg = (cap[2 * i + 1] + cap[2 * i + 2]) / 2;
    if (avg == 0) {
      out[2 * i + 1] = 0;
      out[2 * i + 2] = 0;
    } else {
      out[2 * i + 1] = cap[2 * i + 1] * out[i] / avg;
      out[2 * i + 2] = cap[2 * i + 2] * out[i] / avg;
    }
  }
  return StrategyTable(k, Kind::Martingale, parity, SidedTag::Unrestricted, std::move(out));
}

GrowthVerdict check_growth_bound(const StageApprox& n, const StageApprox& t, const BitString& sigma,
                                 const BitString& tau, long s, long later, long p) {
  if (n.parity() != ParityTag::BetsOnOdd || t.parity() != ParityTag::BetsOnEven) {
    throw DomainError("growth bound needs a BetsOnOdd and a BetsOnEven approximation");
  }
  if (tau.size() % 2 || sigma.size() % 2) throw DomainError("σ and τ must have even length");
  if (!sigma.is_prefix_of(tau)) throw DomainError("σ must be a prefix of τ");
  if (later <= s) throw DomainError("stages must satisfy s < t");
  const std::size_t k = tau.size();
  auto floor_at = [&](long stage) {
    const StrategyTable fn = martingale_floor(n.tabulate(stage, k), k, ParityTag::BetsOnOdd);
    const StrategyTable ft = martingale_floor(t.tabulate(stage, k), k, ParityTag::BetsOnEven);
    return std::pair{fn, ft};
  };
  const auto [fn_s, ft_s] = floor_at(s);
  const auto [fn_t, ft_t] = floor_at(later);
  GrowthVerdict v;
  v.floor_increase = (fn_t.at(sigma) + ft_t.at(sigma)) - (fn_s.at(sigma) + ft_s.at(sigma));
  v.premise = v.floor_increase < pow2(-p);
  const Rational slack = pow2(static_cast<long>((tau.size() - sigma.size()) / 2) - p);
  v.lhs = n.eval(later, tau) + t.eval(later, tau);
  v.rhs = n.eval(s, tau) + t.eval(s, tau) + slack;
  v.floor_lhs = fn_t.at(tau) + ft_t.at(tau);
  v.floor_rhs = fn_s.at(tau) + ft_s.at(tau) + slack;
  v.holds = !v.premise || (v.lhs < v.rhs && v.floor_lhs < v.floor_rhs);
  return v;
}

BitString greedy_leftmost_extension(const Evaluator& m, const BitString& base, const Capital& bound,
                                    std::size_t length) {
  if (m(base) > bound) throw DomainError("walk starts above its bound at " + base.display());
  BitString cur = base;
  while (cur.size() < length) {
    if (m(cur.child(0)) <= bound) cur.push_back(0);
    else if (m(cur.child(1)) <= bound) cur.push_back(1);
    else throw DomainError("no child within bound at " + cur.display() + "; evaluator is not a supermartingale");
  }
  return cur;
}

namespace {

class CachedSum {
 public:
  CachedSum(const StageApprox& n, const StageApprox& t) : n_(n), t_(t) {}

  Capital at(long stage, const BitString& s) {
    auto it = cache_.find(s);
    if (it == cache_.end()) it = cache_.emplace(s, std::pair{n_.component_values(s), t_.component_values(s)}).first;
    return n_.sum_active(stage, it->second.first) + t_.sum_active(stage, it->second.second);
  }

 private:
  const StageApprox& n_;
  const StageApprox& t_;
  std::unordered_map<BitString, std::pair<std::vector<Capital>, std::vector<Capital>>> cache_;
};

}  // namespace

BuilderRun run_stage_machine(const StageApprox& n, const StageApprox& t, long stages, std::size_t n_max) {
  if (n.parity() != ParityTag::BetsOnOdd || t.parity() != ParityTag::BetsOnEven) {
    throw DomainError("the construction needs a BetsOnOdd N and a BetsOnEven T");
  }
  const auto prm = params_upto(n_max);
  std::vector<Rational> threshold(n_max + 1);
  {
    Rational acc = Rational(1, 2);
    for (std::size_t i = 0; i <= n_max; ++i) {
      threshold[i] = acc;
      acc += pow2(-static_cast<long>(i) - 2);
    }
  }
  CachedSum M(n, t);
  BuilderRun run;
  run.sigma.assign(n_max + 1, std::nullopt);
  run.sigma[0] = BitString();
  run.max_changes.assign(n_max + 1, 0);
  run.lex_decreases.assign(n_max + 1, 0);
  std::vector<std::size_t> changes(n_max + 1, 0);
  std::vector<std::optional<BitString>> previous(n_max + 1);

  for (long s = 0; s < stages; ++s) {
    const long next = s + 1;
    const Capital root = M.at(next, BitString());
    if (root >= Rational(1, 2)) {
      throw DomainError("N(λ) + T(λ) = " + to_string(root) + " is not below 1/2 at stage " + std::to_string(next));
    }
    const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(s), n_max);
    std::optional<std::size_t> chosen;
    for (std::size_t i = 1; i <= top && !chosen; ++i) {
      if (!run.sigma[i] || M.at(next, *run.sigma[i]) > threshold[i]) chosen = i;
    }
    if (chosen) {
      const std::size_t i = *chosen;
      if (!run.sigma[i]) {
        const BitString& parent = *run.sigma[i - 1];
        const Capital bound = M.at(next, parent);
        const BitString tau = greedy_leftmost_extension([&](const BitString& x) { return M.at(next, x); }, parent,
                                                        bound, prm[i].s.get_ui());
        if (previous[i] && tau < *previous[i]) ++run.lex_decreases[i];
        previous[i] = tau;
        run.sigma[i] = tau;
        run.max_changes[i] = std::max(run.max_changes[i], ++changes[i]);
        // A new σ_i opens a fresh stable-parent interval for σ_{i+1}.
        if (i + 1 <= n_max) {
          changes[i + 1] = 0;
          previous[i + 1].reset();
        }
        run.events.push_back(BuilderEvent{next, "define", i, tau, 0, M.at(next, tau)});
      } else {
        for (std::size_t j = i; j <= n_max; ++j) {
          if (!run.sigma[j]) continue;
          run.events.push_back(BuilderEvent{next, "undefine", j, *run.sigma[j], 0, M.at(next, *run.sigma[j])});
          run.sigma[j].reset();
        }
      }
    }
    const std::size_t kmax = std::min<std::size_t>(static_cast<std::size_t>(s), n_max);
    for (std::size_t k = 1; k <= kmax; ++k) {
      if (!run.sigma[k]) continue;
      const std::size_t len = prm[k].description_length.get_ui();
      const auto kv = run.ledger.kv(*run.sigma[k]);
      if (!kv || *kv > len) {
        run.ledger.add(*run.sigma[k], len);
        run.events.push_back(BuilderEvent{next, "describe", k, *run.sigma[k], len, M.at(next, *run.sigma[k])});
        break;
      }
    }
    run.max_weight = max(run.max_weight, run.ledger.weight());
    for (std::size_t i = 1; i <= n_max; ++i) {
      if (run.sigma[i] && M.at(next, *run.sigma[i]) > threshold[i] && run.capital_ok) {
        run.capital_ok = false;
        run.capital_witness = "stage " + std::to_string(next) + ": M(σ_" + std::to_string(i) +
                              ") = " + to_string(M.at(next, *run.sigma[i]));
      }
    }
    run.stages = next;
  }
  for (const auto& r : run.ledger.requests()) {
    bool matched = false;
    for (std::size_t i = 1; i <= n_max; ++i) {
      if (r.target.size() == prm[i].s.get_ui() && r.length == prm[i].description_length.get_ui()) matched = true;
    }
    run.lengths_ok = run.lengths_ok && matched;
  }
  for (std::size_t i = 0; i <= n_max; ++i) {
    if (run.sigma[i]) run.x = *run.sigma[i];
  }
  return run;
}

}  // namespace paritylab
