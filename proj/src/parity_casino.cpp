#include "paritylab/parity_casino.hpp"

#include <algorithm>
#include <set>

#include "paritylab/errors.hpp"

namespace paritylab {

std::optional<std::string> block34_defect(const TestArray& t) {
  if (t.flavor != TestFlavor::Block34) return "not a Block34 array";
  if (t.levels.empty()) return "missing level 0";
  if (t.levels[0].size() != 1 || !t.levels[0][0].empty()) return "level 0 must be {λ}";
  for (std::size_t i = 1; i < t.levels.size(); ++i) {
    std::set<BitString> prev(t.levels[i - 1].begin(), t.levels[i - 1].end());
    std::set<BitString> seen;
    std::map<BitString, std::size_t> fanout;
    for (const auto& s : t.levels[i]) {
      const std::string where = " at level " + std::to_string(i) + ": " + s.display();
      if (s.size() != 2 * i) return "wrong length" + where;
      if (!seen.insert(s).second) return "duplicate member" + where;
      const BitString parent = s.prefix(2 * i - 2);
      if (!prev.count(parent)) return "no parent in previous level" + where;
      if (++fanout[parent] > 3) return "more than three children of " + parent.display() + where;
    }
  }
  return std::nullopt;
}

namespace {

struct Checker {
  BlockCheck& out;
  bool require(bool ok, const std::string& what) {
    if (!ok && !out.rejected) out.rejected = what;
    return ok;
  }
};

}  // namespace

BlockCheck verify_block_inequality(const Evaluator& m, const Evaluator& n, const BitString& eta,
                                   const BlockSpec& spec) {
  BlockCheck out;
  out.c = spec.c;
  Checker chk{out};
  if (!chk.require(eta.size() % 2 == 0, "η has odd length " + std::to_string(eta.size()))) return out;

  auto& q = out.quantities;
  for (const char* tail : {"", "0", "1", "00", "01", "10", "11"}) {
    const BitString s = eta + BitString(tail);
    q[std::string("M(η") + tail + ")"] = m(s);
    q[std::string("N(η") + tail + ")"] = n(s);
  }
  auto M = [&](const char* t) { return q[std::string("M(η") + t + ")"]; };
  auto N = [&](const char* t) { return q[std::string("N(η") + t + ")"]; };

  for (const auto& [name, v] : q) {
    if (!chk.require(v >= 0, name + " is negative")) return out;
  }
  for (const auto* p : {&spec.m00, &spec.m10, &spec.n0, &spec.n1, &spec.c}) {
    if (!chk.require(*p >= 0, "block parameters must be non-negative")) return out;
  }
  chk.require(M("0") == M("") && M("1") == M(""), "M bets at η (even length)");
  chk.require(N("00") == N("0") && N("01") == N("0"), "N bets at η0 (odd length)");
  chk.require(N("10") == N("1") && N("11") == N("1"), "N bets at η1 (odd length)");
  chk.require(M("00") + M("01") <= 2 * M("0"), "supermartingale law fails for M at η0");
  chk.require(M("10") + M("11") <= 2 * M("1"), "supermartingale law fails for M at η1");
  chk.require(N("0") + N("1") <= 2 * N(""), "supermartingale law fails for N at η");
  chk.require(M("00") >= spec.m00, "M(η00) < m00");
  chk.require(M("10") >= spec.m10, "M(η10) < m10");
  chk.require(N("0") >= spec.n0, "N(η0) < n0");
  chk.require(N("1") >= spec.n1, "N(η1) < n1");
  chk.require(M("") + N("") <= spec.c, "M(η) + N(η) > c");
  chk.require(spec.m00 + spec.n0 >= spec.c, "m00 + n0 < c");
  chk.require(spec.m10 + spec.n1 >= spec.c, "m10 + n1 < c");
  if (out.rejected) return out;

  out.first_branch = spec.n0 <= spec.n1;
  out.tau = eta + BitString(out.first_branch ? "01" : "11");
  out.lhs = out.first_branch ? M("01") + N("01") : M("11") + N("11");
  out.holds = out.lhs <= spec.c;
  return out;
}

EnumState enumerate_V(const BitString& eta, const Capital& c, const StageApprox& m, const StageApprox& n,
                      long budget) {
  EnumState state;
  state.eta = eta;
  state.c = c;
  state.enumerated = {eta + BitString("00"), eta + BitString("10")};
  return enumerate_V(std::move(state), m, n, budget);
}

EnumState enumerate_V(EnumState state, const StageApprox& m, const StageApprox& n, long budget) {
  if (state.phase == EnumPhase::Closed || budget <= state.last_stage) return state;
  const BitString s00 = state.eta + BitString("00"), s10 = state.eta + BitString("10");
  const BitString s0 = state.eta.child(0), s1 = state.eta.child(1);
  const auto mv00 = m.component_values(s00), mv10 = m.component_values(s10);
  const auto nv00 = n.component_values(s00), nv10 = n.component_values(s10);
  auto triggered = [&](long s) {
    return m.sum_active(s, mv00) + n.sum_active(s, nv00) > state.c &&
           m.sum_active(s, mv10) + n.sum_active(s, nv10) > state.c;
  };

  // Candidate stages in (last_stage, budget]; values only move at change stages.
  std::set<long> cand;
  cand.insert(std::max(0L, state.last_stage + 1));
  for (const auto& approx : {&m, &n}) {
    for (long s : approx->change_stages()) {
      if (s > state.last_stage && s <= budget) cand.insert(s);
    }
  }
  std::vector<long> stages(cand.begin(), cand.end());
  while (!stages.empty() && stages.back() > budget) stages.pop_back();

  // The trigger is monotone in the stage, so the first firing stage is found by bisection.
  if (stages.empty() || !triggered(stages.back())) {
    state.last_stage = budget;
    return state;
  }
  std::size_t lo = 0, hi = stages.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (triggered(stages[mid])) hi = mid;
    else lo = mid + 1;
  }
  const long s = stages[lo];
  BlockSpec rec{m.sum_active(s, mv00), m.sum_active(s, mv10), n.eval(s, s0), n.eval(s, s1), state.c};
  state.enumerated.push_back(state.eta + BitString(rec.n0 <= rec.n1 ? "01" : "11"));
  state.recorded = rec;
  state.trigger_stage = s;
  state.last_stage = s;
  state.phase = EnumPhase::Closed;
  return state;
}

ParityTestResult build_parity_test(const StageApprox& m, const StageApprox& n, const ParityTestOptions& options) {
  if (m.parity() != ParityTag::BetsOnOdd || n.parity() != ParityTag::BetsOnEven) {
    throw DomainError("parity test needs a BetsOnOdd and a BetsOnEven approximation");
  }
  const long S = options.stages;
  auto value = [&](const BitString& s) -> Capital { return m.eval(S, s) + n.eval(S, s); };
  if (value(BitString()) > options.c) throw DomainError("joint λ-value exceeds c at the final stage");

  ParityTestResult out;
  out.array.flavor = TestFlavor::Block34;
  out.array.levels.push_back({BitString()});
  std::vector<BitString> survivors{BitString()};
  out.report.push_back(SurvivorLevel{0, survivors, 1, 0, Rational(1)});

  for (std::size_t level = 1; level <= options.depth; ++level) {
    std::vector<BitString> next;
    std::map<BitString, BitString> first_survivor_child;
    std::size_t fanout = 0;
    const std::size_t width = std::min(options.width, survivors.size());
    std::vector<BitString> expanded(survivors.begin(), survivors.begin() + static_cast<long>(width));
    for (const auto& parent : expanded) {
      EnumState st = enumerate_V(parent, options.c, m, n, S);
      fanout = std::max(fanout, st.enumerated.size());
      for (const auto& child : st.enumerated) next.push_back(child);
      out.enumerations.push_back(std::move(st));
    }
    std::sort(next.begin(), next.end());
    std::vector<BitString> next_survivors;
    for (const auto& s : next) {
      if (value(s) <= options.c) next_survivors.push_back(s);
    }
    SurvivorLevel rep;
    rep.level = level;
    rep.survivors = next_survivors;
    rep.members = next.size();
    rep.max_fanout = fanout;
    rep.measure = Rational(static_cast<unsigned long>(next.size())) / pow2(static_cast<long>(2 * level));
    out.report.push_back(std::move(rep));
    out.array.levels.push_back(std::move(next));

    BitString step;
    bool found = false;
    for (const auto& s : next_survivors) {
      if (out.path.is_prefix_of(s)) {
        step = s;
        found = true;
        break;
      }
    }
    if (!found) throw DomainError("no surviving extension of " + out.path.display() + " at level " + std::to_string(level));
    out.path = step;
    survivors = std::move(next_survivors);
    // The path's parent must stay expandable within the width cap.
    auto it = std::find(survivors.begin(), survivors.end(), out.path);
    if (static_cast<std::size_t>(it - survivors.begin()) >= options.width) {
      std::rotate(survivors.begin(), it, it + 1);
    }
  }
  return out;
}

PackingCertificate::PackingCertificate(TestArray array) : array_(std::move(array)) {
  if (auto d = block34_defect(array_)) throw DomainError("malformed test array: " + *d);
  for (const auto& level : array_.levels) members_.emplace_back(level.begin(), level.end());
}

Capital PackingCertificate::value(const BitString& s) const {
  if (s.size() % 2 == 1) return (value(s.child(0)) + value(s.child(1))) / 2;
  const std::size_t level = s.size() / 2;
  if (level >= members_.size() || !members_[level].count(s)) return 0;
  return pow(Rational(4, 3), static_cast<unsigned long>(level));
}

Evaluator PackingCertificate::evaluator() const {
  return [this](const BitString& s) { return value(s); };
}

StrategyTable PackingCertificate::to_table(std::size_t depth) const {
  return StrategyTable::tabulate(depth, evaluator(), Kind::Supermartingale);
}

std::vector<PackingCertificate::LevelGrowth> PackingCertificate::growth_report() const {
  std::vector<LevelGrowth> out;
  for (std::size_t i = 0; i < array_.levels.size(); ++i) {
    LevelGrowth g;
    g.level = i;
    g.members = array_.levels[i].size();
    g.value = pow(Rational(4, 3), static_cast<unsigned long>(i));
    for (const auto& s : array_.levels[i]) {
      Capital sum = 0;
      for (const char* t : {"00", "01", "10", "11"}) sum += value(s + BitString(t));
      if (sum > 4 * value(s)) g.packing_ok = false;
    }
    out.push_back(g);
  }
  return out;
}

LogExpr PackingCertificate::dimension_bound() {
  return LogExpr::rational(1) - LogExpr::log2_of(Rational(4, 3)) * Rational(1, 2);
}

StageApprox mixture(const std::vector<BetProgram>& components, const std::vector<long>& activation) {
  if (components.empty()) throw DomainError("mixture of no components");
  if (!activation.empty() && activation.size() != components.size()) {
    throw DomainError("one activation stage per component is required");
  }
  const ParityTag tag = components.front().parity();
  Kind kind = Kind::Martingale;
  std::vector<StageComponent> comps;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& p = components[i];
    if (p.parity() != tag) {
      throw DomainError("component " + std::to_string(i) + " is " + to_string(p.parity()) + ", expected " +
                        to_string(tag));
    }
    if (p.initial() > 1) throw DomainError("component " + std::to_string(i) + " has λ-capital above 1");
    if (p.kind() == Kind::Supermartingale) kind = Kind::Supermartingale;
    const long stage = activation.empty() ? static_cast<long>(i) : activation[i];
    comps.push_back(StageComponent{stage, pow2(-static_cast<long>(i) - 2), p});
  }
  return StageApprox(kind, tag, SidedTag::Unrestricted, std::move(comps));
}

}  // namespace paritylab
