#include "paritylab/int_casino.hpp"

#include <deque>
#include <functional>
#include <set>

#include "paritylab/errors.hpp"

namespace paritylab {

BetProgram builtin_N() { return BetProgram::integer(5, ConstantRule{1}); }

BetProgram builtin_D() {
  FiniteStateMachine m;
  m.start = 0;
  m.states = {FsmState{-1, {1, 1}}, FsmState{1, {0, 0}}};
  return BetProgram::fsm(5, m, StakeUnit::Integer);
}

BetProgram builtin(Engine e) { return e == Engine::N ? builtin_N() : builtin_D(); }

int engine_favored(Engine e, std::size_t length) {
  if (e == Engine::N) return 1;
  return length % 2 == 0 ? 0 : 1;
}

bool is_integer_valued(const BetProgram& p) {
  if (p.form() != ProgramForm::Table) return p.unit() == StakeUnit::Integer;
  for (const auto& v : p.source_table()->values()) {
    if (!is_integer(v)) return false;
  }
  return true;
}

namespace {

using Config = std::pair<std::size_t, int>;  // automaton state, length parity

const FiniteStateMachine& machine_of(const BetProgram& p) {
  if (!p.machine() || p.unit() != StakeUnit::Integer) {
    throw DomainError("cone constancy is only decidable here for finite-state integer programs");
  }
  return *p.machine();
}

bool betting(const BetProgram& p, const Config& c) { return p.masked_stake(c.first, c.second) != 0; }

std::set<Config> reachable(const BetProgram& p, const Config& start) {
  const auto& m = machine_of(p);
  std::set<Config> seen{start};
  std::deque<Config> queue{start};
  while (!queue.empty()) {
    const Config c = queue.front();
    queue.pop_front();
    for (int b = 0; b < 2; ++b) {
      const Config n{m.states[c.first].next[b], 1 - c.second};
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  return seen;
}

// Lexicographically least shortest bit path to a betting configuration, with
// bits restricted by `allowed(parity)`.
std::optional<std::vector<int>> path_to_bet(const BetProgram& p, const Config& start,
                                            const std::function<std::vector<int>(int)>& allowed) {
  const auto& m = machine_of(p);
  std::map<Config, std::pair<Config, int>> pred;
  std::set<Config> seen{start};
  std::deque<Config> queue{start};
  while (!queue.empty()) {
    const Config c = queue.front();
    queue.pop_front();
    if (betting(p, c)) {
      std::vector<int> bits;
      for (Config at = c; at != start;) {
        const auto& [from, bit] = pred.at(at);
        bits.push_back(bit);
        at = from;
      }
      return std::vector<int>(bits.rbegin(), bits.rend());
    }
    for (int b : allowed(c.second)) {
      const Config n{m.states[c.first].next[b], 1 - c.second};
      if (seen.insert(n).second) {
        pred[n] = {c, b};
        queue.push_back(n);
      }
    }
  }
  return std::nullopt;
}

bool probe(const BetProgram& p, std::size_t q, std::size_t length, const Capital& capital, const Capital& expect,
           std::size_t remaining) {
  if (capital != expect) return false;
  if (remaining == 0) return true;
  const Rational w = p.wager_at(q, length, capital);
  const auto& next = p.machine()->states[q].next;
  return probe(p, next[0], length + 1, capital - w, expect, remaining - 1) &&
         probe(p, next[1], length + 1, capital + w, expect, remaining - 1);
}

}  // namespace

bool check_certificate(const BetProgram& p, const ConeCertificate& cert) {
  if (!p.machine()) return false;
  auto cur = p.cursor();
  for (std::size_t i = 0; i < cert.at.size(); ++i) cur.advance(cert.at[i]);
  if (cur.capital() != cert.capital || cur.automaton_state() != cert.automaton_state) return false;
  if (cert.zero_capital) return cert.capital == 0;
  const auto& m = *p.machine();
  const std::set<Config> closure(cert.closure.begin(), cert.closure.end());
  if (!closure.count({cert.automaton_state, static_cast<int>(cert.at.size() % 2)})) return false;
  for (const auto& c : closure) {
    if (betting(p, c)) return false;
    for (int b = 0; b < 2; ++b) {
      if (!closure.count({m.states[c.first].next[b], 1 - c.second})) return false;
    }
  }
  return true;
}

bool probe_cone(const BetProgram& p, const BitString& at, std::size_t depth) {
  if (!p.machine()) throw DomainError("cone probe needs a finite-state program");
  auto cur = p.cursor();
  for (std::size_t i = 0; i < at.size(); ++i) cur.advance(at[i]);
  return probe(p, cur.automaton_state(), at.size(), cur.capital(), cur.capital(), depth);
}

SettleResult find_settling_extension(const BetProgram& adversary, const BitString& rho, long c, SettleMode mode) {
  const auto& machine = machine_of(adversary);
  const Engine engine = mode == SettleMode::Parity ? Engine::N : Engine::D;
  if (mode == SettleMode::Parity && adversary.parity() == ParityTag::Unrestricted) {
    throw DomainError("parity mode needs a single-parity adversary");
  }
  if (mode == SettleMode::Sided && adversary.sided() == SidedTag::Unrestricted) {
    throw DomainError("sided mode needs a single-sided adversary");
  }
  const BetProgram eng = builtin(engine);
  auto ec = eng.cursor();
  auto ac = adversary.cursor();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    ec.advance(rho[i]);
    ac.advance(rho[i]);
  }
  if (ec.capital() <= 2) throw DomainError("engine capital at ρ is " + to_string(ec.capital()) + ", must exceed 2");

  // Bits the construction pins at positions where the adversary cannot profit.
  auto fixed_bit = [&](int parity) -> std::optional<int> {
    if (mode == SettleMode::Parity) {
      if (!bets_at(adversary.parity(), static_cast<std::size_t>(parity))) return engine_favored(engine, parity);
      return std::nullopt;
    }
    const int i = favored_outcome(adversary.sided());
    if (engine_favored(engine, static_cast<std::size_t>(parity)) == 1 - i) return 1 - i;
    return std::nullopt;
  };
  auto restricted = [&](int parity) -> std::vector<int> {
    if (auto f = fixed_bit(parity)) return {*f};
    return {0, 1};
  };
  auto any_bit = [](int) -> std::vector<int> { return {0, 1}; };

  SettleResult out;
  out.tau = rho;
  auto append = [&](int bit) {
    ec.advance(bit);
    ac.advance(bit);
    out.tau.push_back(bit);
  };
  auto step = [&](const std::string& rule, const std::vector<int>& bits) {
    if (bits.empty()) return;
    out.steps.push_back(SettleStep{rule, out.tau.size(), bits.size()});
    for (int b : bits) append(b);
  };
  auto config = [&] { return Config{ac.automaton_state(), static_cast<int>(ac.length() % 2)}; };
  auto punish = [&] {
    const Rational stake = adversary.masked_stake(ac.automaton_state(), ac.length());
    step("punish", {stake > 0 ? 0 : 1});
  };
  const long pump = 2 * static_cast<long>(machine.states.size()) + 2;

  while (ac.capital() > 0) {
    if (auto path = path_to_bet(adversary, config(), restricted)) {
      step("navigate", *path);
      punish();
      continue;
    }
    if (!path_to_bet(adversary, config(), any_bit)) break;
    std::vector<int> bits;
    for (long i = 0; i < pump; ++i) bits.push_back(engine_favored(engine, out.tau.size() + bits.size()));
    step("pump", bits);
    if (auto path = path_to_bet(adversary, config(), any_bit)) {
      step("navigate", *path);
      punish();
    }
  }

  ConeCertificate& cert = out.certificate;
  cert.at = out.tau;
  cert.capital = ac.capital();
  cert.automaton_state = ac.automaton_state();
  cert.zero_capital = ac.capital() == 0;
  if (!cert.zero_capital) {
    const auto closure = reachable(adversary, config());
    cert.closure.assign(closure.begin(), closure.end());
  }
  std::vector<int> finish;
  for (long i = 0; i < c; ++i) finish.push_back(engine_favored(engine, out.tau.size() + finish.size()));
  step("finish", finish);
  if (ec.capital() <= c) throw DomainError("engine fell to " + to_string(ec.capital()) + " during settling");
  return out;
}

namespace {

class TraceBuilder {
 public:
  TraceBuilder(const std::vector<BetProgram>& advs, Engine engine, DiagTrace& trace)
      : engine_program_(builtin(engine)), engine_(engine_program_.cursor()), trace_(trace) {
    for (const auto& a : advs) advs_.push_back(a.cursor());
    trace_.engine = engine;
    trace_.engine_initial = engine_.capital();
    for (const auto& a : advs_) trace_.adversary_initial.push_back(a.capital());
  }

  void append(int bit, const std::string& rule) {
    engine_.advance(bit);
    BitRecord r;
    r.bit = bit;
    r.engine = engine_.capital();
    r.rule = rule;
    for (auto& a : advs_) {
      a.advance(bit);
      r.adversaries.push_back(a.capital());
    }
    trace_.z.push_back(bit);
    trace_.records.push_back(std::move(r));
  }

  const BetProgram::Cursor& engine() const { return engine_; }
  const std::vector<BetProgram::Cursor>& adversaries() const { return advs_; }
  std::size_t length() const { return trace_.z.size(); }

 private:
  BetProgram engine_program_;
  BetProgram::Cursor engine_;
  std::vector<BetProgram::Cursor> advs_;
  DiagTrace& trace_;
};

void check_restrictions(const std::vector<BetProgram>& advs, Engine engine) {
  for (std::size_t i = 0; i < advs.size(); ++i) {
    const auto& a = advs[i];
    if (!is_integer_valued(a)) throw DomainError("adversary " + std::to_string(i) + " is not integer-valued");
    const bool restricted = engine == Engine::N ? a.parity() != ParityTag::Unrestricted
                                                : a.sided() != SidedTag::Unrestricted;
    if (!restricted) {
      throw DomainError("adversary " + std::to_string(i) + (engine == Engine::N ? " is not single-parity"
                                                                               : " is not single-sided"));
    }
  }
}

void add_block(TraceBuilder& b, DiagTrace& t, std::size_t i) {
  // Engine D only keeps its capital through (01) blocks that start at even length.
  if (t.engine == Engine::D && b.length() % 2 == 1) b.append(engine_favored(Engine::D, b.length()), "align");
  const std::size_t start = b.length();
  const std::size_t pairs = std::size_t{1} << i;
  for (std::size_t k = 0; k < pairs; ++k) {
    b.append(0, "block");
    b.append(1, "block");
  }
  t.blocks.emplace_back(start, b.length());
  std::size_t covered = 0;
  for (const auto& [s, e] : t.blocks) covered += e - s;
  t.checkpoints.push_back(Checkpoint{b.length(), covered,
                                     Rational(static_cast<unsigned long>(covered)) /
                                         Rational(static_cast<unsigned long>(b.length())),
                                     b.engine().capital()});
}

}  // namespace

DiagTrace diagonalize(const std::vector<BetProgram>& adversaries, Engine engine, const DiagOptions& options) {
  check_restrictions(adversaries, engine);
  DiagTrace trace;
  TraceBuilder b(adversaries, engine, trace);
  const Capital target = options.target;

  if (options.mode == DiagMode::Greedy) {
    if (options.dim0) throw DomainError("dim0 blocks need settle mode");
    while (b.engine().capital() < target && b.length() < options.max_length) {
      if (b.engine().capital() == 0) break;
      const int f = engine_favored(engine, b.length());
      Rational gain = 0;  // aggregate adversary gain if f is played
      for (const auto& a : b.adversaries()) gain += f == 1 ? a.wager() : Rational(-a.wager());
      if (gain >= 1) {
        ++trace.deviations;
        b.append(1 - f, "deviate");
      } else {
        b.append(f, "favored");
      }
    }
  } else {
    const SettleMode mode = engine == Engine::N ? SettleMode::Parity : SettleMode::Sided;
    std::size_t block = 0;
    for (std::size_t i = 0; i < adversaries.size(); ++i) {
      SettleResult r = find_settling_extension(adversaries[i], trace.z, options.settle_margin, mode);
      for (const auto& st : r.steps) {
        for (std::size_t k = 0; k < st.length; ++k) {
          const std::size_t pos = st.start + k;
          b.append(r.tau[pos], st.rule);
        }
      }
      if (trace.z.size() != r.tau.size()) throw DomainError("settling trace out of sync");
      trace.certificates.push_back(r.certificate);
      if (options.dim0 && block < options.blocks) add_block(b, trace, block++);
    }
    while (b.engine().capital() < target && b.length() < options.max_length) {
      b.append(engine_favored(engine, b.length()), "favored");
    }
    if (options.dim0) {
      while (block < options.blocks) add_block(b, trace, block++);
    }
  }
  trace.reached_target = b.engine().capital() >= target;
  return trace;
}

std::optional<std::size_t> replay_mismatch(const DiagTrace& trace, const std::vector<BetProgram>& adversaries) {
  if (adversaries.size() != trace.adversary_initial.size() || trace.records.size() != trace.z.size()) return 0;
  const BetProgram eng = builtin(trace.engine);
  auto ec = eng.cursor();
  std::vector<BetProgram::Cursor> acs;
  for (std::size_t j = 0; j < adversaries.size(); ++j) {
    acs.push_back(adversaries[j].cursor());
    if (acs.back().capital() != trace.adversary_initial[j]) return 0;
  }
  for (std::size_t i = 0; i < trace.z.size(); ++i) {
    const auto& r = trace.records[i];
    if (r.bit != trace.z[i]) return i;
    ec.advance(r.bit);
    if (ec.capital() != r.engine || r.adversaries.size() != acs.size()) return i;
    for (std::size_t j = 0; j < acs.size(); ++j) {
      acs[j].advance(r.bit);
      if (acs[j].capital() != r.adversaries[j]) return i;
    }
  }
  return std::nullopt;
}

}  // namespace paritylab
