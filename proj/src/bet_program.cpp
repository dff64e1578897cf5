#include "paritylab/bet_program.hpp"

#include <algorithm>

#include "paritylab/errors.hpp"

namespace paritylab {

namespace {

constexpr std::size_t kMaxContextOrder = 16;

FiniteStateMachine compile_constant(const ConstantRule& r) {
  FiniteStateMachine m;
  m.states.push_back(FsmState{r.stake, {0, 0}});
  return m;
}

FiniteStateMachine compile_context(const ContextRule& r) {
  if (r.order > kMaxContextOrder) throw DomainError("context order too large");
  for (const auto& [ctx, stake] : r.stakes) {
    if (ctx.size() > r.order) {
      throw StructuralError("context " + ctx.display() + " is longer than the rule order");
    }
  }
  // States are the strings of length <= order, numbered breadth-first.
  FiniteStateMachine m;
  const std::size_t n = StrategyTable::table_size(r.order);
  m.states.resize(n);
  for (std::size_t len = 0; len <= r.order; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      const BitString ctx = BitString::from_index(len, i);
      const std::size_t id = StrategyTable::slot(ctx);
      auto it = r.stakes.find(ctx);
      m.states[id].stake = it == r.stakes.end() ? Rational(0) : it->second;
      for (int b = 0; b < 2; ++b) {
        BitString next = ctx.child(b);
        if (next.size() > r.order) next = BitString(next.str().substr(1));
        m.states[id].next[b] = StrategyTable::slot(next);
      }
    }
  }
  return m;
}

// Trie over a set of strings plus an absorbing zero-stake sink.
FiniteStateMachine compile_trie(const std::map<BitString, Rational>& stakes) {
  std::map<BitString, std::size_t> ids;
  std::vector<BitString> nodes;
  auto add = [&](const BitString& s) {
    if (ids.emplace(s, nodes.size()).second) nodes.push_back(s);
  };
  add(BitString());
  for (const auto& [s, stake] : stakes) {
    for (std::size_t len = 0; len <= s.size(); ++len) add(s.prefix(len));
  }
  FiniteStateMachine m;
  m.states.resize(nodes.size() + 1);
  const std::size_t sink = nodes.size();
  m.states[sink] = FsmState{Rational(0), {sink, sink}};
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    auto it = stakes.find(nodes[id]);
    m.states[id].stake = it == stakes.end() ? Rational(0) : it->second;
    for (int b = 0; b < 2; ++b) {
      auto jt = ids.find(nodes[id].child(b));
      m.states[id].next[b] = jt == ids.end() ? sink : jt->second;
    }
  }
  m.start = ids[BitString()];
  return m;
}

FiniteStateMachine compile_target(const TargetRule& r) {
  if (r.stake < 0) throw StructuralError("target rule stake must be a non-negative magnitude");
  std::map<BitString, Rational> stakes;
  for (std::size_t len = 0; len < r.target.size(); ++len) {
    stakes[r.target.prefix(len)] = r.target[len] ? r.stake : Rational(-r.stake);
  }
  stakes[r.target] = 0;
  return compile_trie(stakes);
}

}  // namespace

FiniteStateMachine compile_rule(const Rule& rule) {
  return std::visit(
      [](const auto& r) -> FiniteStateMachine {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantRule>) return compile_constant(r);
        if constexpr (std::is_same_v<T, ContextRule>) return compile_context(r);
        if constexpr (std::is_same_v<T, TargetRule>) return compile_target(r);
        if constexpr (std::is_same_v<T, SparseRule>) return compile_trie(r.stakes);
      },
      rule);
}

BetProgram BetProgram::fractional(Capital initial, Rule rule, ParityTag parity, SidedTag sided) {
  BetProgram p;
  p.form_ = ProgramForm::Fractional;
  p.unit_ = StakeUnit::Fraction;
  p.initial_ = std::move(initial);
  p.parity_ = parity;
  p.sided_ = sided;
  p.rule_ = std::move(rule);
  p.compile();
  return p;
}

BetProgram BetProgram::integer(Integer initial, Rule rule, ParityTag parity, SidedTag sided) {
  BetProgram p;
  p.form_ = ProgramForm::Integer;
  p.unit_ = StakeUnit::Integer;
  p.initial_ = Rational(initial);
  p.parity_ = parity;
  p.sided_ = sided;
  p.rule_ = std::move(rule);
  p.compile();
  return p;
}

BetProgram BetProgram::fsm(Capital initial, FiniteStateMachine machine, StakeUnit unit, ParityTag parity,
                           SidedTag sided) {
  BetProgram p;
  p.form_ = ProgramForm::Fsm;
  p.unit_ = unit;
  p.initial_ = std::move(initial);
  p.parity_ = parity;
  p.sided_ = sided;
  p.machine_ = std::move(machine);
  p.compile();
  return p;
}

BetProgram BetProgram::table(StrategyTable table) {
  BetProgram p;
  p.form_ = ProgramForm::Table;
  p.unit_ = StakeUnit::Fraction;
  p.initial_ = table.at(BitString());
  p.parity_ = table.parity();
  p.sided_ = table.sided();
  p.table_ = std::move(table);
  return p;
}

void BetProgram::compile() {
  if (initial_ < 0) throw DomainError("negative initial capital");
  if (rule_) machine_ = compile_rule(*rule_);
  const FiniteStateMachine& m = *machine_;
  if (m.states.empty()) throw StructuralError("finite-state program has no states");
  if (m.start >= m.states.size()) throw StructuralError("start state out of range");
  for (const FsmState& st : m.states) {
    for (std::size_t nx : st.next) {
      if (nx >= m.states.size()) throw StructuralError("transition target out of range");
    }
    if (unit_ == StakeUnit::Fraction && abs(st.stake) > 1) {
      throw DomainError("fractional stake " + to_string(st.stake) + " outside [-1, 1]");
    }
    if (unit_ == StakeUnit::Integer && !is_integer(st.stake)) {
      throw DomainError("integer program with non-integer stake " + to_string(st.stake));
    }
  }
  if (unit_ == StakeUnit::Integer && !is_integer(initial_)) {
    throw DomainError("integer program with non-integer initial capital");
  }
}

Kind BetProgram::kind() const { return table_ ? table_->kind() : Kind::Martingale; }

Rational BetProgram::masked_stake(std::size_t q, std::size_t length) const {
  if (!bets_at(parity_, length)) return 0;
  const Rational& raw = machine_->states[q].stake;
  if (sided_ == SidedTag::ZeroSided && raw > 0) return 0;
  if (sided_ == SidedTag::OneSided && raw < 0) return 0;
  return raw;
}

BetProgram::Cursor::Cursor(const BetProgram& program)
    : program_(&program), q_(program.machine_ ? program.machine_->start : 0), capital_(program.initial_) {}

Rational BetProgram::Cursor::wager() const {
  if (program_->table_) {
    const StrategyTable& t = *program_->table_;
    if (state_.size() >= t.depth()) return 0;
    // Martingale-equivalent part of the move; savings are not a wager.
    return (t.at(state_.child(1)) - t.at(state_.child(0))) / 2;
  }
  return program_->wager_at(q_, state_.size(), capital_);
}

Rational BetProgram::wager_at(std::size_t q, std::size_t length, const Capital& capital) const {
  const Rational stake = masked_stake(q, length);
  if (unit_ == StakeUnit::Fraction) return stake * capital;
  const Rational amount = min(abs(stake), capital);
  return stake < 0 ? Rational(-amount) : amount;
}

Capital BetProgram::Cursor::peek(int bit) const {
  if (program_->table_) return program_->table_->value_or_frozen(state_.child(bit));
  const Rational w = wager();
  return bit ? Capital(capital_ + w) : Capital(capital_ - w);
}

void BetProgram::Cursor::advance(int bit) {
  capital_ = peek(bit);
  if (program_->machine_) q_ = program_->machine_->states[q_].next[bit];
  state_.push_back(bit);
}

Capital BetProgram::value(const BitString& s) const {
  if (table_) return table_->value_or_frozen(s);
  Cursor c(*this);
  for (std::size_t i = 0; i < s.size(); ++i) c.advance(s[i]);
  return c.capital();
}

std::vector<Capital> BetProgram::tabulate(std::size_t depth) const {
  const std::size_t size = StrategyTable::table_size(depth);
  std::vector<Capital> out(size);
  if (table_) {
    for (std::size_t len = 0; len <= depth; ++len) {
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
        const BitString s = BitString::from_index(len, i);
        out[StrategyTable::slot(s)] = table_->value_or_frozen(s);
      }
    }
    return out;
  }
  std::vector<std::size_t> q(size);
  out[0] = initial_;
  q[0] = machine_->start;
  std::size_t len = 0;
  for (std::size_t i = 0; 2 * i + 2 < size; ++i) {
    if (i + 1 == (std::size_t{2} << len)) ++len;
    const Rational w = wager_at(q[i], len, out[i]);
    out[2 * i + 1] = out[i] - w;
    out[2 * i + 2] = out[i] + w;
    q[2 * i + 1] = machine_->states[q[i]].next[0];
    q[2 * i + 2] = machine_->states[q[i]].next[1];
  }
  return out;
}

std::vector<Capital> BetProgram::trajectory(const BitString& s) const {
  std::vector<Capital> out;
  out.reserve(s.size() + 1);
  Cursor c(*this);
  out.push_back(c.capital());
  for (std::size_t i = 0; i < s.size(); ++i) {
    c.advance(s[i]);
    out.push_back(c.capital());
  }
  return out;
}

}  // namespace paritylab
