#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "paritylab/bitstring.hpp"
#include "paritylab/rational.hpp"
#include "paritylab/strategy_table.hpp"
#include "paritylab/tags.hpp"

namespace paritylab {

// Stakes are signed: positive favors outcome 1, negative favors outcome 0.
// Fractional programs read the magnitude as a fraction of current capital
// (at most 1); integer programs read it as an integer wager, clamped to the
// current capital.

struct ConstantRule {
  Rational stake;
};

// Stake looked up from the last min(order, |σ|) bits; missing contexts stake 0.
struct ContextRule {
  std::size_t order = 0;
  std::map<BitString, Rational> stakes;
};

// While σ is a proper prefix of target, stake |stake| toward target[|σ|].
struct TargetRule {
  BitString target;
  Rational stake;
};

// Explicit stakes at named states, 0 elsewhere.
struct SparseRule {
  std::map<BitString, Rational> stakes;
};

using Rule = std::variant<ConstantRule, ContextRule, TargetRule, SparseRule>;

struct FsmState {
  Rational stake;
  std::array<std::size_t, 2> next{0, 0};
};

/// Mealy machine: the stake is read off the automaton state reached on σ.
struct FiniteStateMachine {
  std::size_t start = 0;
  std::vector<FsmState> states;
};

enum class ProgramForm { Fractional, Integer, Fsm, Table };
enum class StakeUnit { Fraction, Integer };

/// Finitely described betting strategy, evaluated lazily along a state.
///
/// Rule forms are compiled to a finite-state machine at construction, so
/// evaluation at σ costs O(|σ|) automaton steps for every form except Table,
/// which reads a depth-bounded table and stays constant beyond its depth.
class BetProgram {
 public:
  static BetProgram fractional(Capital initial, Rule rule, ParityTag parity = ParityTag::Unrestricted,
                               SidedTag sided = SidedTag::Unrestricted);
  static BetProgram integer(Integer initial, Rule rule, ParityTag parity = ParityTag::Unrestricted,
                            SidedTag sided = SidedTag::Unrestricted);
  static BetProgram fsm(Capital initial, FiniteStateMachine machine, StakeUnit unit,
                        ParityTag parity = ParityTag::Unrestricted, SidedTag sided = SidedTag::Unrestricted);
  static BetProgram table(StrategyTable table);

  ProgramForm form() const { return form_; }
  StakeUnit unit() const { return unit_; }
  const Capital& initial() const { return initial_; }
  ParityTag parity() const { return parity_; }
  SidedTag sided() const { return sided_; }
  Kind kind() const;
  const std::optional<Rule>& rule() const { return rule_; }
  const std::optional<StrategyTable>& source_table() const { return table_; }

  /// The compiled automaton; nullopt for the Table form.
  const std::optional<FiniteStateMachine>& machine() const { return machine_; }

  /// Stake of automaton state q at a state of the given length, after the
  /// parity and sided constraints are applied.
  Rational masked_stake(std::size_t q, std::size_t length) const;

  /// Signed effective wager of automaton state q at the given length and capital.
  /// Not meaningful for the Table form.
  Rational wager_at(std::size_t q, std::size_t length, const Capital& capital) const;

  Capital value(const BitString& s) const;
  // Values on every string of length <= depth, in breadth-first slot order.
  std::vector<Capital> tabulate(std::size_t depth) const;
  std::vector<Capital> trajectory(const BitString& s) const;

  class Cursor {
   public:
    explicit Cursor(const BetProgram& program);
    const Capital& capital() const { return capital_; }
    std::size_t length() const { return state_.size(); }
    std::size_t automaton_state() const { return q_; }
    const BitString& state() const { return state_; }
    // Signed effective wager at the current state (positive: on 1).
    Rational wager() const;
    // Capital after appending bit, without moving.
    Capital peek(int bit) const;
    void advance(int bit);

   private:
    const BetProgram* program_;
    BitString state_;
    std::size_t q_ = 0;
    Capital capital_;
  };

  Cursor cursor() const { return Cursor(*this); }

 private:
  BetProgram() = default;
  void compile();

  ProgramForm form_ = ProgramForm::Fractional;
  StakeUnit unit_ = StakeUnit::Fraction;
  Capital initial_;
  ParityTag parity_ = ParityTag::Unrestricted;
  SidedTag sided_ = SidedTag::Unrestricted;
  std::optional<Rule> rule_;
  std::optional<FiniteStateMachine> machine_;
  std::optional<StrategyTable> table_;
};

FiniteStateMachine compile_rule(const Rule& rule);

}  // namespace paritylab
