#pragma once

#include <cstddef>
#include <vector>

#include "paritylab/bet_program.hpp"

namespace paritylab {

struct StageComponent {
  long stage = 0;  // activation stage
  Capital weight;
  BetProgram program;
};

/// Left-c.e. strategy as a growing weighted sum of lazily evaluated programs:
/// eval(s, σ) sums weight * program(σ) over components active by stage s.
class StageApprox {
 public:
  StageApprox(Kind kind, ParityTag parity, SidedTag sided, std::vector<StageComponent> components);

  Kind kind() const { return kind_; }
  ParityTag parity() const { return parity_; }
  SidedTag sided() const { return sided_; }
  const std::vector<StageComponent>& components() const { return components_; }

  Capital eval(long stage, const BitString& s) const;

  // Unweighted program values at σ, one per component; sum_active weighs
  // them for a stage, so one evaluation serves every stage.
  std::vector<Capital> component_values(const BitString& s) const;
  Capital sum_active(long stage, const std::vector<Capital>& values) const;

  // Sorted distinct activation stages; eval(·, σ) is constant between them.
  std::vector<long> change_stages() const;
  // Last activation stage (0 when there are no components).
  long final_stage() const;

  Evaluator at_stage(long stage) const;
  StrategyTable tabulate(long stage, std::size_t depth) const;

 private:
  Kind kind_;
  ParityTag parity_;
  SidedTag sided_;
  std::vector<StageComponent> components_;
};

}  // namespace paritylab
