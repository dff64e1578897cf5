#include "paritylab/stage_approx.hpp"

#include <algorithm>

#include "paritylab/errors.hpp"

namespace paritylab {

StageApprox::StageApprox(Kind kind, ParityTag parity, SidedTag sided, std::vector<StageComponent> components)
    : kind_(kind), parity_(parity), sided_(sided), components_(std::move(components)) {
  for (const auto& c : components_) {
    if (c.weight < 0) throw DomainError("negative component weight");
    if (c.stage < 0) throw DomainError("negative activation stage");
    if (c.program.kind() == Kind::Supermartingale && kind_ == Kind::Martingale) {
      throw DomainError("supermartingale component in a martingale approximation");
    }
  }
}

Capital StageApprox::eval(long stage, const BitString& s) const {
  Capital total = 0;
  for (const auto& c : components_) {
    if (c.stage <= stage && c.weight != 0) total += c.weight * c.program.value(s);
  }
  return total;
}

std::vector<Capital> StageApprox::component_values(const BitString& s) const {
  std::vector<Capital> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.program.value(s));
  return out;
}

Capital StageApprox::sum_active(long stage, const std::vector<Capital>& values) const {
  Capital total = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].stage <= stage) total += components_[i].weight * values[i];
  }
  return total;
}

std::vector<long> StageApprox::change_stages() const {
  std::vector<long> out;
  for (const auto& c : components_) out.push_back(c.stage);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long StageApprox::final_stage() const {
  long last = 0;
  for (const auto& c : components_) last = std::max(last, c.stage);
  return last;
}

Evaluator StageApprox::at_stage(long stage) const {
  return [this, stage](const BitString& s) { return eval(stage, s); };
}

StrategyTable StageApprox::tabulate(long stage, std::size_t depth) const {
  std::vector<Capital> total(StrategyTable::table_size(depth), Capital(0));
  for (const auto& c : components_) {
    if (c.stage > stage || c.weight == 0) continue;
    const auto part = c.program.tabulate(depth);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += c.weight * part[i];
  }
  return StrategyTable(depth, kind_, parity_, sided_, std::move(total));
}

}  // namespace paritylab
