#include "paritylab/strategy_table.hpp"

#include <sstream>

#include "paritylab/errors.hpp"

namespace paritylab {

StrategyTable::StrategyTable(std::size_t depth, Kind kind, ParityTag parity, SidedTag sided,
                             std::vector<Capital> values)
    : depth_(depth), kind_(kind), parity_(parity), sided_(sided), values_(std::move(values)) {
  if (depth_ > kMaxDepth) {
    throw DomainError("table depth " + std::to_string(depth_) + " exceeds the supported maximum " +
                      std::to_string(kMaxDepth));
  }
  if (values_.size() != table_size(depth_)) {
    throw StructuralError("table of depth " + std::to_string(depth_) + " needs " +
                          std::to_string(table_size(depth_)) + " values, got " +
                          std::to_string(values_.size()));
  }
}

StrategyTable StrategyTable::from_map(std::size_t depth, Kind kind, ParityTag parity, SidedTag sided,
                                      const std::map<BitString, Capital>& values) {
  if (depth > kMaxDepth) {
    throw DomainError("table depth " + std::to_string(depth) + " exceeds the supported maximum");
  }
  std::vector<Capital> flat(table_size(depth));
  std::optional<BitString> missing;
  for (std::size_t len = 0; len <= depth; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      const BitString s = BitString::from_index(len, i);
      auto it = values.find(s);
      if (it == values.end()) {
        if (!missing || s < *missing) missing = s;
        continue;
      }
      flat[slot(s)] = it->second;
    }
  }
  if (missing) throw StructuralError("missing table entry for state " + missing->display());
  for (const auto& [s, v] : values) {
    if (s.size() > depth) {
      throw StructuralError("entry " + s.display() + " is deeper than the declared depth " +
                            std::to_string(depth));
    }
  }
  return StrategyTable(depth, kind, parity, sided, std::move(flat));
}

StrategyTable StrategyTable::tabulate(std::size_t depth, const Evaluator& f, Kind kind, ParityTag parity,
                                      SidedTag sided) {
  if (depth > kMaxDepth) throw DomainError("tabulation depth too large");
  std::vector<Capital> flat(table_size(depth));
  for (std::size_t len = 0; len <= depth; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      const BitString s = BitString::from_index(len, i);
      flat[slot(s)] = f(s);
    }
  }
  return StrategyTable(depth, kind, parity, sided, std::move(flat));
}

StrategyTable StrategyTable::constant(std::size_t depth, const Capital& c) {
  return StrategyTable(depth, Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted,
                       std::vector<Capital>(table_size(depth), c));
}

const Capital& StrategyTable::at(const BitString& s) const {
  if (s.size() > depth_) {
    throw DomainError("state " + s.display() + " is deeper than table depth " + std::to_string(depth_));
  }
  return values_[slot(s)];
}

const Capital& StrategyTable::value_or_frozen(const BitString& s) const {
  return s.size() <= depth_ ? values_[slot(s)] : values_[slot(s.prefix(depth_))];
}

StrategyTable StrategyTable::with_tags(Kind kind, ParityTag parity, SidedTag sided) const {
  return StrategyTable(depth_, kind, parity, sided, values_);
}

bool StrategyTable::operator==(const StrategyTable& other) const {
  return depth_ == other.depth_ && values_ == other.values_;
}

std::optional<Kind> Diagnosis::kind_verdict() const {
  if (!nonnegative) return std::nullopt;
  if (martingale) return Kind::Martingale;
  if (supermartingale) return Kind::Supermartingale;
  return std::nullopt;
}

namespace {

struct Scan {
  Diagnosis d;
  std::map<std::string, std::string> details;

  void fail(bool& flag, const std::string& property, const BitString& s, const std::string& detail) {
    flag = false;
    auto it = d.witnesses.find(property);
    if (it == d.witnesses.end() || s < it->second) {
      d.witnesses[property] = s;
      details[property] = detail;
    }
  }
};

}  // namespace

Diagnosis validate(const StrategyTable& t) {
  Scan scan;
  Diagnosis& d = scan.d;
  t.for_each_state([&](const BitString& s) {
    const Capital& v = t.at(s);
    if (v < 0) scan.fail(d.nonnegative, "nonnegative", s, "negative value " + to_string(v));
    if (s.size() == t.depth()) return;
    const Capital& c0 = t.at(s.child(0));
    const Capital& c1 = t.at(s.child(1));
    const Capital sum = c0 + c1;
    if (sum != 2 * v) {
      scan.fail(d.martingale, "martingale", s,
                "children sum " + to_string(sum) + " != 2*" + to_string(v));
    }
    if (sum > 2 * v) {
      scan.fail(d.supermartingale, "supermartingale", s,
                "children sum " + to_string(sum) + " > 2*" + to_string(v));
    }
    if (v == 0 && (c0 != 0 || c1 != 0)) {
      scan.fail(d.zero_propagation, "zero_propagation", s, "zero value with nonzero child");
    }
    const bool moves = c0 != v || c1 != v;
    if (moves && !bets_at(ParityTag::BetsOnEven, s.size())) {
      scan.fail(d.bets_on_even, "bets_on_even", s, "value changes after an odd-length state");
    }
    if (moves && !bets_at(ParityTag::BetsOnOdd, s.size())) {
      scan.fail(d.bets_on_odd, "bets_on_odd", s, "value changes after an even-length state");
    }
    if (c0 < c1) scan.fail(d.zero_sided, "zero_sided", s, "M(σ0) < M(σ1)");
    if (c1 < c0) scan.fail(d.one_sided, "one_sided", s, "M(σ1) < M(σ0)");
  });

  std::vector<std::string> declared = {"nonnegative", "zero_propagation"};
  declared.push_back(t.kind() == Kind::Martingale ? "martingale" : "supermartingale");
  if (t.parity() == ParityTag::BetsOnEven) declared.push_back("bets_on_even");
  if (t.parity() == ParityTag::BetsOnOdd) declared.push_back("bets_on_odd");
  if (t.sided() == SidedTag::ZeroSided) declared.push_back("zero_sided");
  if (t.sided() == SidedTag::OneSided) declared.push_back("one_sided");
  for (const auto& property : declared) {
    auto it = d.witnesses.find(property);
    if (it == d.witnesses.end()) continue;
    if (!d.first_violation || it->second < d.first_violation->state) {
      d.first_violation = Violation{property, it->second, scan.details[property]};
    }
  }
  return d;
}

void require_valid(const StrategyTable& table, const std::string& what) {
  const Diagnosis d = validate(table);
  if (d.first_violation) {
    std::ostringstream os;
    os << what << ": " << d.first_violation->property << " fails at " << d.first_violation->state.display()
       << " (" << d.first_violation->detail << ")";
    throw DomainError(os.str());
  }
}

}  // namespace paritylab
