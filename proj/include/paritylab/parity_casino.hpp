#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "paritylab/decompose.hpp"
#include "paritylab/log_expr.hpp"
#include "paritylab/stage_approx.hpp"

namespace paritylab {

enum class TestFlavor { Block34, STest };

/// Level sets V_0, V_1, ... of a finite test. Block34 arrays have V_0 = {λ}
/// and V_i ⊆ 2^{2i}; STest arrays carry the exponent s.
struct TestArray {
  TestFlavor flavor = TestFlavor::Block34;
  Rational s = 1;
  std::vector<std::vector<BitString>> levels;
};

// First structural defect of a Block34 array, if any.
std::optional<std::string> block34_defect(const TestArray& t);

struct BlockCheck {
  std::optional<std::string> rejected;  // failed hypothesis with witness
  bool holds = false;
  bool first_branch = false;  // n0 <= n1, so τ = η01
  BitString tau;
  Capital lhs;
  Capital c;
  std::map<std::string, Capital> quantities;
};

/// Checks one instance of the two-round inequality around η for a BetsOnOdd
/// supermartingale m and a BetsOnEven supermartingale n.
BlockCheck verify_block_inequality(const Evaluator& m, const Evaluator& n, const BitString& eta,
                                   const BlockSpec& spec);

enum class EnumPhase { Watching, Closed };

struct EnumState {
  BitString eta;
  Capital c;
  std::vector<BitString> enumerated;
  EnumPhase phase = EnumPhase::Watching;
  long last_stage = -1;
  long trigger_stage = -1;
  std::optional<BlockSpec> recorded;
};

EnumState enumerate_V(const BitString& eta, const Capital& c, const StageApprox& m, const StageApprox& n,
                      long budget);
// Continues a previous run up to the new budget.
EnumState enumerate_V(EnumState state, const StageApprox& m, const StageApprox& n, long budget);

struct SurvivorLevel {
  std::size_t level = 0;
  std::vector<BitString> survivors;  // members with current value <= c
  std::size_t members = 0;
  std::size_t max_fanout = 0;
  Rational measure;
};

struct ParityTestResult {
  TestArray array;
  BitString path;
  std::vector<SurvivorLevel> report;
  std::vector<EnumState> enumerations;
};

struct ParityTestOptions {
  std::size_t depth = 8;
  long stages = 1000;
  Capital c = 1;
  // Survivor parents expanded per level, in lexicographic order.
  std::size_t width = 16;
};

/// Nested test array against M + N: each surviving parent of level i is
/// expanded by enumerate_V; the path follows the leftmost survivor.
ParityTestResult build_parity_test(const StageApprox& m, const StageApprox& n, const ParityTestOptions& options);

/// Supermartingale paying 4/3 per level along a Block34 array and 0 off it.
class PackingCertificate {
 public:
  explicit PackingCertificate(TestArray array);

  const TestArray& array() const { return array_; }
  Capital value(const BitString& s) const;
  Evaluator evaluator() const;
  StrategyTable to_table(std::size_t depth) const;

  struct LevelGrowth {
    std::size_t level = 0;
    std::size_t members = 0;
    Capital value;       // (4/3)^level
    bool packing_ok = true;  // 4·M(σ) >= Σ of the four two-bit extensions
  };
  std::vector<LevelGrowth> growth_report() const;

  // 1 - log2(4/3)/2.
  static LogExpr dimension_bound();

 private:
  TestArray array_;
  std::vector<std::unordered_set<BitString>> members_;
};

/// Weighted sum of programs with a shared parity tag: component i gets weight
/// 2^{-i-2} and activates at stage i unless activation stages are supplied.
StageApprox mixture(const std::vector<BetProgram>& components, const std::vector<long>& activation = {});

}  // namespace paritylab
