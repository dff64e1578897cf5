#include "paritylab/decompose.hpp"

#include "paritylab/errors.hpp"

namespace paritylab {

ParityFactors parity_factorize(const StrategyTable& m) {
  require_valid(m.with_tags(Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted),
                "parity_factorize input");
  const std::size_t depth = m.depth();
  std::vector<Capital> e(StrategyTable::table_size(depth)), o(StrategyTable::table_size(depth));
  e[0] = 1;
  o[0] = 1;
  for (std::size_t len = 0; len < depth; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      const BitString s = BitString::from_index(len, i);
      const std::size_t at = StrategyTable::slot(s);
      for (int b = 0; b < 2; ++b) {
        const std::size_t to = StrategyTable::slot(s.child(b));
        const Capital& parent = m.at(s);
        const Capital ratio = parent == 0 ? Capital(1) : Capital(m.at(s.child(b)) / parent);
        if (len % 2 == 0) {
          o[to] = o[at] * ratio;
          e[to] = e[at];
        } else {
          e[to] = e[at] * ratio;
          o[to] = o[at];
        }
      }
    }
  }
  return ParityFactors{
      StrategyTable(depth, Kind::Martingale, ParityTag::BetsOnOdd, SidedTag::Unrestricted, std::move(e)),
      StrategyTable(depth, Kind::Martingale, ParityTag::BetsOnEven, SidedTag::Unrestricted, std::move(o))};
}

StrategyTable block_min_even(const Capital& m00, const Capital& m10) {
  if (m00 < 0 || m10 < 0) throw DomainError("block parameters must be non-negative");
  const Capital root = max(m00, m10) / 2;
  const bool left_heavy = m00 >= m10;
  std::map<BitString, Capital> v{
      {BitString(""), root},
      {BitString("0"), root},
      {BitString("1"), root},
      {BitString("00"), m00},
      {BitString("01"), left_heavy ? Capital(0) : Capital(m10 - m00)},
      {BitString("10"), m10},
      {BitString("11"), left_heavy ? Capital(m00 - m10) : Capital(0)},
  };
  return StrategyTable::from_map(2, Kind::Martingale, ParityTag::BetsOnOdd, SidedTag::Unrestricted, v);
}

StrategyTable block_first_round(const Capital& n0, const Capital& n1) {
  if (n0 < 0 || n1 < 0) throw DomainError("block parameters must be non-negative");
  std::map<BitString, Capital> v{
      {BitString(""), (n0 + n1) / 2}, {BitString("0"), n0}, {BitString("1"), n1}, {BitString("00"), n0},
      {BitString("01"), n0},          {BitString("10"), n1}, {BitString("11"), n1},
  };
  return StrategyTable::from_map(2, Kind::Martingale, ParityTag::BetsOnEven, SidedTag::Unrestricted, v);
}

namespace {

void require_at_least(const StrategyTable& t, const char* who, const char* state, const Capital& bound,
                      const char* name) {
  if (t.at(BitString(state)) < bound) {
    throw DomainError(std::string("hypothesis fails: ") + who + "(" + state + ") = " +
                      to_string(t.at(BitString(state))) + " < " + name + " = " + to_string(bound));
  }
}

StrategyTable difference(const StrategyTable& a, const StrategyTable& b, ParityTag tag, const char* name) {
  std::vector<Capital> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
  StrategyTable d(a.depth(), Kind::Martingale, tag, SidedTag::Unrestricted, std::move(v));
  const Diagnosis diag = validate(d);
  if (diag.first_violation) {
    throw DomainError(std::string(name) + " is not a non-negative single-parity martingale: " +
                      diag.first_violation->property + " fails at " + diag.first_violation->state.display());
  }
  return d;
}

}  // namespace

BlockDecomposition block_decompose(const StrategyTable& m, const StrategyTable& n, const BlockSpec& spec) {
  if (m.depth() != 2 || n.depth() != 2) throw DomainError("block decomposition works on depth-2 tables");
  require_valid(m.with_tags(Kind::Martingale, ParityTag::BetsOnOdd, SidedTag::Unrestricted), "M");
  require_valid(n.with_tags(Kind::Martingale, ParityTag::BetsOnEven, SidedTag::Unrestricted), "N");
  require_at_least(m, "M", "00", spec.m00, "m00");
  require_at_least(m, "M", "10", spec.m10, "m10");
  require_at_least(n, "N", "0", spec.n0, "n0");
  require_at_least(n, "N", "1", spec.n1, "n1");
  StrategyTable m0 = block_min_even(spec.m00, spec.m10);
  StrategyTable n0 = block_first_round(spec.n0, spec.n1);
  StrategyTable d_m = difference(m, m0, ParityTag::BetsOnOdd, "D_M");
  StrategyTable d_n = difference(n, n0, ParityTag::BetsOnEven, "D_N");
  return BlockDecomposition{std::move(m0), std::move(n0), std::move(d_m), std::move(d_n)};
}

}  // namespace paritylab
