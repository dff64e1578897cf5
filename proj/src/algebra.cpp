#include "paritylab/algebra.hpp"

#include "paritylab/errors.hpp"

namespace paritylab {

namespace {

template <typename Tag, typename Get>
Tag shared_tag(std::size_t n, Tag unrestricted, Get get) {
  if (n == 0) return unrestricted;
  const Tag first = get(0);
  for (std::size_t i = 1; i < n; ++i) {
    if (get(i) != first) return unrestricted;
  }
  return first;
}

}  // namespace

StrategyTable combine(const std::vector<std::pair<Capital, StrategyTable>>& terms) {
  if (terms.empty()) throw DomainError("combine needs at least one term");
  const std::size_t depth = terms.front().second.depth();
  Kind kind = Kind::Martingale;
  for (const auto& [w, t] : terms) {
    if (w < 0) throw DomainError("negative weight " + to_string(w));
    if (t.depth() != depth) {
      throw DomainError("depth mismatch: " + std::to_string(depth) + " vs " + std::to_string(t.depth()));
    }
    if (t.kind() == Kind::Supermartingale) kind = Kind::Supermartingale;
  }
  std::vector<Capital> values(StrategyTable::table_size(depth), Capital(0));
  for (const auto& [w, t] : terms) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += w * t.values()[i];
  }
  const auto parity = shared_tag(terms.size(), ParityTag::Unrestricted,
                                 [&](std::size_t i) { return terms[i].second.parity(); });
  const auto sided = shared_tag(terms.size(), SidedTag::Unrestricted,
                                [&](std::size_t i) { return terms[i].second.sided(); });
  return StrategyTable(depth, kind, parity, sided, std::move(values));
}

StageApprox combine(const std::vector<std::pair<Capital, BetProgram>>& terms) {
  Kind kind = Kind::Martingale;
  std::vector<StageComponent> comps;
  for (const auto& [w, p] : terms) {
    if (w < 0) throw DomainError("negative weight " + to_string(w));
    if (p.kind() == Kind::Supermartingale) kind = Kind::Supermartingale;
    comps.push_back(StageComponent{0, w, p});
  }
  const auto parity =
      shared_tag(terms.size(), ParityTag::Unrestricted, [&](std::size_t i) { return terms[i].second.parity(); });
  const auto sided =
      shared_tag(terms.size(), SidedTag::Unrestricted, [&](std::size_t i) { return terms[i].second.sided(); });
  return StageApprox(kind, parity, sided, std::move(comps));
}

StrategyTable product(const StrategyTable& a, const StrategyTable& b) {
  if (a.depth() != b.depth()) throw DomainError("depth mismatch in product");
  require_valid(a.with_tags(Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted), "left factor");
  require_valid(b.with_tags(Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted), "right factor");
  std::optional<BitString> clash;
  a.for_each_state([&](const BitString& s) {
    if (clash || s.size() == a.depth()) return;
    const bool a_moves = a.at(s.child(0)) != a.at(s);
    const bool b_moves = b.at(s.child(0)) != b.at(s);
    if (a_moves && b_moves) clash = s;
  });
  if (clash) throw DomainError("both factors bet at state " + clash->display());
  std::vector<Capital> values(a.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = a.values()[i] * b.values()[i];
  return StrategyTable(a.depth(), Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted,
                       std::move(values));
}

BitString interleave(const BitString& x, const BitString& y) {
  if (x.size() != y.size() && x.size() != y.size() + 1) {
    throw DomainError("interleave needs |x| = |y| or |y| + 1, got " + std::to_string(x.size()) + " and " +
                      std::to_string(y.size()));
  }
  BitString out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.push_back(x[i]);
    if (i < y.size()) out.push_back(y[i]);
  }
  return out;
}

const Capital& OnlineTable::at(const BitString& tau, const BitString& sigma) const {
  auto it = values.find({tau, sigma});
  if (it == values.end()) {
    throw DomainError("online table has no entry for (" + tau.display() + " | " + sigma.display() + ")");
  }
  return it->second;
}

OnlineTable to_online(const StrategyTable& m) {
  if (m.parity() == ParityTag::Unrestricted) {
    throw DomainError("online view needs a single-parity tag on the input table");
  }
  if (m.depth() % 2 != 0) throw DomainError("online view needs an even table depth");
  require_valid(m, "online view input");
  OnlineTable n;
  n.source_parity = m.parity();
  n.source_kind = m.kind();
  n.half_depth = m.depth() / 2;
  for (std::size_t len = 0; len <= n.half_depth; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      for (std::uint64_t j = 0; j < (std::uint64_t{1} << len); ++j) {
        const BitString tau = BitString::from_index(len, i);
        const BitString sigma = BitString::from_index(len, j);
        const BitString w = m.parity() == ParityTag::BetsOnOdd ? interleave(sigma, tau) : interleave(tau, sigma);
        n.values.emplace(std::make_pair(tau, sigma), m.at(w));
      }
    }
  }
  return n;
}

StrategyTable from_online(const OnlineTable& n) {
  const std::size_t depth = 2 * n.half_depth;
  auto even_value = [&](const BitString& w) -> const Capital& {
    BitString x, y;
    for (std::size_t i = 0; i < w.size(); ++i) (i % 2 == 0 ? x : y).push_back(w[i]);
    return n.source_parity == ParityTag::BetsOnOdd ? n.at(y, x) : n.at(x, y);
  };
  return StrategyTable::tabulate(
      depth,
      [&](const BitString& w) -> Capital {
        if (w.size() % 2 == 0) return even_value(w);
        // Odd length: BetsOnOdd does not bet at the even parent; BetsOnEven
        // does not bet at w itself, so either child carries the value.
        return n.source_parity == ParityTag::BetsOnOdd ? even_value(w.parent()) : even_value(w.child(0));
      },
      n.source_kind, n.source_parity, SidedTag::Unrestricted);
}

std::optional<std::pair<BitString, BitString>> online_law_violation(const OnlineTable& n) {
  for (const auto& [key, value] : n.values) {
    const auto& [tau, sigma] = key;
    if (tau.empty()) continue;
    const BitString th = tau.parent();
    const Capital lhs = n.at(th.child(0), sigma) + n.at(th.child(1), sigma);
    const Capital rhs = 2 * n.at(th, sigma.parent());
    if (n.source_kind == Kind::Martingale ? lhs != rhs : lhs > rhs) return key;
  }
  return std::nullopt;
}

}  // namespace paritylab
