#include <doctest.h>

#include "gen.hpp"
#include "paritylab/dim_builder.hpp"
#include "paritylab/errors.hpp"

using namespace paritylab;
using gen::q;

namespace {

StageApprox empty(ParityTag tag) { return StageApprox(Kind::Martingale, tag, SidedTag::Unrestricted, {}); }

StageApprox one(ParityTag tag, long stage, const Capital& weight, BetProgram p) {
  return StageApprox(Kind::Martingale, tag, SidedTag::Unrestricted, {StageComponent{stage, weight, std::move(p)}});
}

// Largest root of a depth-2 BetsOnOdd martingale on the grid k/den lying below m.
Rational best_grid_root(const gen::Values& m, long den) {
  Rational best = -1;
  const long top = 8 * den;
  for (long a = 0; a <= top; ++a) {
    const Rational root = q(a, den);
    if (root > m.at("") || root > m.at("0") || root > m.at("1")) break;
    bool left = false, right = false;
    for (long x = 0; x <= 2 * a && !(left && right); ++x) {
      const Rational u = q(x, den), v = q(2 * a - x, den);
      left = left || (u <= m.at("00") && v <= m.at("01"));
      right = right || (u <= m.at("10") && v <= m.at("11"));
    }
    if (left && right) best = root;
  }
  return best;
}

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("first entries") {
    const auto p = params_upto(2);
    CHECK(p[0].q == 2);
    CHECK(p[0].p == 2);
    CHECK(p[0].s == 0);
    CHECK(p[1].q == q(3, 2));
    CHECK(p[1].p == 12);
    CHECK(p[1].s == 18);
    CHECK(p[1].description_length == 27);
    CHECK(p[2].q == q(5, 4));
    CHECK(p[2].p == 44);
    CHECK(p[2].s == 80);
    CHECK(p[2].description_length == 100);
    CHECK(params(1).s == 18);
  }

  TEST_CASE("recurrences, parity of s and the budget inequality") {
    const auto p = params_upto(8);
    Integer sum = 0;
    for (std::size_t n = 0; n <= 8; ++n) {
      const long nn = static_cast<long>(n);
      const Integer s = n == 0 ? Integer(0) : Integer((nn + 2) * (2 * nn + 2 + sum));
      CHECK(p[n].s == s);
      CHECK(p[n].p == ceil(Rational(s) / 2) + nn + 2);
      CHECK(p[n].q == q(1, 2) + q(3, nn + 2));
      CHECK(p[n].s_even == (n != 7));
      if (n > 0) CHECK(p[n].budget_ok);
      CHECK(p[n].description_length == ceil(p[n].q * Rational(s)));
      sum += p[n].p;
    }
  }
}

TEST_SUITE("ledger") {
  TEST_CASE("weights and K_V") {
    RequestLedger l;
    l.add(BitString("01"), 3);
    l.add(BitString("01"), 2);
    l.add(BitString("1"), 1);
    CHECK(l.weight() == q(7, 8));
    CHECK(l.kv(BitString("01")) == std::optional<std::size_t>(2));
    CHECK_FALSE(l.kv(BitString("0")));
    CHECK_THROWS_AS(l.add(BitString("0"), 2), DomainError);
    CHECK(l.weight() == q(7, 8));
    CHECK(l.requests().size() == 3);
  }
}

TEST_SUITE("floor") {
  TEST_CASE("plain examples") {
    const auto a = martingale_floor(gen::table(1, {{"", q(1)}, {"0", q(1, 2)}, {"1", q(1, 2)}}, Kind::Supermartingale), 1);
    CHECK(a.at(BitString()) == q(1, 2));
    const auto b = martingale_floor(gen::table(2,
                                               {{"", q(1)},
                                                {"0", q(1)},
                                                {"1", q(1)},
                                                {"00", q(1)},
                                                {"01", q(0)},
                                                {"10", q(1, 2)},
                                                {"11", q(0)}},
                                               Kind::Supermartingale),
                                    2);
    CHECK(b.at(BitString("0")) == q(1, 2));
    CHECK(b.at(BitString("1")) == q(1, 4));
    CHECK(b.at(BitString()) == q(3, 8));
  }

  TEST_CASE("parity example") {
    const auto m = gen::table(2,
                              {{"", q(1)}, {"0", q(1)}, {"1", q(1)}, {"00", q(2)}, {"01", q(0)}, {"10", q(1)}, {"11", q(0)}},
                              Kind::Supermartingale, ParityTag::BetsOnOdd);
    const auto f = martingale_floor(m, 2, ParityTag::BetsOnOdd);
    CHECK(f.at(BitString()) == q(1, 2));
    CHECK(validate(f).declared_ok());
    CHECK(f.parity() == ParityTag::BetsOnOdd);
    CHECK_THROWS_AS(martingale_floor(m, 1, ParityTag::BetsOnOdd), DomainError);
  }

  TEST_CASE("plain floor: below, martingale, leaf agreement, stage monotone") {
    gen::Rng rng(71);
    for (int i = 0; i < 100; ++i) {
      const std::size_t k = gen::uniform(rng, 0, 6);
      const auto v = gen::supermartingale(rng, k, ParityTag::Unrestricted, gen::grid(rng, 0, 8, 4));
      const auto m = gen::table(k, v, Kind::Supermartingale);
      const auto f = martingale_floor(m, k);
      CHECK(validate(f).martingale);
      m.for_each_state([&](const BitString& s) {
        CHECK(f.at(s) <= m.at(s));
        if (s.size() == k) CHECK(f.at(s) == m.at(s));
      });
      // Adding a nonnegative supermartingale can only raise the floor.
      const auto extra = gen::table(k, gen::supermartingale(rng, k, ParityTag::Unrestricted, q(1)), Kind::Supermartingale);
      gen::Values sum;
      m.for_each_state([&](const BitString& s) { sum[s.str()] = m.at(s) + extra.at(s); });
      const auto g = martingale_floor(gen::table(k, sum, Kind::Supermartingale), k);
      m.for_each_state([&](const BitString& s) { CHECK(g.at(s) >= f.at(s)); });
    }
  }

  TEST_CASE("parity floor is below the input and has the largest grid root") {
    gen::Rng rng(72);
    for (int i = 0; i < 150; ++i) {
      const auto tag = gen::uniform(rng, 0, 1) ? ParityTag::BetsOnOdd : ParityTag::BetsOnEven;
      const std::size_t k = 2 * gen::uniform(rng, 1, 3);
      const auto v = gen::supermartingale(rng, k, tag, gen::grid(rng, 1, 8, 2), 2);
      const auto m = gen::table(k, v, Kind::Supermartingale, tag);
      const auto f = martingale_floor(m, k, tag);
      CHECK(validate(f).declared_ok());
      m.for_each_state([&](const BitString& s) { CHECK(f.at(s) <= m.at(s)); });
      if (k == 2 && tag == ParityTag::BetsOnOdd) {
        // Grid roots can only be as large as the exact maximum.
        const Rational grid = best_grid_root(v, 8);
        CHECK(grid <= f.at(BitString()));
        CHECK(f.at(BitString()) == min(v.at(""), min((v.at("00") + v.at("01")) / 2, (v.at("10") + v.at("11")) / 2)));
      }
    }
  }
}

TEST_SUITE("growth bound") {
  TEST_CASE("no stage change") {
    const auto n = one(ParityTag::BetsOnOdd, 0, q(1, 4),
                       BetProgram::fractional(q(1), ConstantRule{q(1, 2)}, ParityTag::BetsOnOdd));
    const auto t = empty(ParityTag::BetsOnEven);
    const auto v = check_growth_bound(n, t, BitString("01"), BitString("010011"), 0, 5, 3);
    CHECK(v.floor_increase == 0);
    CHECK(v.premise);
    CHECK(v.lhs + pow2(0 - 3 + 2) == v.rhs);
    CHECK(v.holds);
  }

  TEST_CASE("all-in fixture is tight within a factor of two") {
    const BitString sigma("10"), tau("10110100");
    const auto n = one(ParityTag::BetsOnOdd, 1, q(3, 4),
                       BetProgram::fractional(q(1, 16), TargetRule{tau, q(1)}, ParityTag::BetsOnOdd));
    const auto t = empty(ParityTag::BetsOnEven);
    const long p = 3;
    const auto v = check_growth_bound(n, t, sigma, tau, 0, 1, p);
    CHECK(v.floor_increase == q(3, 32));
    CHECK(v.premise);
    CHECK(v.holds);
    const Rational slack = pow2(3 - p);
    const Rational gain = v.lhs - (v.rhs - slack);
    CHECK(gain == q(3, 4));
    CHECK(gain < slack);
    CHECK(2 * gain >= slack);
  }

  TEST_CASE("shape errors") {
    const auto n = empty(ParityTag::BetsOnOdd), t = empty(ParityTag::BetsOnEven);
    CHECK_THROWS_AS(check_growth_bound(n, t, BitString("1"), BitString("10"), 0, 1, 1), DomainError);
    CHECK_THROWS_AS(check_growth_bound(n, t, BitString("11"), BitString("1000"), 0, 1, 1), DomainError);
    CHECK_THROWS_AS(check_growth_bound(n, t, BitString("10"), BitString("1000"), 1, 1, 1), DomainError);
    CHECK_THROWS_AS(check_growth_bound(t, n, BitString("10"), BitString("1000"), 0, 1, 1), DomainError);
  }
}

TEST_SUITE("greedy walk") {
  TEST_CASE("fixed evaluators") {
    const Evaluator zero = [](const BitString&) { return Capital(0); };
    CHECK(greedy_leftmost_extension(zero, BitString("1"), 0, 5).str() == "10000");
    // Doubles on every 0, dies on every 1 (a martingale favoring 0).
    const Evaluator favor0 = [](const BitString& s) {
      Capital v = 1;
      for (std::size_t i = 0; i < s.size(); ++i) v = s[i] ? Capital(0) : Capital(2 * v);
      return v;
    };
    CHECK(greedy_leftmost_extension(favor0, BitString(), 1, 6).str() == "100000");
    CHECK_THROWS_AS(greedy_leftmost_extension(favor0, BitString("0"), 1, 3), DomainError);
  }

  TEST_CASE("random supermartingales stay within the bound") {
    gen::Rng rng(73);
    for (int i = 0; i < 100; ++i) {
      const auto v = gen::supermartingale(rng, 8, ParityTag::Unrestricted, q(1));
      const Evaluator m = [&](const BitString& s) { return v.at(s.str()); };
      const Capital bound = v.at("") + gen::grid(rng, 0, 2, 4);
      const BitString x = greedy_leftmost_extension(m, BitString(), bound, 8);
      CHECK(x.size() == 8);
      for (std::size_t n = 0; n <= 8; ++n) {
        CHECK(m(x.prefix(n)) <= bound);
        // Leftmost: a 0 was skipped only when it broke the bound.
        if (n < 8 && x[n] == 1) CHECK(m(x.prefix(n).child(0)) > bound);
      }
    }
  }
}

TEST_SUITE("stage machine") {
  TEST_CASE("zero components") {
    const auto run = run_stage_machine(empty(ParityTag::BetsOnOdd), empty(ParityTag::BetsOnEven), 50, 2);
    REQUIRE(run.sigma[1]);
    REQUIRE(run.sigma[2]);
    CHECK(*run.sigma[1] == BitString::repeat(0, 18));
    CHECK(*run.sigma[2] == BitString::repeat(0, 80));
    CHECK(run.x == BitString::repeat(0, 80));
    CHECK(run.ledger.weight() == pow2(-27) + pow2(-100));
    for (const auto& e : run.events) CHECK(e.action != "undefine");
    CHECK(run.lengths_ok);
    CHECK(run.capital_ok);
  }

  TEST_CASE("a late component forces a redefinition to the right") {
    const auto n = one(ParityTag::BetsOnOdd, 10, q(1),
                       BetProgram::fractional(q(1, 256), TargetRule{BitString::repeat(0, 18), q(1)}, ParityTag::BetsOnOdd));
    const auto run = run_stage_machine(n, empty(ParityTag::BetsOnEven), 40, 1);
    std::vector<BuilderEvent> sigma1;
    for (const auto& e : run.events) {
      if (e.n == 1 && e.action != "describe") sigma1.push_back(e);
    }
    REQUIRE(sigma1.size() == 3);
    CHECK(sigma1[0].action == "define");
    CHECK(sigma1[0].sigma == BitString::repeat(0, 18));
    CHECK(sigma1[1].action == "undefine");
    CHECK(sigma1[1].stage == 10);
    CHECK(sigma1[2].action == "define");
    CHECK(sigma1[0].sigma < sigma1[2].sigma);
    CHECK(sigma1[2].sigma.str() == "01" + std::string(16, '0'));
    CHECK(run.capital_ok);
    CHECK(run.ledger.weight() == pow2(-26));
    CHECK(run.lex_decreases[1] == 0);
  }

  TEST_CASE("random mixtures keep the verified invariants") {
    gen::Rng rng(74);
    for (int i = 0; i < 8; ++i) {
      std::vector<StageComponent> odd, even;
      for (int k = 0; k < 3; ++k) {
        odd.push_back(StageComponent{gen::uniform(rng, 0, 300), q(1, 16),
                                     BetProgram::fractional(gen::grid(rng, 1, 4, 4), ConstantRule{gen::grid(rng, -4, 4, 4)},
                                                            ParityTag::BetsOnOdd)});
        even.push_back(StageComponent{gen::uniform(rng, 0, 300), q(1, 16),
                                      BetProgram::fractional(gen::grid(rng, 1, 4, 4), ConstantRule{gen::grid(rng, -4, 4, 4)},
                                                             ParityTag::BetsOnEven)});
      }
      const StageApprox n(Kind::Martingale, ParityTag::BetsOnOdd, SidedTag::Unrestricted, odd);
      const StageApprox t(Kind::Martingale, ParityTag::BetsOnEven, SidedTag::Unrestricted, even);
      const auto run = run_stage_machine(n, t, 400, 2);
      const auto prm = params_upto(2);
      CHECK(run.max_weight <= 1);
      CHECK(run.capital_ok);
      CHECK(run.lengths_ok);
      for (std::size_t k = 1; k <= 2; ++k) {
        CHECK(Integer(static_cast<unsigned long>(run.max_changes[k])) <= Integer(1) << prm[k].p.get_ui());
      }
      for (const auto& e : run.events) {
        if (e.action == "define") CHECK(e.sigma.size() == prm[e.n].s.get_ui());
      }
      if (run.sigma[1] && run.sigma[2]) CHECK(run.sigma[1]->is_prefix_of(*run.sigma[2]));
    }
  }

  TEST_CASE("heavy root is refused") {
    const auto n = one(ParityTag::BetsOnOdd, 3, q(1), BetProgram::fractional(q(1, 2), ConstantRule{0}, ParityTag::BetsOnOdd));
    CHECK_THROWS_AS(run_stage_machine(n, empty(ParityTag::BetsOnEven), 10, 1), DomainError);
  }
}
