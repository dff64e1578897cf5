#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "paritylab/dimension.hpp"
#include "paritylab/errors.hpp"

using namespace paritylab;
using gen::q;

namespace {

TestArray stest(std::vector<std::vector<std::string>> levels, const Rational& s = q(1, 2)) {
  TestArray t;
  t.flavor = TestFlavor::STest;
  t.s = s;
  for (const auto& lv : levels) {
    t.levels.emplace_back();
    for (const auto& m : lv) t.levels.back().push_back(BitString(m));
  }
  return t;
}

// Σ 2^{-s|σ|} in long double, for comparisons away from the boundary.
long double approx_weight(const std::vector<BitString>& level, const Rational& s) {
  long double w = 0;
  for (const auto& m : level) w += std::exp2l(-s.get_d() * static_cast<long double>(m.size()));
  return w;
}

}  // namespace

TEST_SUITE("s-tests") {
  TEST_CASE("exact weights") {
    const auto ok = validate_s_test(stest({{}, {"1010"}}), q(1, 2));
    REQUIRE(ok.size() == 2);
    CHECK(ok[0].ok);
    CHECK(ok[1].ok);
    CHECK(ok[1].weight == "1/4");
    CHECK(ok[1].min_length == 4);

    const auto tight = validate_s_test(stest({{}, {"10"}}), q(1, 2));
    CHECK_FALSE(tight[1].ok);
    CHECK(tight[1].weight == "1/2");

    CHECK(is_valid_s_test(stest({{}, {}, {}}), q(1, 2)));
  }

  TEST_CASE("odd lengths at s = 1/2") {
    const auto v = validate_s_test(stest({{}, {"101"}}), q(1, 2));
    CHECK(v[1].ok);
    CHECK(v[1].weight == "1/2*2^(-1/2)");
    CHECK_FALSE(validate_s_test(stest({{"1"}, {"1"}}), q(1, 2))[1].ok);
    CHECK_FALSE(validate_s_test(stest({{}, {}, {"1010", "10101"}}), q(1, 2))[2].ok);
    CHECK(validate_s_test(stest({{}, {}, {"10101100", "10101"}}), q(1, 2))[2].ok);
  }

  TEST_CASE("random tests agree with a floating-point reference away from the boundary") {
    gen::Rng rng(61);
    const std::vector<Rational> exponents{q(1, 2), q(1), q(1, 3), q(2, 3), q(3, 4)};
    std::size_t decided = 0;
    for (int i = 0; i < 400; ++i) {
      const Rational s = exponents[gen::uniform(rng, 0, static_cast<long>(exponents.size()) - 1)];
      std::vector<BitString> level;
      const int members = gen::uniform(rng, 0, 4);
      for (int m = 0; m < members; ++m) level.push_back(gen::bits(rng, gen::uniform(rng, 1, 12)));
      const std::size_t k = gen::uniform(rng, 0, 3);
      TestArray t;
      t.flavor = TestFlavor::STest;
      t.s = s;
      t.levels.resize(k + 1);
      t.levels[k] = level;
      const auto v = validate_s_test(t, s);
      const long double w = approx_weight(level, s), bound = std::exp2l(-static_cast<long double>(k));
      if (std::fabs(static_cast<double>(w - bound)) > 1e-12) {
        ++decided;
        CHECK(v[k].ok == (w < bound));
      }
      if (v[k].ok && !level.empty()) CHECK(v[k].min_length > k);
    }
    CHECK(decided > 300);
  }

  TEST_CASE("hit lists") {
    const auto t = stest({{}, {"1010"}});
    CHECK(weak_s_random_check(BitString("101011"), t) == std::vector<std::size_t>{1});
    CHECK(weak_s_random_check(BitString("000000"), t).empty());

    const BitString x("1101001011010010111");
    std::vector<std::vector<std::string>> levels{{}};
    for (std::size_t k = 1; k <= 5; ++k) levels.push_back({x.prefix(2 * k + 2).str(), "0" + x.prefix(2 * k + 3).str()});
    const auto nested = stest(levels);
    CHECK(is_valid_s_test(nested, q(1, 2)));
    CHECK(weak_s_random_check(x, nested) == std::vector<std::size_t>{1, 2, 3, 4, 5});
  }

  TEST_CASE("s outside (0, 1] is a domain error") {
    CHECK_THROWS_AS(validate_s_test(stest({{}}), q(0)), DomainError);
    CHECK_THROWS_AS(validate_s_test(stest({{}}), q(3, 2)), DomainError);
  }
}

TEST_SUITE("unit strategies") {
  TEST_CASE("doubling along the target") {
    const auto n = unit_strategy(BitString("1010"), ParityTag::BetsOnEven);
    CHECK(n.trajectory(BitString("1010")) == std::vector<Capital>{q(1, 4), q(1, 2), q(1, 2), q(1), q(1)});
    CHECK(n.value(BitString("0")) == 0);
    CHECK(n.value(BitString("100")) == 0);
    CHECK(n.value(BitString("11")) == q(1, 2));
    const auto t = unit_strategy(BitString("1010"), ParityTag::BetsOnOdd);
    CHECK(t.trajectory(BitString("1010")) == std::vector<Capital>{q(1, 4), q(1, 4), q(1, 2), q(1, 2), q(1)});
    CHECK(unit_strategy(BitString("101"), ParityTag::BetsOnEven).initial() == q(1, 4));
    CHECK(unit_strategy(BitString("101"), ParityTag::BetsOnOdd).initial() == q(1, 2));
  }

  TEST_CASE("unit value above every target") {
    gen::Rng rng(62);
    for (int i = 0; i < 200; ++i) {
      const BitString sigma = gen::bits(rng, gen::uniform(rng, 0, 9));
      const auto tag = gen::uniform(rng, 0, 1) ? ParityTag::BetsOnEven : ParityTag::BetsOnOdd;
      const auto p = unit_strategy(sigma, tag);
      // Count the betting prefixes by hand.
      long doublings = 0;
      for (std::size_t len = 0; len < sigma.size(); ++len) doublings += gen::moves_at(tag, len);
      CHECK(p.initial() == pow2(-doublings));
      for (int k = 0; k < 5; ++k) CHECK(p.value(sigma + gen::bits(rng, gen::uniform(rng, 0, 6))) == 1);
      const auto tab = StrategyTable(7, Kind::Martingale, tag, SidedTag::Unrestricted, p.tabulate(7));
      CHECK(validate(tab).declared_ok());
    }
  }
}

TEST_SUITE("strategies from a test") {
  TEST_CASE("three levels") {
    const auto t = stest({{}, {"1011", "011101"}, {"101100", "00111011"}, {"10110011", "0110101101"}});
    REQUIRE(is_valid_s_test(t, q(1, 2)));
    const TestStrategies st = strategies_from_test(t);
    CHECK(st.n.parity() == ParityTag::BetsOnEven);
    CHECK(st.t.parity() == ParityTag::BetsOnOdd);
    const long last = st.n.final_stage();
    CHECK(validate(st.n.tabulate(last, 10)).declared_ok());
    CHECK(validate(st.t.tabulate(last, 10)).declared_ok());

    const Capital mass = st.n.eval(last, BitString());
    CHECK(mass <= q(1, 2) + q(1, 4) + q(1, 8));
    const BitString x("1011001111");
    CHECK(weak_s_random_check(x, t) == std::vector<std::size_t>{1, 2, 3});
    CHECK(st.n.eval(last, x) >= 3);
    CHECK(st.n.eval(last, x) - mass >= 3 - mass);
    CHECK(st.t.eval(last, x) >= 3);
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(strategies_from_test(stest({{}, {"10"}})), DomainError);
    CHECK_THROWS_AS(strategies_from_test(stest({{}, {"1010"}}, q(1, 3))), DomainError);
  }
}

TEST_SUITE("dimension estimates") {
  TEST_CASE("extreme growth rates") {
    std::vector<Capital> doubling{q(1)}, flat{q(1)};
    for (int i = 0; i < 10; ++i) {
      doubling.push_back(doubling.back() * 2);
      flat.push_back(q(1));
    }
    for (const auto& s : empirical_dim_bound(doubling).samples) CHECK(*s.s_hat == LogExpr::rational(0));
    for (const auto& s : empirical_dim_bound(flat).samples) CHECK(*s.s_hat == LogExpr::rational(1));
    const auto r = empirical_dim_bound(std::vector<Capital>{q(1), q(0), q(0)});
    CHECK_FALSE(r.samples[0].s_hat);
    CHECK_FALSE(r.min);
  }

  TEST_CASE("certificate path gives log2 of root 3 exactly") {
    TestArray t;
    t.levels = {{BitString()}};
    BitString path;
    for (int i = 0; i < 6; ++i) {
      path = path + BitString(i % 2 ? "01" : "10");
      t.levels.push_back({path});
    }
    const PackingCertificate cert(t);
    const auto r = empirical_dim_bound(cert.evaluator(), path);
    const LogExpr expected = LogExpr::log2_of(q(3)) * q(1, 2);
    for (const auto& s : r.samples) {
      if (s.n % 2 == 0) CHECK(*s.s_hat == expected);
    }
    CHECK(r.samples[1].approx == doctest::Approx(std::log2(std::sqrt(3.0))));
  }

  TEST_CASE("all overloads agree") {
    const auto p = BetProgram::fractional(q(1), ConstantRule{q(1, 3)});
    const StageApprox a(Kind::Martingale, ParityTag::Unrestricted, SidedTag::Unrestricted,
                        {StageComponent{0, q(1, 2), p}});
    const BitString x("1101101");
    const auto r1 = empirical_dim_bound(a, 0, x);
    const auto r2 = empirical_dim_bound(a.at_stage(0), x);
    const auto r3 = empirical_dim_bound(a.tabulate(0, 7), x);
    REQUIRE(r1.samples.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(r1.samples[i].value == r2.samples[i].value);
      CHECK(r2.samples[i].value == r3.samples[i].value);
      CHECK(*r1.samples[i].s_hat == *r3.samples[i].s_hat);
    }
  }
}
