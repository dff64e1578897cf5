#include <doctest.h>

#include "gen.hpp"
#include "paritylab/errors.hpp"
#include "paritylab/int_casino.hpp"

using namespace paritylab;
using gen::q;

namespace {

// Integer FSM: stake `stake` in every state of a one-state machine.
BetProgram constant_fsm(long capital, long stake, ParityTag parity, SidedTag sided = SidedTag::Unrestricted) {
  FiniteStateMachine m;
  m.states.push_back(FsmState{q(stake), {0, 0}});
  return BetProgram::fsm(q(capital), m, StakeUnit::Integer, parity, sided);
}

BetProgram random_fsm(gen::Rng& rng, ParityTag parity, SidedTag sided) {
  FiniteStateMachine m;
  const long n = gen::uniform(rng, 1, 4);
  for (long i = 0; i < n; ++i) {
    m.states.push_back(FsmState{q(gen::uniform(rng, -2, 2)),
                                {static_cast<std::size_t>(gen::uniform(rng, 0, n - 1)),
                                 static_cast<std::size_t>(gen::uniform(rng, 0, n - 1))}});
  }
  return BetProgram::fsm(q(gen::uniform(rng, 0, 10)), m, StakeUnit::Integer, parity, sided);
}

BetProgram random_context(gen::Rng& rng, ParityTag parity, SidedTag sided) {
  ContextRule r{static_cast<std::size_t>(gen::uniform(rng, 0, 3)), {}};
  for (std::size_t len = 0; len <= r.order; ++len) {
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << len); ++k) {
      r.stakes[BitString::from_index(len, k)] = gen::uniform(rng, -3, 3);
    }
  }
  return BetProgram::integer(gen::uniform(rng, 0, 10), r, parity, sided);
}

Capital aggregate(const std::vector<Capital>& caps) {
  Capital s = 0;
  for (const auto& c : caps) s += c;
  return s;
}

void check_greedy_trace(const DiagTrace& t, const std::vector<BetProgram>& advs) {
  CHECK_FALSE(replay_mismatch(t, advs));
  Capital prev = aggregate(t.adversary_initial);
  std::size_t unfavorable = 0;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const Capital now = aggregate(t.records[i].adversaries);
    CHECK(now <= prev);
    if (t.records[i].bit != engine_favored(t.engine, i)) {
      ++unfavorable;
      CHECK(now < prev);
    }
    prev = now;
  }
  CHECK(unfavorable == t.deviations);
  CHECK(Capital(static_cast<unsigned long>(unfavorable)) <= aggregate(t.adversary_initial));
}

}  // namespace

TEST_SUITE("engines") {
  TEST_CASE("N") {
    const auto n = builtin_N();
    CHECK(n.value(BitString("11111")) == 10);
    CHECK(n.value(BitString("00000")) == 0);
    CHECK(n.value(BitString("0000011")) == 0);
    CHECK(n.value(BitString("0101")) == 5);
  }

  TEST_CASE("D") {
    const auto d = builtin_D();
    CHECK(d.value(BitString()) == 5);
    CHECK(d.value(BitString("0")) == 6);
    CHECK(d.value(BitString("01")) == 7);
    for (std::size_t k = 0; k < 10; ++k) {
      std::string s;
      for (std::size_t i = 0; i < k; ++i) s += "01";
      CHECK(d.value(BitString(s)) == 5 + 2 * static_cast<long>(k));
    }
    CHECK(d.value(BitString("1010101010")) == 0);
    CHECK(engine_favored(Engine::D, 4) == 0);
    CHECK(engine_favored(Engine::D, 3) == 1);
    CHECK(engine_favored(Engine::N, 4) == 1);
  }
}

TEST_SUITE("settling") {
  TEST_CASE("adversary that never bets") {
    const auto m = constant_fsm(4, 0, ParityTag::BetsOnEven);
    const auto r = find_settling_extension(m, BitString("1"), 3, SettleMode::Parity);
    CHECK(r.tau.str() == "1111");
    CHECK_FALSE(r.certificate.zero_capital);
    CHECK(check_certificate(m, r.certificate));
  }

  TEST_CASE("punishing an adversary down to zero") {
    const auto m = constant_fsm(5, -1, ParityTag::BetsOnEven);
    const auto r = find_settling_extension(m, BitString(), 3, SettleMode::Parity);
    std::size_t punishes = 0;
    for (const auto& st : r.steps) punishes += st.rule == "punish";
    CHECK(punishes == 5);
    CHECK(r.certificate.zero_capital);
    CHECK(m.value(r.tau) == 0);
    CHECK(builtin_N().value(r.tau) > 3);
    CHECK(check_certificate(m, r.certificate));
    CHECK(probe_cone(m, r.certificate.at, 12));
  }

  TEST_CASE("adversary already at zero") {
    const auto m = constant_fsm(0, 1, ParityTag::BetsOnOdd);
    const auto r = find_settling_extension(m, BitString("11"), 2, SettleMode::Parity);
    CHECK(r.tau.str() == "1111");
    CHECK(r.certificate.zero_capital);
  }

  TEST_CASE("preconditions") {
    const auto m = constant_fsm(2, 1, ParityTag::BetsOnOdd);
    CHECK_THROWS_AS(find_settling_extension(m, BitString("000"), 2, SettleMode::Parity), DomainError);
    CHECK_THROWS_AS(find_settling_extension(constant_fsm(2, 1, ParityTag::Unrestricted), BitString(), 2,
                                            SettleMode::Parity),
                    DomainError);
    const auto frac = BetProgram::fractional(q(1), ConstantRule{q(1, 2)}, ParityTag::BetsOnOdd);
    CHECK_THROWS_AS(find_settling_extension(frac, BitString(), 2, SettleMode::Parity), DomainError);
  }

  TEST_CASE("random single-parity machines settle with checked certificates") {
    gen::Rng rng(51);
    for (int i = 0; i < 150; ++i) {
      const auto parity = gen::uniform(rng, 0, 1) ? ParityTag::BetsOnEven : ParityTag::BetsOnOdd;
      const auto m = random_fsm(rng, parity, SidedTag::Unrestricted);
      const BitString rho = BitString::repeat(1, gen::uniform(rng, 0, 5));
      const long c = gen::uniform(rng, 1, 6);
      const auto r = find_settling_extension(m, rho, c, SettleMode::Parity);
      CHECK(rho.is_prefix_of(r.tau));
      CHECK(builtin_N().value(r.tau) > c);
      CHECK(check_certificate(m, r.certificate));
      CHECK(probe_cone(m, r.certificate.at, 10));
      CHECK(r.certificate.at.is_prefix_of(r.tau));
    }
  }

  TEST_CASE("random single-sided machines settle against D") {
    gen::Rng rng(52);
    for (int i = 0; i < 150; ++i) {
      const auto sided = gen::uniform(rng, 0, 1) ? SidedTag::ZeroSided : SidedTag::OneSided;
      const auto m = random_fsm(rng, ParityTag::Unrestricted, sided);
      const long c = gen::uniform(rng, 1, 6);
      const auto r = find_settling_extension(m, BitString("01"), c, SettleMode::Sided);
      CHECK(builtin_D().value(r.tau) > c);
      CHECK(check_certificate(m, r.certificate));
      CHECK(probe_cone(m, r.certificate.at, 10));
    }
  }

  TEST_CASE("a forged certificate is refused") {
    const auto m = constant_fsm(5, -1, ParityTag::BetsOnEven);
    ConeCertificate cert;
    cert.at = BitString("1");
    cert.capital = 5;
    cert.automaton_state = 0;
    cert.closure = {{0, 1}, {0, 0}};
    CHECK_FALSE(check_certificate(m, cert));
    CHECK_FALSE(probe_cone(m, cert.at, 2));
  }
}

TEST_SUITE("diagonalize") {
  TEST_CASE("no adversaries") {
    DiagOptions opt;
    opt.target = 10;
    const auto t = diagonalize({}, Engine::N, opt);
    CHECK(t.z.str() == "11111");
    CHECK(t.records.back().engine == 10);
    CHECK(t.reached_target);
  }

  TEST_CASE("losing adversary against N") {
    const std::vector<BetProgram> advs{BetProgram::integer(5, ConstantRule{-1}, ParityTag::BetsOnEven)};
    DiagOptions opt;
    opt.target = 30;
    const auto t = diagonalize(advs, Engine::N, opt);
    CHECK(t.deviations == 0);
    CHECK(t.records[8].adversaries[0] == 0);
    CHECK(t.records[7].adversaries[0] == 1);
    CHECK(t.z.str() == std::string(25, '1'));
    check_greedy_trace(t, advs);
  }

  TEST_CASE("0-sided adversary against D") {
    const std::vector<BetProgram> advs{
        BetProgram::integer(5, ConstantRule{-1}, ParityTag::Unrestricted, SidedTag::ZeroSided)};
    DiagOptions opt;
    opt.target = 50;
    const auto t = diagonalize(advs, Engine::D, opt);
    CHECK(t.reached_target);
    CHECK(t.deviations <= 5);
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      if (t.records[i].rule == "deviate") CHECK(i % 2 == 0);
    }
    check_greedy_trace(t, advs);
  }

  TEST_CASE("random integer adversaries, greedy") {
    gen::Rng rng(53);
    for (int i = 0; i < 40; ++i) {
      const bool use_d = gen::uniform(rng, 0, 1);
      std::vector<BetProgram> advs;
      for (int k = 0; k < 4; ++k) {
        const auto parity = use_d ? ParityTag::Unrestricted
                                  : (gen::uniform(rng, 0, 1) ? ParityTag::BetsOnEven : ParityTag::BetsOnOdd);
        const auto sided = !use_d ? SidedTag::Unrestricted
                                  : (gen::uniform(rng, 0, 1) ? SidedTag::ZeroSided : SidedTag::OneSided);
        advs.push_back(gen::uniform(rng, 0, 1) ? random_fsm(rng, parity, sided) : random_context(rng, parity, sided));
      }
      DiagOptions opt;
      opt.target = 200;
      const auto t = diagonalize(advs, use_d ? Engine::D : Engine::N, opt);
      check_greedy_trace(t, advs);
      if (t.reached_target) continue;
      // The only way to stop short is an engine ruined by forced deviations.
      CHECK(t.records.back().engine == 0);
    }
  }

  TEST_CASE("settle mode with dim0 blocks") {
    gen::Rng rng(54);
    std::vector<BetProgram> advs;
    for (int k = 0; k < 3; ++k) {
      advs.push_back(random_fsm(rng, k % 2 ? ParityTag::BetsOnEven : ParityTag::BetsOnOdd, SidedTag::Unrestricted));
    }
    DiagOptions opt;
    opt.mode = DiagMode::Settle;
    opt.dim0 = true;
    opt.blocks = 8;
    opt.target = 20;
    const auto t = diagonalize(advs, Engine::N, opt);
    CHECK_FALSE(replay_mismatch(t, advs));
    REQUIRE(t.certificates.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(check_certificate(advs[i], t.certificates[i]));
      CHECK(probe_cone(advs[i], t.certificates[i].at, 12));
    }
    REQUIRE(t.blocks.size() == 8);
    for (std::size_t i = 0; i < t.blocks.size(); ++i) {
      const auto [start, end] = t.blocks[i];
      CHECK(end - start == (std::size_t{2} << i));
      // N keeps its capital across a (01) block.
      const Capital before = start == 0 ? t.engine_initial : t.records[start - 1].engine;
      CHECK(t.records[end - 1].engine == before);
    }
    CHECK(t.checkpoints.back().fraction > q(9, 10));
  }

  TEST_CASE("tampered traces are caught") {
    const std::vector<BetProgram> advs{BetProgram::integer(5, ConstantRule{1}, ParityTag::BetsOnOdd)};
    DiagOptions opt;
    opt.target = 20;
    auto t = diagonalize(advs, Engine::N, opt);
    CHECK_FALSE(replay_mismatch(t, advs));
    t.records[4].adversaries[0] += 1;
    CHECK(replay_mismatch(t, advs) == std::optional<std::size_t>(4));
  }

  TEST_CASE("restrictions are enforced") {
    DiagOptions opt;
    CHECK_THROWS_AS(diagonalize({BetProgram::integer(1, ConstantRule{1})}, Engine::N, opt), DomainError);
    CHECK_THROWS_AS(
        diagonalize({BetProgram::integer(1, ConstantRule{1}, ParityTag::BetsOnOdd)}, Engine::D, opt), DomainError);
    CHECK_THROWS_AS(diagonalize({BetProgram::fractional(q(1), ConstantRule{0}, ParityTag::BetsOnOdd)}, Engine::N, opt),
                    DomainError);
    opt.mode = DiagMode::Settle;
    CHECK_THROWS_AS(diagonalize({BetProgram::table(StrategyTable::constant(2, q(1)).with_tags(
                                    Kind::Martingale, ParityTag::BetsOnOdd, SidedTag::Unrestricted))},
                                Engine::N, opt),
                    DomainError);
  }
}
