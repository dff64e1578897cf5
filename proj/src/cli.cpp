#include "paritylab/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "paritylab/decompose.hpp"
#include "paritylab/dim_builder.hpp"
#include "paritylab/dimension.hpp"
#include "paritylab/errors.hpp"
#include "paritylab/int_casino.hpp"
#include "paritylab/json_io.hpp"
#include "paritylab/oracles.hpp"
#include "paritylab/parity_casino.hpp"

namespace paritylab {

namespace {

using paritylab::to_json;

long default_stages(long fallback) {
  if (const char* env = std::getenv("PARITYLAB_STAGES")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw StructuralError("PARITYLAB_STAGES must be a positive integer");
  }
  return fallback;
}

void emit(std::ostream& out, const std::string& path, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) out << text;
  else write_text_file(path, text);
}

std::string bits_from_text(const std::string& text) {
  std::string bits;
  for (char c : text) {
    if (c == '0' || c == '1') bits.push_back(c);
    else if (!std::isspace(static_cast<unsigned char>(c))) throw StructuralError("bit file contains a non-bit character");
  }
  return bits;
}

// A strategy file holds a table, a program, or a stage approximation.
struct LoadedStrategy {
  std::optional<StrategyTable> table;
  std::optional<BetProgram> program;
  std::optional<StageApprox> approx;

  Evaluator at(long stage) const {
    if (table) return [t = *table](const BitString& s) { return t.value_or_frozen(s); };
    if (program) return [p = *program](const BitString& s) { return p.value(s); };
    return [a = *approx, stage](const BitString& s) { return a.eval(stage, s); };
  }
};

LoadedStrategy load_strategy(const json& j) {
  LoadedStrategy s;
  if (j.contains("values")) s.table = table_from_json(j);
  else if (j.contains("form")) s.program = program_from_json(j);
  else if (j.contains("components")) s.approx = approx_from_json(j);
  else throw StructuralError("expected a table, a program, or a stage approximation");
  return s;
}

std::vector<BetProgram> programs_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw StructuralError(std::string(what) + " must be an array of programs");
  std::vector<BetProgram> out;
  for (const auto& p : j) out.push_back(program_from_json(p));
  return out;
}

std::vector<long> stages_from_json(const json& j) {
  std::vector<long> out;
  if (!j.is_array()) throw StructuralError("activation must be an array of integers");
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw StructuralError("activation must be an array of integers");
    out.push_back(v.get<long>());
  }
  return out;
}

// {"odd": [...], "even": [...]} mixtures, or explicit approximations under two keys.
std::pair<StageApprox, StageApprox> load_pair(const json& j, const char* odd_key, const char* even_key) {
  if (j.contains("odd") || j.contains("even")) {
    auto mix = [&](const char* key, const char* act) {
      if (!j.contains(key)) throw StructuralError(std::string("missing field \"") + key + "\"");
      const auto progs = programs_from_json(j.at(key), key);
      return mixture(progs, j.contains(act) ? stages_from_json(j.at(act)) : std::vector<long>{});
    };
    return {mix("odd", "odd_activation"), mix("even", "even_activation")};
  }
  if (!j.contains(odd_key) || !j.contains(even_key)) {
    throw StructuralError(std::string("expected \"odd\"/\"even\" program lists or \"") + odd_key + "\"/\"" +
                          even_key + "\" approximations");
  }
  return {approx_from_json(j.at(odd_key)), approx_from_json(j.at(even_key))};
}

json to_json(const LogExpr& e) {
  return json{{"exact", e.str()}, {"approx", e.to_double()}};
}

json to_json(const DimReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    json row{{"n", s.n}, {"value", to_json(s.value)}};
    if (s.s_hat) {
      row["s_hat"] = s.s_hat->str();
      row["approx"] = s.approx;
    } else {
      row["s_hat"] = "inf";
    }
    samples.push_back(std::move(row));
  }
  json out{{"samples", std::move(samples)}};
  out["min"] = r.min ? json(*r.min) : json(nullptr);
  out["max"] = r.max ? json(*r.max) : json(nullptr);
  return out;
}

json to_json(const OracleReport& r) {
  return json{{"name", r.name},
              {"pass", r.pass()},
              {"instances", r.instances},
              {"failures", r.failures},
              {"counterexamples", r.counterexamples},
              {"notes", r.notes}};
}

json to_json(const BlockSpec& s) {
  return json{{"m00", to_json(s.m00)}, {"m10", to_json(s.m10)}, {"n0", to_json(s.n0)}, {"n1", to_json(s.n1)},
              {"c", to_json(s.c)}};
}

json to_json(const EnumState& st) {
  json members = json::array();
  for (const auto& s : st.enumerated) members.push_back(s.str());
  json out{{"eta", st.eta.str()},
           {"c", to_json(st.c)},
           {"enumerated", std::move(members)},
           {"phase", st.phase == EnumPhase::Closed ? "closed" : "watching"},
           {"last_stage", st.last_stage}};
  if (st.recorded) {
    out["trigger_stage"] = st.trigger_stage;
    out["recorded"] = to_json(*st.recorded);
  }
  return out;
}

json to_json(const ConeCertificate& c) {
  json closure = json::array();
  for (const auto& [q, par] : c.closure) closure.push_back(json::array({q, par}));
  return json{{"at_length", c.at.size()},
              {"capital", to_json(c.capital)},
              {"automaton_state", c.automaton_state},
              {"zero_capital", c.zero_capital},
              {"closure", std::move(closure)}};
}

json to_json(const BuilderParams& p) {
  return json{{"n", p.n},
              {"q", to_json(p.q)},
              {"p", p.p.get_str()},
              {"s", p.s.get_str()},
              {"description_length", p.description_length.get_str()},
              {"budget_ok", p.budget_ok},
              {"s_even", p.s_even}};
}

int cmd_validate(std::ostream& out, const std::string& in, std::size_t depth, long stage) {
  const LoadedStrategy s = load_strategy(read_json_file(in));
  StrategyTable t = s.table ? *s.table
                            : s.program ? StrategyTable(depth, s.program->kind(), s.program->parity(),
                                                        s.program->sided(), s.program->tabulate(depth))
                                        : s.approx->tabulate(stage, depth);
  const Diagnosis d = validate(t);
  json j = to_json(d);
  out << j.dump(2) << "\n";
  if (!d.declared_ok()) {
    throw DomainError(d.first_violation->property + " fails at " + d.first_violation->state.display());
  }
  return 0;
}

int cmd_decompose(std::ostream& out, const std::string& in, const std::string& mode, const std::string& other,
                  const std::vector<std::string>& spec, const std::string& path) {
  const StrategyTable m = table_from_json(read_json_file(in));
  if (mode == "parity") {
    const ParityFactors f = parity_factorize(m);
    emit(out, path, json{{"scale", to_json(m.at(BitString()))}, {"e", to_json(f.e)}, {"o", to_json(f.o)}});
    return 0;
  }
  if (other.empty()) throw StructuralError("block mode needs --other with the BetsOnEven table");
  if (spec.size() != 5) throw StructuralError("block mode needs --spec m00 m10 n0 n1 c");
  const StrategyTable n = table_from_json(read_json_file(other));
  const BlockSpec bs{parse_rational(spec[0]), parse_rational(spec[1]), parse_rational(spec[2]),
                     parse_rational(spec[3]), parse_rational(spec[4])};
  const BlockDecomposition d = block_decompose(m, n, bs);
  emit(out, path, json{{"m0", to_json(d.m0)}, {"n0", to_json(d.n0)}, {"d_m", to_json(d.d_m)}, {"d_n", to_json(d.d_n)}});
  return 0;
}

int cmd_paritytest(std::ostream& out, const std::string& mix, const ParityTestOptions& opt, const std::string& path) {
  const auto [m, n] = load_pair(read_json_file(mix), "m", "n");
  const ParityTestResult r = build_parity_test(m, n, opt);
  const PackingCertificate cert(r.array);
  json survivors = json::array();
  for (const auto& lv : r.report) {
    json members = json::array();
    for (const auto& s : lv.survivors) members.push_back(s.str());
    survivors.push_back(json{{"level", lv.level},
                             {"members", lv.members},
                             {"max_fanout", lv.max_fanout},
                             {"measure", to_json(lv.measure)},
                             {"survivors", std::move(members)}});
  }
  json growth = json::array();
  for (const auto& g : cert.growth_report()) {
    growth.push_back(json{{"level", g.level}, {"members", g.members}, {"value", to_json(g.value)},
                          {"packing_ok", g.packing_ok}});
  }
  json path_values = json::array();
  for (std::size_t i = 0; i <= opt.depth; ++i) path_values.push_back(to_json(cert.value(r.path.prefix(2 * i))));
  const DimReport dim = empirical_dim_bound(cert.evaluator(), r.path);
  json enumerations = json::array();
  for (const auto& e : r.enumerations) enumerations.push_back(to_json(e));
  emit(out, path,
       json{{"array", to_json(r.array)},
            {"path", r.path.str()},
            {"survivors", std::move(survivors)},
            {"enumerations", enumerations},
            {"certificate", json{{"path_values", std::move(path_values)},
                                 {"growth", std::move(growth)},
                                 {"dimension_bound", to_json(PackingCertificate::dimension_bound())}}},
            {"dimension", to_json(dim)}});
  return 0;
}

int cmd_diagonalize(std::ostream& out, const std::string& engine, const std::string& advs, const DiagOptions& opt,
                    const std::string& path) {
  const Engine e = engine == "N" ? Engine::N : Engine::D;
  const auto adversaries = programs_from_json(read_json_file(advs), "adversaries");
  const DiagTrace t = diagonalize(adversaries, e, opt);
  std::ostringstream lines;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    json caps = json::array();
    for (const auto& c : r.adversaries) caps.push_back(to_json(c));
    lines << json{{"i", i}, {"bit", r.bit}, {"engine", to_json(r.engine)}, {"adversaries", std::move(caps)},
                  {"rule", r.rule}}
                 .dump()
          << "\n";
  }
  if (!path.empty()) write_text_file(path, lines.str());
  json certs = json::array();
  bool certs_ok = true;
  for (std::size_t i = 0; i < t.certificates.size(); ++i) {
    certs.push_back(to_json(t.certificates[i]));
    certs_ok = certs_ok && check_certificate(adversaries[i], t.certificates[i]);
  }
  json checkpoints = json::array();
  for (const auto& c : t.checkpoints) {
    checkpoints.push_back(json{{"length", c.length}, {"block_positions", c.block_positions},
                               {"fraction", to_json(c.fraction)}, {"engine", to_json(c.engine)}});
  }
  const auto mismatch = replay_mismatch(t, adversaries);
  json summary{{"engine", engine},
               {"length", t.z.size()},
               {"engine_final", to_json(t.records.empty() ? t.engine_initial : t.records.back().engine)},
               {"reached_target", t.reached_target},
               {"deviations", t.deviations},
               {"replay_ok", !mismatch.has_value()},
               {"certificates", std::move(certs)},
               {"certificates_ok", certs_ok},
               {"checkpoints", std::move(checkpoints)}};
  if (path.empty()) summary["z"] = t.z.str();
  out << summary.dump(2) << "\n";
  if (mismatch) throw DomainError("trace replay diverges at bit " + std::to_string(*mismatch));
  return 0;
}

int cmd_stest(std::ostream& out, const std::string& in, const std::string& s, const std::string& xfile) {
  TestArray t = test_array_from_json(read_json_file(in));
  const Rational sv = s.empty() ? t.s : parse_rational(s);
  json levels = json::array();
  bool ok = true;
  for (const auto& lv : validate_s_test(t, sv)) {
    ok = ok && lv.ok;
    levels.push_back(json{{"level", lv.level}, {"weight", lv.weight}, {"ok", lv.ok}, {"min_length", lv.min_length}});
  }
  json j{{"s", to_json(sv)}, {"valid", ok}, {"levels", std::move(levels)}};
  if (!xfile.empty()) j["hits"] = weak_s_random_check(BitString(bits_from_text(read_text_file(xfile))), t);
  out << j.dump(2) << "\n";
  if (!ok) throw DomainError("weight bound fails at some level");
  return 0;
}

int cmd_dim(std::ostream& out, const std::string& in, const std::string& xfile, long stage, const std::string& path) {
  const LoadedStrategy s = load_strategy(read_json_file(in));
  const BitString x(bits_from_text(read_text_file(xfile)));
  DimReport r = s.table     ? empirical_dim_bound(*s.table, x)
                : s.program ? empirical_dim_bound(s.program->trajectory(x))
                            : empirical_dim_bound(*s.approx, stage, x);
  emit(out, path, to_json(r));
  return 0;
}

int cmd_dimhalf(std::ostream& out, const std::string& comps, long stages, std::size_t nmax, const std::string& path,
                const std::string& trace, const std::string& prefix) {
  StageApprox n(Kind::Martingale, ParityTag::BetsOnOdd, SidedTag::Unrestricted, {});
  StageApprox t(Kind::Martingale, ParityTag::BetsOnEven, SidedTag::Unrestricted, {});
  if (!comps.empty()) {
    auto pr = load_pair(read_json_file(comps), "n", "t");
    n = std::move(pr.first);
    t = std::move(pr.second);
  }
  const BuilderRun run = run_stage_machine(n, t, stages, nmax);
  json params = json::array();
  for (const auto& p : params_upto(nmax)) params.push_back(to_json(p));
  json requests = json::array();
  for (const auto& r : run.ledger.requests()) requests.push_back(json{{"target", r.target.str()}, {"length", r.length}});
  json sigma = json::array();
  for (const auto& s : run.sigma) sigma.push_back(s ? json(s->str()) : json(nullptr));
  emit(out, path,
       json{{"stages", run.stages},
            {"params", std::move(params)},
            {"sigma", std::move(sigma)},
            {"x", run.x.str()},
            {"ledger", json{{"weight", to_json(run.ledger.weight())}, {"requests", std::move(requests)}}},
            {"checks", json{{"max_weight", to_json(run.max_weight)},
                            {"capital_ok", run.capital_ok},
                            {"max_changes", run.max_changes},
                            {"lex_decreases", run.lex_decreases},
                            {"lengths_ok", run.lengths_ok}}}});
  if (!trace.empty()) {
    std::ostringstream lines;
    for (const auto& e : run.events) {
      json row{{"stage", e.stage}, {"action", e.action}, {"n", e.n}, {"sigma", e.sigma.str()},
               {"capital", to_json(e.capital)}};
      if (e.action == "describe") row["length"] = e.length;
      lines << row.dump() << "\n";
    }
    write_text_file(trace, lines.str());
  }
  if (!prefix.empty()) write_text_file(prefix, run.x.str() + "\n");
  if (!run.capital_ok) throw DomainError("capital bound violated: " + *run.capital_witness);
  return 0;
}

int cmd_verify(std::ostream& out, const std::string& lemma, std::size_t n, std::uint64_t seed) {
  std::vector<OracleReport> reports;
  const bool all = lemma == "all";
  if (all || lemma == "two-round") reports.push_back(two_round_oracle(n, seed));
  if (all || lemma == "minimality") reports.push_back(minimality_oracle());
  if (all || lemma == "floor") reports.push_back(floor_maximality_oracle(n, seed));
  if (all || lemma == "growth") reports.push_back(growth_oracle(n, seed));
  if (all || lemma == "factorization") reports.push_back(factorization_oracle(n, seed));
  json j = json::array();
  bool pass = true;
  for (const auto& r : reports) {
    pass = pass && r.pass();
    j.push_back(to_json(r));
  }
  out << j.dump(2) << "\n";
  if (!pass) throw DomainError("an oracle found counterexamples");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tools for parity-restricted betting strategies"};
  app.name("paritylab");
  app.require_subcommand(1);
  std::function<int()> action;

  std::string in, other, path, mode, xfile, s_text, engine = "N", lemma = "all", trace, prefix;
  std::vector<std::string> spec;
  std::size_t depth = 8, nmax = 2, count = 1000;
  long stage = 0;
  long stages = -1;
  std::uint64_t seed = 7;
  ParityTestOptions popt;
  DiagOptions dopt;
  std::string dmode = "greedy";

  auto* v = app.add_subcommand("validate", "Diagnose a table, program, or stage approximation");
  v->add_option("-i,--in", in, "strategy JSON")->required();
  v->add_option("--depth", depth, "tabulation depth for programs and approximations");
  v->add_option("--stage", stage, "stage for approximations");
  v->callback([&] { action = [&] { return cmd_validate(out, in, depth, stage); }; });

  auto* d = app.add_subcommand("decompose", "Parity factors or two-bit block decomposition");
  d->add_option("-i,--in", in, "martingale table (BetsOnOdd in block mode)")->required();
  d->add_option("--mode", mode, "parity|block")->required()->check(CLI::IsMember({"parity", "block"}));
  d->add_option("--other", other, "BetsOnEven table for block mode");
  d->add_option("--spec", spec, "m00 m10 n0 n1 c")->expected(5);
  d->add_option("-o,--out", path);
  d->callback([&] { action = [&] { return cmd_decompose(out, in, mode, other, spec, path); }; });

  auto* p = app.add_subcommand("paritytest", "Nested test array, survivor path and packing certificate");
  p->add_option("--mixture", in, "mixture JSON")->required();
  p->add_option("--depth", popt.depth, "levels K");
  p->add_option("--stages", stages, "stage budget S");
  p->add_option("--width", popt.width, "surviving parents expanded per level");
  p->add_option("-o,--out", path);
  p->callback([&] {
    action = [&] {
      popt.stages = stages > 0 ? stages : default_stages(1000);
      return cmd_paritytest(out, in, popt, path);
    };
  });

  auto* g = app.add_subcommand("diagonalize", "Integer-valued diagonalization trace");
  g->add_option("--engine", engine, "N|D")->check(CLI::IsMember({"N", "D"}));
  g->add_option("--adversaries", in, "array of integer programs")->required();
  g->add_option("--mode", dmode, "greedy|settle")->check(CLI::IsMember({"greedy", "settle"}));
  g->add_option("--target", dopt.target, "engine capital to reach");
  g->add_flag("--dim0", dopt.dim0, "interpolate (01) blocks of doubling length");
  g->add_option("--blocks", dopt.blocks, "total number of (01) blocks with --dim0");
  g->add_option("-o,--out", path, "JSONL trace");
  g->callback([&] {
    action = [&] {
      dopt.mode = dmode == "greedy" ? DiagMode::Greedy : DiagMode::Settle;
      return cmd_diagonalize(out, engine, in, dopt, path);
    };
  });

  auto* st = app.add_subcommand("stest", "Validate an s-test and scan a sequence for hits");
  st->add_option("--validate", in, "test JSON")->required();
  st->add_option("--s", s_text, "exponent, defaults to the test's own");
  st->add_option("--x", xfile, "bit file to scan");
  st->callback([&] { action = [&] { return cmd_stest(out, in, s_text, xfile); }; });

  auto* dm = app.add_subcommand("dim", "Growth-rate dimension estimates along a sequence");
  dm->add_option("--strategy", in, "strategy JSON")->required();
  dm->add_option("--x", xfile, "bit file")->required();
  dm->add_option("--stage", stage, "stage for approximations");
  dm->add_option("-o,--out", path);
  dm->callback([&] { action = [&] { return cmd_dim(out, in, xfile, stage, path); }; });

  auto* h = app.add_subcommand("dimhalf", "Run the stage machine for a sequence of dimension 1/2");
  h->add_option("--components", in, "JSON with BetsOnOdd and BetsOnEven parts");
  h->add_option("--stages", stages, "stage budget");
  h->add_option("--nmax", nmax, "deepest segment index");
  h->add_option("-o,--out", path, "run JSON");
  h->add_option("--trace", trace, "event JSONL");
  h->add_option("--prefix", prefix, "final prefix as bit text");
  h->callback([&] {
    action = [&] {
      return cmd_dimhalf(out, in, stages > 0 ? stages : default_stages(5000), nmax, path, trace, prefix);
    };
  });

  auto* vf = app.add_subcommand("verify", "Randomized and brute-force oracle suites");
  vf->add_option("--lemma", lemma, "two-round|minimality|floor|growth|factorization|all")
      ->check(CLI::IsMember({"two-round", "minimality", "floor", "growth", "factorization", "all"}));
  vf->add_option("--n", count, "random instances");
  vf->add_option("--seed", seed);
  vf->callback([&] { action = [&] { return cmd_verify(out, lemma, count, seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const StructuralError& e) {
    err << json{{"error", "malformed_input"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << json{{"error", "domain"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace paritylab
