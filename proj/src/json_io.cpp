#include "paritylab/json_io.hpp"

#include <fstream>
#include <sstream>

#include "paritylab/errors.hpp"

namespace paritylab {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw StructuralError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw StructuralError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

template <typename T>
T optional_tag(const json& j, const char* key, T fallback, T (*parse)(std::string_view)) {
  if (!j.contains(key)) return fallback;
  return parse(string_field(j, key));
}

std::map<BitString, Rational> stake_map(const json& j) {
  if (!j.is_object()) throw StructuralError("stake map must be an object");
  std::map<BitString, Rational> out;
  for (const auto& [k, v] : j.items()) out.emplace(BitString(k), rational_from_json(v));
  return out;
}

json stake_map_json(const std::map<BitString, Rational>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k.str()] = to_json(v);
  return out;
}

}  // namespace

json to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw StructuralError("rational must be a \"p/q\" string, got " + j.dump());
}

json to_json(const StrategyTable& t) {
  json values = json::object();
  t.for_each_state([&](const BitString& s) { values[s.str()] = to_json(t.at(s)); });
  return json{{"depth", t.depth()},
              {"kind", to_string(t.kind())},
              {"parity", to_string(t.parity())},
              {"sided", to_string(t.sided())},
              {"values", values}};
}

StrategyTable table_from_json(const json& j) {
  const json& d = field(j, "depth");
  if (!d.is_number_unsigned()) throw StructuralError("depth must be a non-negative integer");
  const auto kind = optional_tag<Kind>(j, "kind", Kind::Martingale, parse_kind);
  const auto parity = optional_tag<ParityTag>(j, "parity", ParityTag::Unrestricted, parse_parity);
  const auto sided = optional_tag<SidedTag>(j, "sided", SidedTag::Unrestricted, parse_sided);
  const json& vals = field(j, "values");
  if (!vals.is_object()) throw StructuralError("values must be an object keyed by bit strings");
  std::map<BitString, Capital> values;
  for (const auto& [k, v] : vals.items()) values.emplace(BitString(k), rational_from_json(v));
  return StrategyTable::from_map(d.get<std::size_t>(), kind, parity, sided, values);
}

json to_json(const Rule& rule) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantRule>) {
          return json{{"type", "constant"}, {"stake", to_json(r.stake)}};
        } else if constexpr (std::is_same_v<T, ContextRule>) {
          return json{{"type", "context"}, {"order", r.order}, {"stakes", stake_map_json(r.stakes)}};
        } else if constexpr (std::is_same_v<T, TargetRule>) {
          return json{{"type", "target"}, {"target", r.target.str()}, {"stake", to_json(r.stake)}};
        } else {
          return json{{"type", "sparse"}, {"stakes", stake_map_json(r.stakes)}};
        }
      },
      rule);
}

Rule rule_from_json(const json& j) {
  const std::string type = string_field(j, "type");
  if (type == "constant") return ConstantRule{rational_from_json(field(j, "stake"))};
  if (type == "context") {
    const json& order = field(j, "order");
    if (!order.is_number_unsigned()) throw StructuralError("context order must be a non-negative integer");
    return ContextRule{order.get<std::size_t>(), stake_map(field(j, "stakes"))};
  }
  if (type == "target") {
    return TargetRule{BitString(string_field(j, "target")), rational_from_json(field(j, "stake"))};
  }
  if (type == "sparse") return SparseRule{stake_map(field(j, "stakes"))};
  throw StructuralError("unknown rule type \"" + type + "\"");
}

json to_json(const BetProgram& p) {
  json out;
  switch (p.form()) {
    case ProgramForm::Table:
      return json{{"form", "table"}, {"table", to_json(*p.source_table())}};
    case ProgramForm::Fractional:
      out["form"] = "fractional";
      break;
    case ProgramForm::Integer:
      out["form"] = "integer";
      break;
    case ProgramForm::Fsm:
      out["form"] = "fsm";
      out["unit"] = p.unit() == StakeUnit::Integer ? "integer" : "fraction";
      break;
  }
  out["initial"] = to_json(p.initial());
  out["parity"] = to_string(p.parity());
  out["sided"] = to_string(p.sided());
  if (p.form() == ProgramForm::Fsm) {
    const FiniteStateMachine& m = *p.machine();
    out["start"] = m.start;
    json states = json::array();
    for (const auto& st : m.states) {
      states.push_back(json{{"stake", to_json(st.stake)}, {"next", {st.next[0], st.next[1]}}});
    }
    out["states"] = states;
  } else {
    out["rule"] = to_json(*p.rule());
  }
  return out;
}

BetProgram program_from_json(const json& j) {
  const std::string form = string_field(j, "form");
  if (form == "table") return BetProgram::table(table_from_json(field(j, "table")));
  const Rational initial = rational_from_json(field(j, "initial"));
  const auto parity = optional_tag<ParityTag>(j, "parity", ParityTag::Unrestricted, parse_parity);
  const auto sided = optional_tag<SidedTag>(j, "sided", SidedTag::Unrestricted, parse_sided);
  if (form == "fractional") return BetProgram::fractional(initial, rule_from_json(field(j, "rule")), parity, sided);
  if (form == "integer") {
    if (!is_integer(initial)) throw DomainError("integer program with non-integer initial capital");
    return BetProgram::integer(initial.get_num(), rule_from_json(field(j, "rule")), parity, sided);
  }
  if (form == "fsm") {
    const std::string unit = j.contains("unit") ? string_field(j, "unit") : std::string("fraction");
    if (unit != "fraction" && unit != "integer") throw StructuralError("unknown fsm unit \"" + unit + "\"");
    FiniteStateMachine m;
    const json& start = field(j, "start");
    if (!start.is_number_unsigned()) throw StructuralError("start must be a state index");
    m.start = start.get<std::size_t>();
    const json& states = field(j, "states");
    if (!states.is_array()) throw StructuralError("states must be an array");
    for (const auto& st : states) {
      const json& next = field(st, "next");
      if (!next.is_array() || next.size() != 2 || !next[0].is_number_unsigned() || !next[1].is_number_unsigned()) {
        throw StructuralError("next must be a pair of state indices");
      }
      m.states.push_back(FsmState{rational_from_json(field(st, "stake")),
                                  {next[0].get<std::size_t>(), next[1].get<std::size_t>()}});
    }
    return BetProgram::fsm(initial, std::move(m), unit == "integer" ? StakeUnit::Integer : StakeUnit::Fraction,
                           parity, sided);
  }
  throw StructuralError("unknown program form \"" + form + "\"");
}

json to_json(const StageApprox& a) {
  json comps = json::array();
  for (const auto& c : a.components()) {
    comps.push_back(json{{"stage", c.stage}, {"weight", to_json(c.weight)}, {"program", to_json(c.program)}});
  }
  return json{{"kind", to_string(a.kind())},
              {"parity", to_string(a.parity())},
              {"sided", to_string(a.sided())},
              {"components", comps}};
}

StageApprox approx_from_json(const json& j) {
  const auto kind = optional_tag<Kind>(j, "kind", Kind::Martingale, parse_kind);
  const auto parity = optional_tag<ParityTag>(j, "parity", ParityTag::Unrestricted, parse_parity);
  const auto sided = optional_tag<SidedTag>(j, "sided", SidedTag::Unrestricted, parse_sided);
  const json& comps = field(j, "components");
  if (!comps.is_array()) throw StructuralError("components must be an array");
  std::vector<StageComponent> out;
  for (const auto& c : comps) {
    const json& stage = field(c, "stage");
    if (!stage.is_number_integer()) throw StructuralError("stage must be an integer");
    out.push_back(StageComponent{stage.get<long>(), rational_from_json(field(c, "weight")),
                                 program_from_json(field(c, "program"))});
  }
  return StageApprox(kind, parity, sided, std::move(out));
}

json to_json(const TestArray& t) {
  json levels = json::array();
  for (const auto& level : t.levels) {
    json members = json::array();
    for (const auto& s : level) members.push_back(s.str());
    levels.push_back(std::move(members));
  }
  json out{{"flavor", t.flavor == TestFlavor::Block34 ? "block34" : "stest"}};
  if (t.flavor == TestFlavor::STest) out["s"] = to_json(t.s);
  out["levels"] = std::move(levels);
  return out;
}

TestArray test_array_from_json(const json& j) {
  TestArray t;
  const std::string flavor = j.contains("flavor") ? string_field(j, "flavor") : "stest";
  if (flavor == "block34") t.flavor = TestFlavor::Block34;
  else if (flavor == "stest") t.flavor = TestFlavor::STest;
  else throw StructuralError("unknown test flavor \"" + flavor + "\"");
  if (j.contains("s")) t.s = rational_from_json(j.at("s"));
  const json& levels = field(j, "levels");
  if (!levels.is_array()) throw StructuralError("levels must be an array of arrays");
  for (const auto& level : levels) {
    if (!level.is_array()) throw StructuralError("levels must be an array of arrays");
    std::vector<BitString> members;
    for (const auto& m : level) {
      if (!m.is_string()) throw StructuralError("test members must be bit strings");
      members.emplace_back(m.get<std::string>());
    }
    t.levels.push_back(std::move(members));
  }
  return t;
}

json to_json(const Diagnosis& d) {
  json out;
  const auto kind = d.kind_verdict();
  out["kind"] = kind ? to_string(*kind) : "invalid";
  out["nonnegative"] = d.nonnegative;
  out["martingale"] = d.martingale;
  out["supermartingale"] = d.supermartingale;
  out["zero_propagation"] = d.zero_propagation;
  out["bets_on_even"] = d.bets_on_even;
  out["bets_on_odd"] = d.bets_on_odd;
  out["zero_sided"] = d.zero_sided;
  out["one_sided"] = d.one_sided;
  json w = json::object();
  for (const auto& [prop, s] : d.witnesses) w[prop] = s.str();
  out["witnesses"] = w;
  out["declared_ok"] = d.declared_ok();
  if (d.first_violation) {
    out["first_violation"] = json{{"property", d.first_violation->property},
                                  {"state", d.first_violation->state.str()},
                                  {"detail", d.first_violation->detail}};
  } else {
    out["first_violation"] = nullptr;
  }
  return out;
}

json to_json(const OnlineTable& n) {
  json values = json::array();
  for (const auto& [key, v] : n.values) {
    values.push_back(json{{"tau", key.first.str()}, {"sigma", key.second.str()}, {"value", to_json(v)}});
  }
  return json{{"source_parity", to_string(n.source_parity)},
              {"source_kind", to_string(n.source_kind)},
              {"half_depth", n.half_depth},
              {"values", values}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw StructuralError(path + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

}  // namespace paritylab
