#pragma once

#include <json.hpp>
#include <string>

#include "paritylab/algebra.hpp"
#include "paritylab/parity_casino.hpp"
#include "paritylab/stage_approx.hpp"
#include "paritylab/strategy_table.hpp"

namespace paritylab {

using json = nlohmann::ordered_json;

json to_json(const Rational& r);
Rational rational_from_json(const json& j);

json to_json(const StrategyTable& t);
StrategyTable table_from_json(const json& j);

json to_json(const Rule& r);
Rule rule_from_json(const json& j);

json to_json(const BetProgram& p);
BetProgram program_from_json(const json& j);

json to_json(const StageApprox& a);
StageApprox approx_from_json(const json& j);

json to_json(const TestArray& t);
TestArray test_array_from_json(const json& j);

json to_json(const Diagnosis& d);
json to_json(const OnlineTable& n);

// File helpers; parse failures surface as StructuralError.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace paritylab
