#pragma once

#include <json.hpp>
#include <string>

#include "confsym/verifier.hpp"

namespace confsym {

// Reports keep insertion order so equal inputs serialize byte-identically.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const RuleReport& r);
Json to_json(const ResidualReport& r);
Json to_json(const ReduceCheckReport& r);
Json to_json(const SymmetryStat& s);
Json to_json(const P34Report& r);
Json to_json(const IdentityReport& r);
Json to_json(const StructureTable& t);
Json to_json(const SuiteResult& r);
Json to_json(const GridSolution& g);  // metadata only; values go to CSV

// CSV emitters (headers included, '\n' line ends).
std::string grid_csv(const EquationSpec& eq, const GridSolution& g);
std::string solution_csv(const OdeSolution& sol, int samples);

// Structural validation against the published field list. Returns true when
// every required field is present with the right type; otherwise fills
// `error` with the first offending path.
bool validate_report(const Json& j, std::string* error);

}  // namespace confsym
