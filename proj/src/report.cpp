#include "confsym/report.hpp"

#include <cmath>
#include <sstream>

#include "confsym/printer.hpp"

namespace confsym {
namespace {

Json params_json(const PipelineParams& p) {
    return Json{{"alpha", p.alpha}, {"beta", p.beta},   {"a", p.a},
                {"b", p.b},         {"gamma", p.gamma}, {"mu", p.mu},
                {"sigma", p.sigma}};
}

std::string fmt_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

Json to_json(const RuleReport& r) {
    return Json{{"rule", r.rule},
                {"alpha", r.alpha},
                {"max_residual", r.max_residual},
                {"points_checked", r.points_checked},
                {"points_skipped", r.points_skipped},
                {"pass", r.pass}};
}

Json to_json(const ResidualReport& r) {
    return Json{{"pipeline", r.pipeline_key},
                {"grid", Json{{"nt", r.nt}, {"nx", r.nx}}},
                {"max_abs_residual", r.max_abs},
                {"mean_abs_residual", r.mean_abs},
                {"flagged_nodes", r.flagged},
                {"flagged_fraction", r.flagged_fraction},
                {"tolerance", r.tolerance},
                {"pass", r.pass},
                {"config", params_json(r.params)},
                {"seed", r.seed}};
}

Json to_json(const ReduceCheckReport& r) {
    return Json{{"pipeline", r.key},
                {"alpha", r.alpha},
                {"beta", r.beta},
                {"max_abs", r.max_abs},
                {"pass", r.pass}};
}

Json to_json(const SymmetryStat& s) {
    return Json{{"equation", s.equation}, {"field", s.field},
                {"alpha", s.alpha},       {"beta", s.beta},
                {"max_residual", s.max_residual}, {"pass", s.pass}};
}

Json to_json(const P34Report& r) {
    return Json{{"gamma", r.gamma},
                {"sigma", r.sigma},
                {"max_residual", r.max_residual},
                {"mean_residual", r.mean_residual},
                {"samples", r.samples},
                {"flagged", r.flagged},
                {"finite", r.finite}};
}

Json to_json(const IdentityReport& r) {
    return Json{{"alpha", r.alpha},
                {"gamma", r.gamma},
                {"max_residual", r.max_residual},
                {"samples", r.samples},
                {"skipped", r.skipped}};
}

Json to_json(const StructureTable& t) {
    Json brackets = Json::array();
    for (size_t i = 0; i < t.labels.size(); ++i) {
        for (size_t j = 0; j < t.labels.size(); ++j) {
            if (i == j) continue;
            const BracketEntry& e = t.entries[i][j];
            Json coeffs = Json::array();
            for (size_t k = 0; k < e.coefficients.size(); ++k)
                if (!e.coefficients[k].is_zero())
                    coeffs.push_back(Json{{"basis", t.labels[k]},
                                          {"coefficient", to_string(e.coefficients[k])}});
            brackets.push_back(Json{{"left", t.labels[i]},
                                    {"right", t.labels[j]},
                                    {"zero", e.zero},
                                    {"expressible", e.expressible},
                                    {"expansion", coeffs}});
        }
    }
    return Json{{"fields", t.labels}, {"closed", t.closed}, {"brackets", brackets}};
}

Json to_json(const GridSolution& g) {
    size_t flagged = 0;
    for (auto f : g.flagged) flagged += f;
    return Json{{"pipeline", g.pipeline_key},
                {"nt", g.nt()},
                {"nx", g.nx()},
                {"t_lo", g.ts.empty() ? 0.0 : g.ts.front()},
                {"t_hi", g.ts.empty() ? 0.0 : g.ts.back()},
                {"x_lo", g.xs.empty() ? 0.0 : g.xs.front()},
                {"x_hi", g.xs.empty() ? 0.0 : g.xs.back()},
                {"flagged_nodes", flagged}};
}

Json to_json(const SuiteResult& r) {
    Json rules = Json::array();
    for (const RuleReport& x : r.rules) rules.push_back(to_json(x));
    Json symmetry = Json::array();
    for (const SymmetryStat& x : r.symmetry) symmetry.push_back(to_json(x));
    Json brackets = Json::array();
    for (const BracketCheck& x : r.brackets)
        brackets.push_back(Json{{"equation", x.equation}, {"bracket", x.bracket},
                                {"pass", x.pass}});
    Json reductions = Json::array();
    for (const ReduceCheckReport& x : r.reductions) reductions.push_back(to_json(x));
    Json lifts = Json::array();
    for (const ResidualReport& x : r.lifts) lifts.push_back(to_json(x));
    Json identities = Json::array();
    for (const IdentityReport& x : r.identities) identities.push_back(to_json(x));
    Json round_trips = Json::array();
    for (const RoundTripReport& x : r.round_trips)
        round_trips.push_back(Json{{"max_error", x.max_error},
                                   {"samples", x.samples},
                                   {"skipped", x.skipped}});
    Json scales = Json::array();
    for (const ScaleCheck& x : r.scales)
        scales.push_back(Json{{"link", x.link},
                              {"round_trip_error", x.round_trip_error},
                              {"target_residual", x.target_residual},
                              {"pass", x.pass}});
    Json p34 = Json::array();
    for (const P34Report& x : r.p34) p34.push_back(to_json(x));
    Json criteria = Json::array();
    for (const CriterionOutcome& c : r.criteria)
        criteria.push_back(Json{{"number", c.number},
                                {"name", c.name},
                                {"pass", c.pass},
                                {"worst", c.worst},
                                {"threshold", c.threshold},
                                {"note", c.note}});

    return Json{{"schema_version", kSchemaVersion},
                {"seed", r.config.seed},
                {"grid_n", r.config.grid_n},
                {"rules", rules},
                {"sqrt_half_error", r.sqrt_half_error},
                {"symmetry", symmetry},
                {"negative_control", r.negative_control},
                {"brackets", brackets},
                {"jacobi", r.jacobi_all},
                {"reductions", reductions},
                {"lifts", lifts},
                {"identities", identities},
                {"round_trips", round_trips},
                {"scales", scales},
                {"p34", p34},
                {"criteria", criteria},
                {"all_pass", r.all_pass}};
}

std::string grid_csv(const EquationSpec& eq, const GridSolution& g) {
    const Expr form = eq.equivalent_form();
    EvalEnv env = eq.param_env();
    std::string out = "t,x,u,residual\n";
    for (size_t i = 0; i < g.nt(); ++i) {
        for (size_t j = 0; j < g.nx(); ++j) {
            const size_t at = i * g.nx() + j;
            out += fmt_double(g.ts[i]) + "," + fmt_double(g.xs[j]) + ",";
            if (g.flagged[at]) {
                out += "nan,nan\n";
                continue;
            }
            env.bind(sym::t, g.ts[i]).bind(sym::x, g.xs[j]);
            env.bind(sym::u, g.u[at]).bind(sym::u_t, g.u_t[at]).bind(sym::u_x, g.u_x[at]);
            env.bind(sym::u_xx, g.u_xx[at]).bind(sym::u_xxx, g.u_xxx[at]);
            out += fmt_double(g.u[at]) + "," + fmt_double(std::abs(eval(form, env))) + "\n";
        }
    }
    return out;
}

std::string solution_csv(const OdeSolution& sol, int samples) {
    std::string out = "s,value,derivative\n";
    if (samples < 2) samples = 2;
    for (int i = 0; i < samples; ++i) {
        const double s = sol.lo + (sol.hi - sol.lo) * i / (samples - 1.0);
        const std::array<double, 4> d = sol.derivs(s);
        out += fmt_double(s) + "," + fmt_double(d[0]) + "," + fmt_double(d[1]) + "\n";
    }
    return out;
}

namespace {

bool check_field(const Json& j, const std::string& path, const char* key,
                 Json::value_t expected, std::string* error) {
    if (!j.contains(key)) {
        if (error) *error = path + "." + key + " missing";
        return false;
    }
    const Json& v = j.at(key);
    bool ok = v.type() == expected;
    // Integral values may parse as unsigned/signed/float interchangeably.
    if (!ok && expected == Json::value_t::number_float) ok = v.is_number();
    if (!ok && (expected == Json::value_t::number_unsigned ||
                expected == Json::value_t::number_integer))
        ok = v.is_number_integer() || v.is_number_unsigned();
    if (!ok && error) *error = path + "." + key + " has wrong type";
    return ok;
}

bool validate_array(const Json& j, const std::string& path, const char* key,
                    const std::vector<std::pair<const char*, Json::value_t>>& fields,
                    std::string* error) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        if (error) *error = path + "." + key + " missing or not an array";
        return false;
    }
    size_t idx = 0;
    for (const Json& item : j.at(key)) {
        const std::string ipath = path + "." + key + "[" + std::to_string(idx++) + "]";
        if (!item.is_object()) {
            if (error) *error = ipath + " not an object";
            return false;
        }
        for (const auto& [name, type] : fields)
            if (!check_field(item, ipath, name, type, error)) return false;
    }
    return true;
}

}  // namespace

bool validate_report(const Json& j, std::string* error) {
    using T = Json::value_t;
    if (!j.is_object()) {
        if (error) *error = "root is not an object";
        return false;
    }
    if (!check_field(j, "$", "schema_version", T::number_unsigned, error)) return false;
    if (!check_field(j, "$", "seed", T::number_unsigned, error)) return false;
    if (!check_field(j, "$", "all_pass", T::boolean, error)) return false;
    if (!validate_array(j, "$", "rules",
                        {{"rule", T::string},
                         {"alpha", T::number_float},
                         {"max_residual", T::number_float},
                         {"points_checked", T::number_integer},
                         {"points_skipped", T::number_integer},
                         {"pass", T::boolean}},
                        error))
        return false;
    if (!validate_array(j, "$", "symmetry",
                        {{"equation", T::string},
                         {"field", T::string},
                         {"alpha", T::number_float},
                         {"beta", T::number_float},
                         {"max_residual", T::number_float},
                         {"pass", T::boolean}},
                        error))
        return false;
    if (!validate_array(j, "$", "brackets",
                        {{"equation", T::string}, {"bracket", T::string}, {"pass", T::boolean}},
                        error))
        return false;
    if (!validate_array(j, "$", "reductions",
                        {{"pipeline", T::string},
                         {"alpha", T::number_float},
                         {"beta", T::number_float},
                         {"max_abs", T::number_float},
                         {"pass", T::boolean}},
                        error))
        return false;
    if (!validate_array(j, "$", "lifts",
                        {{"pipeline", T::string},
                         {"max_abs_residual", T::number_float},
                         {"mean_abs_residual", T::number_float},
                         {"flagged_fraction", T::number_float},
                         {"tolerance", T::number_float},
                         {"pass", T::boolean}},
                        error))
        return false;
    if (!validate_array(j, "$", "identities",
                        {{"alpha", T::number_float},
                         {"gamma", T::number_float},
                         {"max_residual", T::number_float}},
                        error))
        return false;
    if (!validate_array(j, "$", "scales",
                        {{"link", T::string},
                         {"round_trip_error", T::number_float},
                         {"target_residual", T::number_float},
                         {"pass", T::boolean}},
                        error))
        return false;
    if (!validate_array(j, "$", "p34",
                        {{"gamma", T::number_float},
                         {"max_residual", T::number_float},
                         {"finite", T::boolean}},
                        error))
        return false;
    if (!validate_array(j, "$", "criteria",
                        {{"number", T::number_integer},
                         {"name", T::string},
                         {"pass", T::boolean},
                         {"worst", T::number_float},
                         {"threshold", T::number_float},
                         {"note", T::string}},
                        error))
        return false;
    return true;
}

}  // namespace confsym
