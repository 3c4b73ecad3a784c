#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "confsym/parse.hpp"
#include "confsym/printer.hpp"
#include "confsym/report.hpp"
#include "confsym/simplify.hpp"

namespace py = pybind11;
using namespace confsym;

namespace {

EvalEnv env_from_dict(const py::dict& values) {
    EvalEnv env;
    for (const auto& item : values) {
        const std::string name = py::cast<std::string>(item.first);
        const auto id = find_symbol(name);
        if (!id) throw py::value_error("unknown symbol '" + name + "'");
        env.bind(*id, py::cast<double>(item.second));
    }
    return env;
}

std::string simplify_text(const std::string& text) {
    return to_string(simplify(parse(text)));
}

std::string diff_text(const std::string& text, const std::string& var) {
    const auto id = find_symbol(var);
    if (!id) throw py::value_error("unknown symbol '" + var + "'");
    return to_string(diff(parse(text), *id));
}

double eval_text(const std::string& text, const py::dict& values) {
    return eval(parse(text), env_from_dict(values));
}

bool zero_test_text(const std::string& text, std::uint64_t seed) {
    return zero_test(parse(text), seed);
}

std::string conf_diff_text(const std::string& text, const std::string& var,
                           const std::string& order) {
    const auto id = find_symbol(var);
    if (!id) throw py::value_error("unknown symbol '" + var + "'");
    return to_string(conf_diff_symbolic(parse(text), *id, simplify(parse(order))));
}

std::string rules_json(double alpha) {
    std::vector<double> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(0.05 + 1.95 * i / 19.0);
    Json arr = Json::array();
    for (const RuleReport& r : check_rules(alpha, calculus_corpus(), pts))
        arr.push_back(to_json(r));
    return arr.dump();
}

std::string symmetries_json(const std::string& eq_name, double alpha, double beta, int points,
                            std::uint64_t seed) {
    EquationSpec eq;
    eq.id = equation_from_name(eq_name);
    eq.alpha = alpha;
    eq.beta = beta;
    Json arr = Json::array();
    for (const VectorField& v : basis_fields(eq.id)) {
        const double worst = max_criterion_residual(eq, v, points, seed);
        arr.push_back(Json{{"field", v.label}, {"max_residual", worst},
                           {"pass", worst < 1e-8}});
    }
    return arr.dump();
}

std::string commutators_json(const std::string& eq_name, std::uint64_t seed) {
    const EquationId id = equation_from_name(eq_name);
    Json j = to_json(structure_constants(basis_fields(id), seed));
    j["jacobi"] = jacobi_identity_holds(basis_fields(id), seed);
    return j.dump();
}

std::vector<std::string> pipeline_keys() {
    std::vector<std::string> keys;
    for (const Pipeline& pl : catalog()) keys.push_back(pl.key);
    return keys;
}

std::string reduce_check_json(const std::string& key, double alpha, double beta,
                              std::uint64_t seed) {
    return to_json(reduce_check(find_pipeline(key), alpha, beta, seed)).dump();
}

std::string lift_residual_json(const std::string& key, size_t grid_n, double tol) {
    const Pipeline& pl = find_pipeline(key);
    const PipelineParams params = pl.defaults;
    const auto [zlo, zhi] = zeta_range(pl, params, 0.5, 2.0, 0.5, 2.0);
    const SolvedPipeline sp = solve_pipeline(pl, params, zlo, zhi, 1e-12);
    const GridSolution grid = lift(sp, 0.5, 2.0, 0.5, 2.0, grid_n, grid_n);
    EquationSpec eq;
    eq.id = pl.eq;
    eq.alpha = params.alpha;
    eq.beta = params.beta;
    eq.a = params.a;
    eq.b = params.b;
    ResidualReport r = pde_residual(eq, grid, tol);
    r.params = params;
    return to_json(r).dump();
}

std::string suite_json(size_t grid_n, std::uint64_t seed) {
    SuiteConfig cfg;
    cfg.grid_n = grid_n;
    cfg.seed = seed;
    return to_json(run_suite(cfg)).dump();
}

}  // namespace

PYBIND11_MODULE(_confsym, m) {
    m.doc() = "symbolic-numeric toolkit for conformable fractional evolution equations";

    m.def("parse", &simplify_text, py::arg("text"),
          "Parse and canonicalize an expression, returning its text form.");
    m.def("simplify", &simplify_text, py::arg("text"));
    m.def("diff", &diff_text, py::arg("text"), py::arg("var"));
    m.def("evaluate", &eval_text, py::arg("text"), py::arg("values"));
    m.def("zero_test", &zero_test_text, py::arg("text"), py::arg("seed") = kDefaultSeed);
    m.def("conf_diff", &conf_diff_text, py::arg("text"), py::arg("var"), py::arg("order"),
          "Symbolic conformable derivative of the given order.");
    m.def("conf_diff_value",
          [](const std::string& text, const std::string& var, double alpha, double at) {
              const auto id = find_symbol(var);
              if (!id) throw py::value_error("unknown symbol '" + var + "'");
              const Expr e = parse(text);
              const RealFn f = [&e, id](double v) {
                  EvalEnv env;
                  env.bind(*id, v);
                  return eval(e, env);
              };
              return conf_diff_numeric(f, at, alpha);
          },
          py::arg("text"), py::arg("var"), py::arg("alpha"), py::arg("at"));
    m.def("conf_integrate_value",
          [](const std::string& text, const std::string& var, double alpha, double to) {
              const auto id = find_symbol(var);
              if (!id) throw py::value_error("unknown symbol '" + var + "'");
              const Expr e = parse(text);
              const RealFn f = [&e, id](double v) {
                  EvalEnv env;
                  env.bind(*id, v);
                  return eval(e, env);
              };
              return conf_integrate_numeric(f, to, alpha);
          },
          py::arg("text"), py::arg("var"), py::arg("alpha"), py::arg("to"));

    m.def("check_rules_json", &rules_json, py::arg("alpha"));
    m.def("symmetries_json", &symmetries_json, py::arg("equation"), py::arg("alpha"),
          py::arg("beta"), py::arg("points") = 50, py::arg("seed") = kDefaultSeed);
    m.def("commutators_json", &commutators_json, py::arg("equation"),
          py::arg("seed") = kDefaultSeed);
    m.def("pipelines", &pipeline_keys);
    m.def("reduce_check_json", &reduce_check_json, py::arg("pipeline"), py::arg("alpha"),
          py::arg("beta"), py::arg("seed") = kDefaultSeed);
    m.def("lift_residual_json", &lift_residual_json, py::arg("pipeline"),
          py::arg("grid_n") = 25, py::arg("tolerance") = 1e-6);
    m.def("suite_json", &suite_json, py::arg("grid_n") = 25, py::arg("seed") = kDefaultSeed);
}
