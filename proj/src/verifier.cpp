#include "confsym/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "confsym/parse.hpp"
#include "confsym/simplify.hpp"

namespace confsym {

ResidualReport pde_residual(const EquationSpec& eq, const GridSolution& sol, double tolerance) {
    const size_t total = sol.nt() * sol.nx();
    if (sol.u.size() != total || sol.u_t.size() != total || sol.u_x.size() != total ||
        sol.u_xx.size() != total || sol.u_xxx.size() != total)
        throw std::invalid_argument("grid solution is missing partials");

    const Expr form = eq.equivalent_form();
    EvalEnv env = eq.param_env();

    ResidualReport report;
    report.pipeline_key = sol.pipeline_key;
    report.nt = sol.nt();
    report.nx = sol.nx();
    report.tolerance = tolerance;
    double sum = 0;
    size_t used = 0;
    for (size_t i = 0; i < sol.nt(); ++i) {
        for (size_t j = 0; j < sol.nx(); ++j) {
            const size_t at = i * sol.nx() + j;
            if (sol.flagged[at]) {
                ++report.flagged;
                continue;
            }
            env.bind(sym::t, sol.ts[i]).bind(sym::x, sol.xs[j]);
            env.bind(sym::u, sol.u[at]).bind(sym::u_t, sol.u_t[at]).bind(sym::u_x, sol.u_x[at]);
            env.bind(sym::u_xx, sol.u_xx[at]).bind(sym::u_xxx, sol.u_xxx[at]);
            const double r = std::abs(eval(form, env));
            report.max_abs = std::max(report.max_abs, r);
            sum += r;
            ++used;
        }
    }
    report.mean_abs = used > 0 ? sum / used : 0;
    report.flagged_fraction = total > 0 ? static_cast<double>(report.flagged) / total : 0;
    report.pass = used > 0 && report.max_abs < tolerance && report.flagged_fraction < 0.01;
    return report;
}

std::pair<Expr, Expr> k1_k2_identity_sides() {
    const CanonicalODE k1 = find_pipeline("kdv/V4/fp2").chain[1];
    const CanonicalODE k2 = find_pipeline("kdv/V4/fp34").chain[2];
    DerivRules rules;
    for (int k = 0; k < 3; ++k) rules[sym::W + k] = symbol(sym::W + k + 1);
    const Expr bracket = simplify(parse("2*W - s"));
    const Expr lhs = simplify(derive(simplify(bracket * k2.lhs), sym::s, rules));
    const Expr rhs = simplify(bracket * k1.lhs);
    return {lhs, rhs};
}

IdentityReport integration_identity_check(const OdeSolution& w_solution, double gamma, double alpha,
                                  int samples) {
    static const std::pair<Expr, Expr> sides = k1_k2_identity_sides();
    IdentityReport report;
    report.alpha = alpha;
    report.gamma = gamma;
    report.samples = samples;
    EvalEnv env;
    env.bind(sym::gamma, gamma).bind(sym::alpha, alpha);
    for (int i = 0; i < samples; ++i) {
        const double s = w_solution.lo + (w_solution.hi - w_solution.lo) * i / (samples - 1.0);
        const std::array<double, 4> d = w_solution.derivs(s);
        if (!std::isfinite(d[0]) || std::abs(2 * d[0] - s) < 1e-8) {
            ++report.skipped;
            continue;
        }
        env.bind(sym::s, s);
        for (int k = 0; k < 4; ++k) env.bind(sym::W + k, d[static_cast<size_t>(k)]);
        const double lhs = eval(sides.first, env);
        const double rhs = eval(sides.second, env);
        report.max_residual = std::max(report.max_residual, std::abs(lhs - rhs));
    }
    return report;
}

RoundTripReport miura_round_trip(const OdeSolution& fp2_solution, double gamma, int samples) {
    const OdeSolution w = miura_forward(fp2_solution, gamma);
    const OdeSolution back = miura_inverse(w, gamma);
    RoundTripReport report;
    report.samples = samples;
    for (int i = 0; i < samples; ++i) {
        const double s =
            fp2_solution.lo + (fp2_solution.hi - fp2_solution.lo) * i / (samples - 1.0);
        const double recovered = back.derivs(s)[0];
        if (!std::isfinite(recovered)) {
            ++report.skipped;
            continue;
        }
        report.max_error =
            std::max(report.max_error, std::abs(recovered - fp2_solution.derivs(s)[0]));
    }
    return report;
}

OdeSolution apply_scale_to_solution(const OdeSolution& src, const ScaleMap& scale,
                                    const CanonicalODE& target) {
    const EvalEnv env = src.ode.param_env();
    const double A = eval(scale.A, env);
    const double C = eval(scale.C, env);
    const double V = eval(scale.V, env);
    if (A == 0 || V == 0) throw std::domain_error("degenerate scale map");

    auto wrap = [A, C, V](std::function<std::array<double, 4>(double)> source) {
        return [=](double s_new) -> std::array<double, 4> {
            const double s_old = (s_new - C) / A;
            const std::array<double, 4> d = source(s_old);
            std::array<double, 4> out{};
            double scale_k = V;
            for (int k = 0; k < 4; ++k) {
                out[static_cast<size_t>(k)] = d[static_cast<size_t>(k)] / scale_k;
                scale_k *= A;
            }
            return out;
        };
    };

    OdeSolution out;
    out.ode = target;
    const double e0 = A * src.lo + C, e1 = A * src.hi + C;
    out.lo = std::min(e0, e1);
    out.hi = std::max(e0, e1);
    out.blew_up = src.blew_up;
    out.rtol = src.rtol;
    out.atol = src.atol;
    out.model_derivs = wrap(src.model_derivs);
    out.defect_derivs = wrap(src.defect_derivs ? src.defect_derivs : src.model_derivs);
    return out;
}

// ---- suite -----------------------------------------------------------------------

namespace {

std::vector<double> rule_points() {
    std::vector<double> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(0.05 + 1.95 * i / 19.0);
    return pts;
}

struct ExpectedBracket {
    size_t i, j;             // zero-based indices into the basis
    const char* name;
    std::map<size_t, const char*> coeffs;  // basis index -> coefficient text
};

const std::vector<ExpectedBracket>& expected_brackets(EquationId id) {
    static const std::vector<ExpectedBracket> kdv = {
        {0, 1, "[V1,V2]=0", {}},
        {0, 2, "[V1,V3]=6V2", {{1, "6"}}},
        {0, 3, "[V1,V4]=-3/2V1", {{0, "-3/2"}}},
        {1, 2, "[V2,V3]=0", {}},
        {1, 3, "[V2,V4]=-1/2V2", {{1, "-1/2"}}},
        {2, 3, "[V3,V4]=V3", {{2, "1"}}},
    };
    static const std::vector<ExpectedBracket> mkdv = {
        {0, 1, "[V1,V2]=0", {}},
        {0, 2, "[V1,V3]=3V1", {{0, "3"}}},
        {1, 2, "[V2,V3]=V2", {{1, "1"}}},
    };
    static const std::vector<ExpectedBracket> burgers = {
        {0, 1, "[V1,V2]=0", {}},
        {1, 2, "[V2,V3]=0", {}},
        {2, 4, "[V3,V5]=0", {}},
        {1, 3, "[V2,V4]=-V2", {{1, "-1"}}},
        {1, 4, "[V2,V5]=(1/a)V3", {{2, "1/a"}}},
        {0, 2, "[V1,V3]=aV2", {{1, "a"}}},
        {0, 3, "[V1,V4]=-2V1", {{0, "-2"}}},
        {0, 4, "[V1,V5]=-V4", {{3, "-1"}}},
        {2, 3, "[V3,V4]=V3", {{2, "1"}}},
        {3, 4, "[V4,V5]=-2V5", {{4, "-2"}}},
    };
    static const std::vector<ExpectedBracket> mburgers = {
        {0, 1, "[V1,V2]=0", {}},
        {0, 2, "[V1,V3]=4V1", {{0, "4"}}},
        {1, 2, "[V2,V3]=2V2", {{1, "2"}}},
    };
    switch (id) {
        case EquationId::Kdv: return kdv;
        case EquationId::Mkdv: return mkdv;
        case EquationId::Burgers: return burgers;
        case EquationId::Mburgers: return mburgers;
    }
    throw std::logic_error("bad equation id");
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& config) {
    SuiteResult out;
    out.config = config;

    // 1. conformable calculus rules
    {
        double worst = 0;
        bool pass = true;
        for (double alpha : {0.3, 0.5, 0.9, 1.0}) {
            for (RuleReport& r : check_rules(alpha, calculus_corpus(), rule_points())) {
                worst = std::max(worst, r.max_residual);
                pass = pass && r.pass;
                out.rules.push_back(std::move(r));
            }
        }
        out.sqrt_half_error = std::abs(
            conf_diff_numeric([](double v) { return std::sqrt(v); }, 2.0, 0.5) - 0.5);
        pass = pass && out.sqrt_half_error < 1e-8;
        out.criteria.push_back({1, "conformable calculus rules", pass,
                                std::max(worst, out.sqrt_half_error), 1e-6, ""});
    }

    // 2. symmetry criterion for the bases and the constant families
    {
        const std::vector<std::pair<double, double>> orders = {
            {1.0, 1.0}, {0.5, 0.5}, {0.7, 0.6}, {0.9, 0.3}};
        double worst = 0;
        bool pass = true;
        Rng seeder(config.seed + 2);
        for (EquationId id : {EquationId::Kdv, EquationId::Mkdv, EquationId::Burgers,
                              EquationId::Mburgers}) {
            EquationSpec eq;
            eq.id = id;
            std::vector<VectorField> fields = basis_fields(id);
            const SymmetryFamily family = symmetry_family(id);
            fields.push_back(family.field);
            EvalEnv constants;
            Rng crng(config.seed + 7);
            for (int k = 0; k < 5; ++k) constants.bind(sym::c1 + k, crng.uniform(-2, 2));
            for (const VectorField& v : fields) {
                const CriterionEvaluator evaluator(eq, v);
                for (auto [alpha, beta] : orders) {
                    Rng rng(config.seed + 11);
                    double max_res = 0;
                    for (int i = 0; i < config.jet_points; ++i) {
                        const JetPoint p = random_jet_point(rng);
                        max_res = std::max(max_res, std::abs(evaluator.residual_at(
                                                        p, alpha, beta, 1.5, 1.0, constants)));
                    }
                    const bool field_pass = max_res < 1e-8;
                    out.symmetry.push_back(
                        {equation_name(id), v.label, alpha, beta, max_res, field_pass});
                    worst = std::max(worst, max_res);
                    pass = pass && field_pass;
                }
            }
        }
        // negative control
        EquationSpec eq;
        eq.id = EquationId::Kdv;
        eq.alpha = 0.7;
        eq.beta = 0.6;
        const VectorField bogus{simplify(parse("x")), constant(0), constant(0), "bogus"};
        out.negative_control =
            max_criterion_residual(eq, bogus, config.jet_points, seeder.next_u64());
        pass = pass && out.negative_control > 1e-3;
        out.criteria.push_back({2, "symmetry criterion", pass, worst, 1e-8,
                                "negative control " + std::to_string(out.negative_control)});
    }

    // 3. Lie algebra tables
    {
        bool pass = true;
        for (EquationId id : {EquationId::Kdv, EquationId::Mkdv, EquationId::Burgers,
                              EquationId::Mburgers}) {
            const std::vector<VectorField> fields = basis_fields(id);
            const StructureTable table = structure_constants(fields, config.seed + 3);
            pass = pass && table.closed;
            for (const ExpectedBracket& eb : expected_brackets(id)) {
                bool ok = table.entries[eb.i][eb.j].expressible;
                for (size_t k = 0; ok && k < fields.size(); ++k) {
                    Expr want = constant(0);
                    auto it = eb.coeffs.find(k);
                    if (it != eb.coeffs.end()) want = simplify(parse(it->second));
                    ok = zero_test(table.entries[eb.i][eb.j].coefficients[k] - want,
                                   config.seed + 5);
                }
                out.brackets.push_back({equation_name(id), eb.name, ok});
                pass = pass && ok;
            }
        }
        out.jacobi_all = true;
        for (EquationId id : {EquationId::Kdv, EquationId::Mkdv, EquationId::Burgers,
                              EquationId::Mburgers})
            out.jacobi_all =
                out.jacobi_all && jacobi_identity_holds(basis_fields(id), config.seed + 4);
        pass = pass && out.jacobi_all;
        out.criteria.push_back({3, "Lie algebra structure", pass, pass ? 0.0 : 1.0, 0, ""});
    }

    // 4. reduction correctness
    {
        double worst = 0;
        bool pass = true;
        for (const Pipeline& pl : catalog()) {
            for (auto [alpha, beta] :
                 {std::pair{1.0, 1.0}, std::pair{0.5, 0.5}, std::pair{0.7, 0.6}}) {
                ReduceCheckReport r = reduce_check(pl, alpha, beta, config.seed + 13);
                worst = std::max(worst, r.max_abs);
                pass = pass && r.pass;
                out.reductions.push_back(std::move(r));
            }
        }
        out.criteria.push_back({4, "similarity reductions", pass, worst, 1e-9, ""});
    }

    // 5. end-to-end lift residuals
    if (!config.skip_lifts) {
        struct LiftSpec {
            const char* key;
            double tolerance;
        };
        // The third-order equations reconstruct a third derivative through the
        // reduced equation's derivative chain, which amplifies dense-output
        // error; they get the documented looser gate.
        const std::vector<LiftSpec> lifts = {{"mkdv/V3", 1e-6},
                                             {"burgers/V4", 1e-7},
                                             {"burgers/V3+muV1", 1e-7},
                                             {"kdv/V3+aV1", 1e-6}};
        double worst_ratio = 0;
        bool pass = true;
        for (const LiftSpec& ls : lifts) {
            const Pipeline& pl = find_pipeline(ls.key);
            const PipelineParams params = pl.defaults;
            const auto [zlo, zhi] =
                zeta_range(pl, params, config.t_lo, config.t_hi, config.x_lo, config.x_hi);
            const SolvedPipeline sp = solve_pipeline(pl, params, zlo, zhi, config.ode_tol);
            const GridSolution grid = lift(sp, config.t_lo, config.t_hi, config.x_lo,
                                           config.x_hi, config.grid_n, config.grid_n);
            EquationSpec eq;
            eq.id = pl.eq;
            eq.alpha = params.alpha;
            eq.beta = params.beta;
            eq.a = params.a;
            eq.b = params.b;
            ResidualReport r = pde_residual(eq, grid, ls.tolerance);
            r.params = params;
            r.seed = config.seed;
            worst_ratio = std::max(worst_ratio, r.max_abs / ls.tolerance);
            pass = pass && r.pass;
            out.lifts.push_back(std::move(r));
        }
        out.criteria.push_back(
            {5, "lifted solution residuals", pass, worst_ratio, 1.0, "worst max/tolerance"});
    }

    // 6. first-integration identity and the correspondence round trip
    {
        double worst_identity = 0, worst_round = 0;
        bool pass = true;
        CanonicalODE fp2 = find_pipeline("kdv/V4/fp2").chain.back();
        for (double alpha : {0.7, 1.0}) {
            for (double gamma : {0.0, 1.0}) {
                fp2.param_values = {{sym::alpha, alpha}, {sym::gamma, gamma}};
                const OdeSolution phi =
                    integrate_ivp(fp2, {0.1, 0.0}, 1e-3, 1.8, config.ode_tol);
                const OdeSolution w = miura_forward(phi, gamma);
                IdentityReport ir = integration_identity_check(w, gamma, alpha);
                worst_identity = std::max(worst_identity, ir.max_residual);
                pass = pass && ir.max_residual < 1e-6;
                out.identities.push_back(ir);

                RoundTripReport rt = miura_round_trip(phi, gamma);
                worst_round = std::max(worst_round, rt.max_error);
                pass = pass && rt.max_error < 1e-8 && rt.skipped < rt.samples / 10;
                out.round_trips.push_back(rt);
            }
        }
        out.criteria.push_back({6, "integration identity and round trip", pass,
                                std::max(worst_identity, worst_round / 0.01), 1e-6,
                                "identity < 1e-6, round trip < 1e-8"});
    }

    // 7. scale maps move solutions between the reduced forms
    {
        bool pass = true;
        auto check_scale = [&](const char* pipeline_key, size_t link_index,
                               const CanonicalODE& src_ode, const std::vector<double>& ic,
                               double lo, double hi,
                               const std::map<int, double>& target_params, const char* name) {
            const Pipeline& pl = find_pipeline(pipeline_key);
            const ChainLink& link = pl.links[link_index];
            const OdeSolution src = integrate_ivp(src_ode, ic, lo, hi, config.ode_tol);
            CanonicalODE target = pl.chain[link_index + 1];
            target.param_values = src_ode.param_values;
            for (const auto& [k, v] : target_params) target.param_values[k] = v;
            const OdeSolution mapped = apply_scale_to_solution(src, link.scale, target);
            ScaleCheck sc;
            sc.link = name;
            const EvalEnv env = src_ode.param_env();
            const double A = eval(link.scale.A, env), C = eval(link.scale.C, env);
            double rt = 0;
            for (int i = 0; i <= 10; ++i) {
                const double s = lo + (hi - lo) * i / 10.0;
                rt = std::max(rt, std::abs((A * s + C - C) / A - s));
            }
            sc.round_trip_error = rt;
            sc.target_residual = residual_of_ode(target, mapped, 60);
            sc.pass = rt < 1e-12 && sc.target_residual < 1e-7;
            pass = pass && sc.pass;
            out.scales.push_back(sc);
        };

        {
            CanonicalODE raw = find_pipeline("kdv/V4/fp2").chain[0];
            raw.param_values = {{sym::alpha, 0.7}, {sym::beta, 0.6}};
            check_scale("kdv/V4/fp2", 0, raw, {0.1, 0.0, 0.0}, 1e-3, 1.5, {},
                        "kdv scaling -> normalized");
        }
        {
            CanonicalODE combo = find_pipeline("kdv/V3+aV1").chain[1];
            combo.param_values = {{sym::a, 6.0}, {sym::gamma, 1.0}};
            check_scale("kdv/V3+aV1", 1, combo, {0.5, 0.0}, -1.5, 1.0, {},
                        "kdv combo -> first Painleve");
        }
        {
            // mu = 3 gamma / beta; the printed relation mu = 3 gamma holds at
            // beta = 1 and is checked there as well.
            CanonicalODE integrated = find_pipeline("mkdv/V3").chain[1];
            integrated.param_values = {{sym::alpha, 0.7}, {sym::beta, 0.6}, {sym::gamma, 0.2}};
            check_scale("mkdv/V3", 1, integrated, {0.1, 0.0}, 1e-3, 1.6,
                        {{sym::mu, 3 * 0.2 / 0.6}}, "mkdv integrated -> Painleve II (mu=3g/b)");
            CanonicalODE classical = integrated;
            classical.param_values[sym::beta] = 1.0;
            classical.param_values[sym::gamma] = 0.3;
            check_scale("mkdv/V3", 1, classical, {0.1, 0.0}, 1e-3, 1.6, {{sym::mu, 3 * 0.3}},
                        "mkdv integrated -> Painleve II (beta=1, mu=3g)");
        }
        {
            CanonicalODE raw = find_pipeline("mburgers/V3").chain[0];
            raw.param_values = {{sym::alpha, 0.7}, {sym::beta, 0.6}, {sym::a, 1.0},
                               {sym::b, 1.0}};
            check_scale("mburgers/V3", 0, raw, {0.3, 0.0}, 1e-3, 2.0, {},
                        "mburgers reduced -> normalized");
        }
        double worst = 0;
        for (const ScaleCheck& sc : out.scales)
            worst = std::max(worst, sc.target_residual);
        out.criteria.push_back({7, "scale maps", pass, worst, 1e-7, ""});
    }

    // 8. thirty-fourth Painleve residual report
    {
        bool pass = true;
        CanonicalODE fp2 = find_pipeline("kdv/V4/fp2").chain.back();
        for (double gamma : {0.0, 1.0, -1.0 / 6.0}) {
            fp2.param_values = {{sym::alpha, 0.7}, {sym::gamma, gamma}};
            const OdeSolution phi = integrate_ivp(fp2, {0.1, 0.0}, 1e-3, 1.8, config.ode_tol);
            const OdeSolution w = miura_forward(phi, gamma);
            const P34Report r = p34_residual_report(w, gamma);
            pass = pass && r.finite;
            out.p34.push_back(r);
        }
        std::string note = "residuals:";
        for (const P34Report& r : out.p34)
            note += " gamma=" + std::to_string(r.gamma) + " max=" +
                    std::to_string(r.max_residual);
        out.criteria.push_back(
            {8, "thirty-fourth Painleve report", pass, out.p34.back().max_residual, 0, note});
    }

    out.all_pass = true;
    for (const CriterionOutcome& c : out.criteria) out.all_pass = out.all_pass && c.pass;
    return out;
}

}  // namespace confsym
