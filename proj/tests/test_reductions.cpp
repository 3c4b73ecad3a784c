#include <doctest.h>

#include <cmath>

#include "confsym/parse.hpp"
#include "confsym/printer.hpp"
#include "confsym/reductions.hpp"
#include "confsym/simplify.hpp"

using namespace confsym;

namespace {

// Ratio-constancy check of a scale link: the substituted source equation must
// be a jet-independent multiple of the target equation.
bool scale_lhs_consistent(const CanonicalODE& from, const ScaleMap& sc, const CanonicalODE& to,
                          const std::map<int, Expr>& param_map = {}) {
    std::map<int, Expr> subs = param_map;
    const Expr A = sc.A, C = sc.C, V = sc.V;
    subs[sym::s] = simplify((symbol(sym::s) - C) / A);
    Expr Ak = constant(1);
    for (int k = 0; k <= from.order; ++k) {
        subs[from.unknown + k] = simplify(V * Ak * symbol(to.unknown + k));
        Ak = simplify(Ak * A);
    }
    const Expr from_subst = substitute(from.lhs, subs);

    Rng rng(kDefaultSeed);
    for (int trial = 0; trial < 20; ++trial) {
        EvalEnv params = random_env(rng);
        auto draw_ratio = [&]() {
            EvalEnv env = params;
            for (int k = 0; k <= to.order; ++k) env.bind(to.unknown + k, rng.uniform(-2, 2));
            env.bind(sym::s, rng.uniform(0.3, 2.5));
            const double denom = eval(to.lhs, env);
            if (std::abs(denom) < 1e-3) return std::numeric_limits<double>::quiet_NaN();
            return eval(from_subst, env) / denom;
        };
        const double r1 = draw_ratio(), r2 = draw_ratio();
        if (!std::isfinite(r1) || !std::isfinite(r2)) continue;
        if (std::abs(r1 - r2) > 1e-8 * (1 + std::abs(r1))) return false;
    }
    return true;
}

OdeSolution constant_solution(const CanonicalODE& ode, double value, double lo, double hi) {
    OdeSolution sol;
    sol.ode = ode;
    sol.lo = lo;
    sol.hi = hi;
    sol.model_derivs = [value](double) { return std::array<double, 4>{value, 0, 0, 0}; };
    sol.defect_derivs = sol.model_derivs;
    return sol;
}

}  // namespace

TEST_CASE("catalog enumerates the seven pipelines") {
    CHECK(catalog().size() == 7);
    const Pipeline& v4 = find_pipeline("kdv/V4/fp2");
    CHECK(equal(v4.map.zeta, simplify(parse("x*t^(-beta/(3*alpha))"))));
    CHECK(equal(v4.map.P, simplify(parse("t^(-2*beta/3)"))));
    const Pipeline& combo = find_pipeline("burgers/V3+muV1");
    CHECK(equal(combo.map.Q, simplify(parse("t^beta/(mu*beta)"))));
    CHECK(match_pipelines("kdv/V4").size() == 2);
    CHECK_THROWS_AS(find_pipeline("kdv/V9"), std::invalid_argument);
}

TEST_CASE("similarity maps are generator invariants") {
    for (const Pipeline& pl : catalog()) CHECK_MESSAGE(map_invariance_ok(pl), pl.key);
}

TEST_CASE("reduce_check passes for every pipeline") {
    for (const Pipeline& pl : catalog()) {
        for (auto [alpha, beta] :
             {std::pair{1.0, 1.0}, std::pair{0.5, 0.5}, std::pair{0.7, 0.6}}) {
            const ReduceCheckReport r = reduce_check(pl, alpha, beta);
            CHECK_MESSAGE(r.pass, pl.key, " alpha=", alpha, " beta=", beta,
                          " max=", r.max_abs);
        }
    }
}

TEST_CASE("reduce_check rejects a corrupted reduced equation") {
    Pipeline broken = find_pipeline("kdv/V4/fp2");
    broken.chain[0].lhs =
        simplify(parse("Psi_3 + 6*Psi*Psi_1 - beta/3*s*Psi_1 + 2*beta/3*Psi"));
    const ReduceCheckReport r = reduce_check(broken, 0.7, 0.6);
    CHECK(!r.pass);
    CHECK(r.max_abs > 1e-3);
}

TEST_CASE("scale maps: lookup, invertibility, and equation transport") {
    {
        const CanonicalODE from = find_pipeline("kdv/V4/fp2").chain[0];
        auto res = scale_to_canonical(from);
        REQUIRE(res.has_value());
        CHECK(res->first.kind == OdeKind::K1);
        CHECK(scale_lhs_consistent(from, res->second, res->first));
    }
    {
        const CanonicalODE from = find_pipeline("kdv/V3+aV1").chain[1];
        auto res = scale_to_canonical(from);
        REQUIRE(res.has_value());
        CHECK(res->first.kind == OdeKind::PI);
        CHECK(scale_lhs_consistent(from, res->second, res->first));
    }
    {
        const CanonicalODE from = find_pipeline("mkdv/V3").chain[1];
        auto res = scale_to_canonical(from);
        REQUIRE(res.has_value());
        // The integration constant maps as gamma = mu * beta / 3, i.e.
        // mu = 3 gamma / beta (equal to 3 gamma only at beta = 1).
        CHECK(scale_lhs_consistent(from, res->second, res->first,
                                   {{sym::gamma, simplify(parse("mu*beta/3"))}}));
        CHECK(!scale_lhs_consistent(from, res->second, res->first,
                                    {{sym::gamma, simplify(parse("mu/3"))}}));
    }
    {
        const CanonicalODE from = find_pipeline("mburgers/V3").chain[0];
        auto res = scale_to_canonical(from);
        REQUIRE(res.has_value());
        CHECK(scale_lhs_consistent(from, res->second, res->first));
    }
    // Forward and inverse point maps agree to 1e-12.
    Rng rng(kDefaultSeed);
    for (const Pipeline& pl : catalog()) {
        for (const ChainLink& link : pl.links) {
            if (link.kind != LinkKind::Scale) continue;
            EvalEnv env = random_env(rng);
            const double A = eval(link.scale.A, env);
            const double C = eval(link.scale.C, env);
            for (int i = 0; i < 10; ++i) {
                const double s = rng.uniform(0.1, 3.0);
                const double fwd = A * s + C;
                CHECK(std::abs((fwd - C) / A - s) < 1e-12 * (1 + std::abs(s)));
            }
        }
    }
    CHECK(!scale_to_canonical(find_pipeline("kdv/V4/fp2").chain[2]).has_value());
}

TEST_CASE("first integrals differentiate back to the raw reductions") {
    for (const char* key : {"kdv/V3+aV1", "mkdv/V3", "burgers/V4", "burgers/V3+muV1"}) {
        const Pipeline& pl = find_pipeline(key);
        REQUIRE(pl.links[0].kind == LinkKind::FirstIntegral);
        const CanonicalODE& integrated = pl.chain[1];
        const CanonicalODE& raw = pl.chain[0];
        DerivRules rules;
        for (int k = 0; k <= integrated.order; ++k)
            rules[integrated.unknown + k] = symbol(integrated.unknown + k + 1);
        const Expr derived = simplify(derive(integrated.lhs, sym::s, rules));
        CHECK_MESSAGE(zero_test(derived - raw.lhs), key);
    }
}

TEST_CASE("Miura correspondence") {
    // Zero chain at gamma = 0.
    CanonicalODE fp2 = find_pipeline("kdv/V4/fp2").chain.back();
    fp2.param_values = {{sym::alpha, 0.7}, {sym::gamma, 0.0}};
    const OdeSolution zero = integrate_ivp(fp2, {0.0, 0.0}, 1e-3, 3.0, 1e-11);
    const OdeSolution w0 = miura_forward(zero, 0.0);
    for (double s : {0.1, 1.0, 2.5}) CHECK(std::abs(w0.derivs(s)[0]) < 1e-12);
    const CanonicalODE k1 = find_pipeline("kdv/V4/fp2").chain[1];
    CanonicalODE k1b = k1;
    k1b.param_values = w0.ode.param_values;
    CHECK(residual_of_ode(k1b, w0, 30) < 1e-12);
    CHECK(residual_of_ode(w0.ode, w0, 30) < 1e-12);  // K2 residual

    // Round trip at gamma = 1.
    fp2.param_values[sym::gamma] = 1.0;
    const OdeSolution phi = integrate_ivp(fp2, {0.1, 0.0}, 1e-3, 1.8, 1e-12);
    REQUIRE(!phi.blew_up);
    const OdeSolution w = miura_forward(phi, 1.0);
    const OdeSolution back = miura_inverse(w, 1.0);
    int flagged = 0;
    for (int i = 0; i <= 60; ++i) {
        const double s = phi.lo + (phi.hi - phi.lo) * i / 60.0;
        const double recovered = back.derivs(s)[0];
        if (!std::isfinite(recovered)) {
            ++flagged;
            continue;
        }
        CHECK(std::abs(recovered - phi.derivs(s)[0]) < 1e-8);
    }
    CHECK(flagged < 6);

    // The mapped solution satisfies the integrated equation.
    CHECK(residual_of_ode(w.ode, w, 50) < 1e-8);
}

TEST_CASE("Miura correspondence is an algebraic identity classically") {
    // W = -Phi' - Phi^2 together with the second Painleve equation implies
    // Phi = (W' + gamma) / (2W - s), symbolically.
    const Expr w_expr = simplify(parse("-Phi_1 - Phi^2"));
    const DerivRules rules = {{sym::Phi, symbol(sym::Phi_1)}, {sym::Phi_1, symbol(sym::Phi_2)}};
    const Expr w1 = simplify(derive(w_expr, sym::s, rules));
    const Expr fp2_rhs = simplify(parse("2*Phi^3 + s*Phi + gamma"));
    const Expr w1_on_shell = substitute(w1, {{sym::Phi_2, fp2_rhs}});
    const Expr recovered =
        simplify((w1_on_shell + symbol(sym::gamma)) /
                 (constant(2) * w_expr - symbol(sym::s)));
    CHECK(zero_test(recovered - symbol(sym::Phi)));
}

TEST_CASE("thirty-fourth Painleve map reports rather than asserts") {
    CanonicalODE fp2 = find_pipeline("kdv/V4/fp2").chain.back();
    fp2.param_values = {{sym::alpha, 0.7}, {sym::gamma, 1.0}};
    const OdeSolution phi = integrate_ivp(fp2, {0.1, 0.0}, 1e-3, 2.0, 1e-11);
    const OdeSolution w = miura_forward(phi, 1.0);

    CHECK_THROWS_AS(p34_map(w, -0.25), std::domain_error);

    const P34Report r1 = p34_residual_report(w, 1.0);
    CHECK(r1.finite);
    CHECK(r1.max_residual > 1e-3);  // the printed transformation is off for gamma = 1

    // With the integration constant at -1/6 (matching sigma) the residual
    // vanishes to integrator accuracy.
    fp2.param_values[sym::gamma] = -1.0 / 6.0;
    const OdeSolution phi6 = integrate_ivp(fp2, {0.1, 0.0}, 1e-3, 2.0, 1e-11);
    const OdeSolution w6 = miura_forward(phi6, -1.0 / 6.0);
    const P34Report r6 = p34_residual_report(w6, -1.0 / 6.0);
    CHECK(r6.finite);
    CHECK(r6.max_residual < 1e-7);
}

TEST_CASE("Cole-Hopf linearization") {
    CanonicalODE linear = find_pipeline("burgers/V4").chain.back();
    linear.param_values = {{sym::alpha, 0.7}, {sym::beta, 0.6}, {sym::a, 1.0}, {sym::b, 1.0},
                           {sym::gamma, 1.0}};

    // Constant solutions solve the linear equation only with gamma = 0, and
    // map to the zero solution of the Riccati with constant 0.
    CanonicalODE linear0 = linear;
    linear0.param_values[sym::gamma] = 0.0;
    const OdeSolution const_phi = constant_solution(linear0, 2.0, 0.01, 3.0);
    const OdeSolution zero_psi = cole_hopf(const_phi, 1.0, 1.0);
    CHECK(zero_psi.ode.param_values.at(sym::gamma) == 0.0);
    for (double s : {0.1, 1.0, 2.9}) CHECK(std::abs(zero_psi.derivs(s)[0]) < 1e-14);

    // Numeric solution with the spec's parameters: the mapped function
    // satisfies the Riccati whose constant is -(2b/a) * gamma.
    const OdeSolution phi = integrate_ivp(linear, {1.0, 0.0}, 1e-3, 3.0, 1e-12);
    const OdeSolution psi = cole_hopf(phi, 1.0, 1.0);
    CHECK(psi.ode.param_values.at(sym::gamma) == doctest::Approx(-2.0));
    CHECK(residual_of_ode(psi.ode, psi, 60) < 1e-8);

    // Classical limit alpha = 1.
    CanonicalODE classical = linear;
    classical.param_values[sym::alpha] = 1.0;
    const OdeSolution phic = integrate_ivp(classical, {1.0, 0.0}, 1e-3, 3.0, 1e-12);
    const OdeSolution psic = cole_hopf(phic, 1.0, 1.0);
    CHECK(residual_of_ode(psic.ode, psic, 60) < 1e-8);
}

TEST_CASE("lift of a constant profile under the offset map") {
    const Pipeline& pl = find_pipeline("kdv/V3+aV1");
    SolvedPipeline sp;
    sp.pipeline = &pl;
    sp.params = pl.defaults;  // a = 6
    sp.frame = LiftFrame{};   // identity, classical
    CanonicalODE ode = pl.chain[1];
    sp.solution = constant_solution(ode, 0.75, -50.0, 50.0);

    const GridSolution g = lift(sp, 0.5, 2.0, 0.5, 2.0, 8, 8);
    EvalEnv env;
    env.bind(sym::beta, sp.params.beta).bind(sym::a, sp.params.a);
    for (size_t i = 0; i < g.nt(); ++i)
        for (size_t j = 0; j < g.nx(); ++j) {
            REQUIRE(!g.flagged[i * g.nx() + j]);
            env.bind(sym::t, g.ts[i]);
            const double offset = eval(parse("t^beta/(a*beta)"), env);
            CHECK(g.u[i * g.nx() + j] == doctest::Approx(offset + 0.75).epsilon(1e-12));
            CHECK(std::abs(g.u_x[i * g.nx() + j]) < 1e-14);
        }
}

TEST_CASE("solve_pipeline covers requested grids") {
    for (const char* key : {"mkdv/V3", "burgers/V4", "burgers/V3+muV1", "kdv/V3+aV1"}) {
        const Pipeline& pl = find_pipeline(key);
        const auto [zlo, zhi] = zeta_range(pl, pl.defaults, 0.5, 2.0, 0.5, 2.0);
        const SolvedPipeline sp = solve_pipeline(pl, pl.defaults, zlo, zhi);
        CHECK(!sp.solution.blew_up);
        const GridSolution g = lift(sp, 0.5, 2.0, 0.5, 2.0, 12, 12);
        size_t flagged = 0;
        for (auto f : g.flagged) flagged += f;
        CHECK_MESSAGE(flagged == 0, key, " flagged=", flagged);
    }
}
