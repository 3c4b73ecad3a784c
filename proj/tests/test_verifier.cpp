#include <doctest.h>

#include <cmath>

#include "confsym/parse.hpp"
#include "confsym/simplify.hpp"
#include "confsym/verifier.hpp"

using namespace confsym;

namespace {
GridSolution constant_grid(double value, size_t nt, size_t nx) {
    GridSolution g;
    g.pipeline_key = "synthetic";
    for (size_t i = 0; i < nt; ++i) g.ts.push_back(0.5 + 0.1 * static_cast<double>(i));
    for (size_t j = 0; j < nx; ++j) g.xs.push_back(0.5 + 0.1 * static_cast<double>(j));
    const size_t total = nt * nx;
    g.u.assign(total, value);
    g.u_t.assign(total, 0);
    g.u_x.assign(total, 0);
    g.u_xx.assign(total, 0);
    g.u_xxx.assign(total, 0);
    g.flagged.assign(total, 0);
    return g;
}
}  // namespace

TEST_CASE("constant profiles are exact Burgers solutions") {
    EquationSpec eq;
    eq.id = EquationId::Burgers;
    eq.alpha = 0.7;
    eq.beta = 0.6;
    const ResidualReport r = pde_residual(eq, constant_grid(1.3, 6, 5), 1e-9);
    CHECK(r.pass);
    CHECK(r.max_abs == 0);
    CHECK(r.flagged == 0);
}

TEST_CASE("pde_residual rejects malformed grids") {
    EquationSpec eq;
    eq.id = EquationId::Burgers;
    GridSolution g = constant_grid(1.0, 3, 3);
    g.u_xx.pop_back();
    CHECK_THROWS_AS(pde_residual(eq, g, 1e-9), std::invalid_argument);
}

TEST_CASE("end-to-end lift residual and its negative control") {
    const Pipeline& pl = find_pipeline("mkdv/V3");
    const PipelineParams params = pl.defaults;
    const auto [zlo, zhi] = zeta_range(pl, params, 0.5, 2.0, 0.5, 2.0);
    const SolvedPipeline sp = solve_pipeline(pl, params, zlo, zhi, 1e-12);
    EquationSpec eq;
    eq.id = pl.eq;
    eq.alpha = params.alpha;
    eq.beta = params.beta;

    const GridSolution good = lift(sp, 0.5, 2.0, 0.5, 2.0, 30, 30);
    const ResidualReport r = pde_residual(eq, good, 1e-7);
    CHECK(r.pass);
    CHECK(r.max_abs < 1e-7);

    // Corrupted similarity prefactor: t^(-beta/2) instead of t^(-beta/3).
    Pipeline broken = pl;
    broken.map.P = simplify(parse("t^(-beta/2)"));
    SolvedPipeline bad = sp;
    bad.pipeline = &broken;
    const GridSolution wrong = lift(bad, 0.5, 2.0, 0.5, 2.0, 12, 12);
    const ResidualReport rb = pde_residual(eq, wrong, 1e-7);
    CHECK(!rb.pass);
    CHECK(rb.max_abs > 1e-2);
}

TEST_CASE("classical orders reproduce the classical self-similar solutions") {
    // At alpha = beta = 1 the pipelines degenerate to the classical similarity
    // reductions; the lift must still verify against the classical equations.
    for (const char* key : {"mkdv/V3", "burgers/V4"}) {
        const Pipeline& pl = find_pipeline(key);
        PipelineParams params = pl.defaults;
        params.alpha = 1.0;
        params.beta = 1.0;
        const auto [zlo, zhi] = zeta_range(pl, params, 0.5, 2.0, 0.5, 2.0);
        const SolvedPipeline sp = solve_pipeline(pl, params, zlo, zhi, 1e-12);
        const GridSolution g = lift(sp, 0.5, 2.0, 0.5, 2.0, 15, 15);
        EquationSpec eq;
        eq.id = pl.eq;
        eq.alpha = 1.0;
        eq.beta = 1.0;
        eq.a = params.a;
        eq.b = params.b;
        const ResidualReport r = pde_residual(eq, g, 1e-7);
        CHECK_MESSAGE(r.pass, key, " classical-limit residual ", r.max_abs);
    }

    // Self-similar shape: u t^(1/3) depends on x t^(-1/3) alone, so points
    // sharing zeta carry the same profile value.
    {
        const Pipeline& pl = find_pipeline("mkdv/V3");
        PipelineParams params = pl.defaults;
        params.alpha = 1.0;
        params.beta = 1.0;
        const auto [zlo, zhi] = zeta_range(pl, params, 0.5, 2.0, 0.5, 2.0);
        const SolvedPipeline sp = solve_pipeline(pl, params, zlo, zhi, 1e-12);
        const double t1 = 0.8, x1 = 1.1, t2 = 1.7;
        const double x2 = x1 * std::pow(t2 / t1, 1.0 / 3);  // same zeta
        const GridSolution g1 = lift(sp, t1, t1, x1, x1, 1, 1);
        const GridSolution g2 = lift(sp, t2, t2, x2, x2, 1, 1);
        REQUIRE(!g1.flagged[0]);
        REQUIRE(!g2.flagged[0]);
        CHECK(g1.u[0] * std::pow(t1, 1.0 / 3) ==
              doctest::Approx(g2.u[0] * std::pow(t2, 1.0 / 3)).epsilon(1e-10));
    }
}

TEST_CASE("grid refinement does not move the pointwise residual") {
    const Pipeline& pl = find_pipeline("burgers/V4");
    const auto [zlo, zhi] = zeta_range(pl, pl.defaults, 0.5, 2.0, 0.5, 2.0);
    const SolvedPipeline sp = solve_pipeline(pl, pl.defaults, zlo, zhi, 1e-11);
    EquationSpec eq;
    eq.id = pl.eq;
    eq.alpha = pl.defaults.alpha;
    eq.beta = pl.defaults.beta;
    eq.a = pl.defaults.a;
    eq.b = pl.defaults.b;
    const double coarse =
        std::max(pde_residual(eq, lift(sp, 0.5, 2.0, 0.5, 2.0, 20, 20), 1.0).max_abs, 1e-13);
    const double fine =
        std::max(pde_residual(eq, lift(sp, 0.5, 2.0, 0.5, 2.0, 40, 40), 1.0).max_abs, 1e-13);
    CHECK(fine / coarse < 10.0);
    CHECK(coarse / fine < 10.0);
}

TEST_CASE("refining the ODE tolerance does not hurt the lift") {
    const Pipeline& pl = find_pipeline("burgers/V3+muV1");
    const auto [zlo, zhi] = zeta_range(pl, pl.defaults, 0.5, 2.0, 0.5, 2.0);
    EquationSpec eq;
    eq.id = pl.eq;
    eq.alpha = pl.defaults.alpha;
    eq.beta = pl.defaults.beta;
    eq.a = pl.defaults.a;
    eq.b = pl.defaults.b;
    auto max_at = [&](double tol) {
        const SolvedPipeline sp = solve_pipeline(pl, pl.defaults, zlo, zhi, tol);
        return pde_residual(eq, lift(sp, 0.5, 2.0, 0.5, 2.0, 16, 16), 1.0).max_abs;
    };
    const double coarse = max_at(1e-9);
    const double fine = max_at(1e-10);
    CHECK(fine <= 2 * coarse + 1e-12);
}

TEST_CASE("nodes outside the reduced solution span are flagged") {
    const Pipeline& pl = find_pipeline("mkdv/V3");
    // Solve over a sliver of the needed range only.
    const auto [zlo, zhi] = zeta_range(pl, pl.defaults, 0.9, 1.1, 0.9, 1.1);
    const SolvedPipeline sp = solve_pipeline(pl, pl.defaults, zlo, zhi, 1e-10);
    const GridSolution g = lift(sp, 0.5, 2.0, 0.5, 2.0, 12, 12);
    size_t flagged = 0;
    for (auto f : g.flagged) flagged += f;
    CHECK(flagged > 0);
    EquationSpec eq;
    eq.id = pl.eq;
    eq.alpha = pl.defaults.alpha;
    eq.beta = pl.defaults.beta;
    const ResidualReport r = pde_residual(eq, g, 1e-7);
    CHECK(r.flagged == flagged);
    CHECK(!r.pass);  // flagged fraction far above 1%
}

TEST_CASE("the first-integration identity holds symbolically") {
    const auto [lhs, rhs] = k1_k2_identity_sides();
    // The canonical forms coincide exactly: the identity is polynomial after
    // clearing the shared denominator.
    CHECK(equal(lhs, rhs));
}

TEST_CASE("identity check along a numeric solution") {
    CanonicalODE fp2 = find_pipeline("kdv/V4/fp2").chain.back();
    fp2.param_values = {{sym::alpha, 0.7}, {sym::gamma, 1.0}};
    const OdeSolution phi = integrate_ivp(fp2, {0.1, 0.0}, 1e-3, 1.8, 1e-11);
    const OdeSolution w = miura_forward(phi, 1.0);
    const IdentityReport r = integration_identity_check(w, 1.0, 0.7);
    CHECK(r.max_residual < 1e-6);
    CHECK(r.skipped < r.samples / 10);
}

TEST_CASE("run_suite passes every criterion") {
    SuiteConfig cfg;
    cfg.grid_n = 25;  // trimmed grid keeps the unit suite quick
    const SuiteResult r = run_suite(cfg);
    CHECK(r.criteria.size() == 8);
    for (const CriterionOutcome& c : r.criteria) CHECK_MESSAGE(c.pass, c.name);
    CHECK(r.all_pass);
    // Deliberately loosened negative control must fail the suite logic.
    CHECK(r.negative_control > 1e-3);
}
