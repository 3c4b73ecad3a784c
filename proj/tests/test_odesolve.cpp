#include <doctest.h>

#include <cmath>

#include "confsym/conformable.hpp"
#include "confsym/odesolve.hpp"
#include "confsym/parse.hpp"
#include "confsym/reductions.hpp"
#include "confsym/simplify.hpp"

using namespace confsym;

namespace {
CanonicalODE harmonic() {
    CanonicalODE ode;
    ode.kind = OdeKind::ClassicalSecondOrder;
    ode.label = "harmonic";
    ode.unknown = sym::Phi;
    ode.order = 2;
    ode.fractional = false;
    ode.lhs = simplify(parse("Phi_2 + Phi"));
    return ode;
}

CanonicalODE fp2_ode(double alpha, double gamma) {
    CanonicalODE ode = find_pipeline("kdv/V4/fp2").chain.back();
    ode.param_values[sym::alpha] = alpha;
    ode.param_values[sym::gamma] = gamma;
    return ode;
}
}  // namespace

TEST_CASE("harmonic oscillator to 1e-9 over [0, 10]") {
    const OdeSolution sol = integrate_ivp(harmonic(), {1.0, 0.0}, 0.0, 10.0, 1e-12);
    CHECK(!sol.blew_up);
    for (int i = 0; i <= 200; ++i) {
        const double s = 10.0 * i / 200.0;
        const auto d = sol.derivs(s);
        CHECK(std::abs(d[0] - std::cos(s)) < 1e-9);
        CHECK(std::abs(d[1] + std::sin(s)) < 1e-9);
    }
}

TEST_CASE("zero solution of the second Painleve equation at gamma = 0") {
    const OdeSolution sol = integrate_ivp(fp2_ode(0.7, 0.0), {0.0, 0.0}, 1e-3, 5.0, 1e-11);
    CHECK(!sol.blew_up);
    for (double s : {0.01, 1.0, 2.5, 4.9}) CHECK(std::abs(sol.derivs(s)[0]) < 1e-12);
    CHECK(residual_of_ode(sol.ode, sol, 50) < 1e-12);
}

TEST_CASE("first Painleve equation blows up and is truncated") {
    const CanonicalODE pi_ode = [] {
        CanonicalODE ode = find_pipeline("kdv/V3+aV1").chain.back();
        return ode;
    }();
    const OdeSolution sol = integrate_ivp(pi_ode, {0.0, 0.0}, 0.0, 30.0, 1e-10);
    CHECK(sol.blew_up);
    CHECK(sol.hi < 30.0);
    // Residual along the computed span stays at integrator accuracy away from
    // the pole.
    const OdeSolution clipped = integrate_ivp(pi_ode, {0.0, 0.0}, 0.0, sol.hi * 0.7, 1e-12);
    CHECK(residual_of_ode(pi_ode, clipped, 40) < 1e-8);
}

TEST_CASE("residual_of_ode flags mismatched pairs") {
    const OdeSolution sol = integrate_ivp(harmonic(), {1.0, 0.0}, 0.0, 6.0, 1e-10);
    CHECK(residual_of_ode(harmonic(), sol, 40) < 1e-8);
    CanonicalODE wrong = harmonic();
    wrong.lhs = simplify(parse("Phi_2 + 2*Phi"));
    CHECK(residual_of_ode(wrong, sol, 40) > 1e-2);
}

TEST_CASE("tolerance scaling on the second Painleve test problem") {
    const CanonicalODE ode = fp2_ode(0.7, 1.0);
    auto res_at = [&](double tol) {
        const OdeSolution sol = integrate_ivp(ode, {0.1, 0.0}, 1e-3, 2.0, tol);
        return residual_of_ode(ode, sol, 60);
    };
    const double coarse = res_at(1e-6);
    const double half = res_at(5e-7);
    const double fine = res_at(1e-8);
    CHECK(half <= 4 * coarse);
    CHECK(fine < coarse);
}

TEST_CASE("s-substitution is the exact change of variable") {
    CanonicalODE ode = fp2_ode(0.5, 1.0);
    const SSubstitution sub = s_substitute(ode);
    CHECK(!sub.classical.fractional);
    CHECK(equal(sub.classical.lhs, ode.lhs));
    CHECK(sub.to_s(sub.to_v(1.7)) == doctest::Approx(1.7).epsilon(1e-12));

    // Conformable derivative in omega equals the classical derivative in s.
    for (double alpha : {0.5, 0.7}) {
        const RealFn f = [](double w) { return std::sin(w) + w * w / 5; };
        for (double omega : {0.6, 1.1, 2.3}) {
            const double lhs = conf_diff_numeric(f, omega, alpha);
            const double s0 = std::pow(omega, alpha) / alpha;
            const double h = 1e-6;
            auto g = [&](double s) { return f(std::pow(alpha * s, 1 / alpha)); };
            const double rhs = (g(s0 + h) - g(s0 - h)) / (2 * h);
            CHECK(std::abs(lhs - rhs) < 1e-7 * (1 + std::abs(lhs)));
        }
    }
}

TEST_CASE("alpha = 1 keeps the variable unchanged") {
    CanonicalODE ode = fp2_ode(1.0, 0.5);
    const SSubstitution sub = s_substitute(ode);
    CHECK(sub.alpha == 1.0);
    CHECK(sub.to_s(1.3) == doctest::Approx(1.3));
}

TEST_CASE("dense output consistency") {
    const OdeSolution sol = integrate_ivp(harmonic(), {1.0, 0.0}, 0.0, 6.0, 1e-12);
    // Differentiated interpolant vs interpolated derivative component.
    for (int i = 1; i < 40; ++i) {
        const double s = 6.0 * i / 40.0;
        std::array<double, 2> y{}, yd{};
        sol.dense->state(s, y.data());
        sol.dense->state_derivative(s, yd.data());
        CHECK(std::abs(yd[0] - y[1]) < 1e-9);
    }
}

TEST_CASE("rhs extraction demands order-many initial values") {
    CHECK_THROWS_AS(integrate_ivp(harmonic(), {1.0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_ivp(harmonic(), {1.0, 0.0}, 1.0, 1.0), std::invalid_argument);
}
