#include <doctest.h>

#include <cmath>

#include "confsym/calculus.hpp"
#include "confsym/conformable.hpp"
#include "confsym/parse.hpp"
#include "confsym/simplify.hpp"

using namespace confsym;

namespace {
std::vector<double> test_points() {
    std::vector<double> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(0.05 + 1.95 * i / 19.0);
    return pts;
}
}  // namespace

TEST_CASE("symbolic conformable derivative") {
    const Expr alpha = symbol(sym::alpha);
    CHECK(equal(conf_diff_symbolic(parse("t^p"), sym::t, alpha),
                simplify(parse("p*t^(p-alpha)"))));
    CHECK(conf_diff_symbolic(parse("17/3"), sym::t, alpha).is_zero());
    CHECK(equal(conf_diff_symbolic(parse("sqrt(t)"), sym::t, constant(Rational(1, 2))),
                constant(Rational(1, 2))));
}

TEST_CASE("numeric conformable derivative") {
    CHECK(conf_diff_numeric([](double v) { return std::sqrt(v); }, 2.0, 0.5) ==
          doctest::Approx(0.5).epsilon(1e-8));
    CHECK(conf_diff_numeric([](double v) { return std::sin(v); }, 1.0, 1.0) ==
          doctest::Approx(std::cos(1.0)).epsilon(1e-8));
    // Oracle from the derivative form: t^(1-alpha) f'(t).
    CHECK(conf_diff_numeric([](double v) { return std::exp(v); }, 2.0, 0.7) ==
          doctest::Approx(std::pow(2.0, 0.3) * std::exp(2.0)).epsilon(1e-8));
    CHECK_THROWS_AS(conf_diff_numeric([](double v) { return v; }, -1.0, 0.5),
                    std::domain_error);
}

TEST_CASE("numeric derivative tracks the derivative form on the corpus") {
    for (double alpha : {0.3, 0.5, 0.9, 1.0}) {
        for (const CalcFunction& fn : calculus_corpus()) {
            for (double t : test_points()) {
                const double got = conf_diff_numeric(fn.f, t, alpha);
                const double want = std::pow(t, 1.0 - alpha) * fn.df(t);
                CHECK_MESSAGE(std::abs(got - want) <= 1e-6 * (1 + std::abs(want)),
                              fn.name, " alpha=", alpha, " t=", t);
            }
        }
    }
}

TEST_CASE("symbolic and numeric derivatives agree on the expression corpus") {
    const std::vector<const char*> corpus = {"t^2", "sqrt(t)", "t^(5/2)", "1/(1 + t^2)",
                                             "sin(t)", "exp(t)*t"};
    for (double alpha : {0.4, 0.8, 1.0}) {
        const Expr order = constant(Rational(static_cast<int64_t>(alpha * 10), 10));
        for (const char* text : corpus) {
            const Expr e = parse(text);
            const Expr sym_d = conf_diff_symbolic(e, sym::t, order);
            const RealFn f = [&e](double v) {
                EvalEnv env;
                env.bind(sym::t, v);
                return eval(e, env);
            };
            for (double t : {0.3, 1.0, 2.1}) {
                EvalEnv env;
                env.bind(sym::t, t);
                const double want = eval(sym_d, env);
                const double got = conf_diff_numeric(f, t, alpha);
                CHECK_MESSAGE(std::abs(got - want) <= 1e-6 * (1 + std::abs(want)), text,
                              " alpha=", alpha, " t=", t);
            }
        }
    }
}

TEST_CASE("integral operator closed forms") {
    // f = tau^p integrates to t^(p+alpha)/(p+alpha).
    const double p = 2.0, alpha = 0.6, t = 1.5;
    CHECK(conf_integrate_numeric([p](double v) { return std::pow(v, p); }, t, alpha) ==
          doctest::Approx(std::pow(t, p + alpha) / (p + alpha)).epsilon(1e-10));
    // alpha = 1 reduces to the ordinary integral.
    CHECK(conf_integrate_numeric([](double v) { return std::sin(v); }, 2.0, 1.0) ==
          doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-10));
    // I^alpha(D^alpha cos)(t) = cos(t) - 1.
    const double a2 = 0.55, t2 = 1.2;
    const RealFn dcos = [a2](double v) {
        return conf_diff_numeric([](double w) { return std::cos(w); }, v, a2);
    };
    ConfCalcConfig loose;
    loose.quad_abs_tol = 1e-9;
    CHECK(conf_integrate_numeric(dcos, t2, a2, loose) ==
          doctest::Approx(std::cos(t2) - 1.0).epsilon(1e-7));
}

TEST_CASE("non-integrable input reports achieved error") {
    CHECK_THROWS_AS(conf_integrate_numeric([](double v) { return 1.0 / v; }, 1.0, 0.5),
                    QuadratureError);
}

TEST_CASE("rule harness") {
    const auto reports = check_rules(0.4, calculus_corpus(), {0.5, 1.0, 2.0});
    REQUIRE(reports.size() == 10);
    for (const RuleReport& r : reports) {
        CHECK_MESSAGE(r.pass, r.rule, " residual=", r.max_residual);
        CHECK(r.points_checked > 0);
    }
    // The quotient rule with g = 1 degenerates to the identity.
    const std::vector<CalcFunction> pair = {
        calculus_corpus()[0],
        {"one", [](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, true},
    };
    const auto degenerate = check_rules(0.7, pair, {0.5, 1.0, 2.0});
    for (const RuleReport& r : degenerate)
        if (r.rule == "quotient_rule") CHECK(r.max_residual < 1e-8);
}

TEST_CASE("chain rule example from the square composite") {
    // f = square, g = 1 + t^2: both chain rules against the derivative form
    // oracle for the composite.
    const double alpha = 0.6;
    const RealFn g = [](double v) { return 1.0 + v * v; };
    const RealFn comp = [&](double v) { return g(v) * g(v); };
    for (double t : {0.5, 1.0, 2.0}) {
        const double oracle = std::pow(t, 1.0 - alpha) * 2.0 * g(t) * 2.0 * t;
        const double plain = 2.0 * g(t) * conf_diff_numeric(g, t, alpha);
        const double scaled = conf_diff_numeric([](double w) { return w * w; }, g(t), alpha) *
                              conf_diff_numeric(g, t, alpha) * std::pow(g(t), alpha - 1.0);
        CHECK(conf_diff_numeric(comp, t, alpha) == doctest::Approx(oracle).epsilon(1e-7));
        CHECK(plain == doctest::Approx(oracle).epsilon(1e-7));
        CHECK(scaled == doctest::Approx(oracle).epsilon(1e-7));
    }
}
