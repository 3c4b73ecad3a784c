#include <doctest.h>

#include <cmath>

#include "confsym/calculus.hpp"
#include "confsym/parse.hpp"
#include "confsym/printer.hpp"
#include "confsym/simplify.hpp"
#include "corpus.hpp"

using namespace confsym;

TEST_CASE("parse produces the expected node shapes") {
    Expr e = parse("t^(1-beta)");
    CHECK(e.kind() == Kind::Power);
    CHECK(e.child(0).is_symbol(sym::t));

    Expr f = parse("6*u*u_x");
    CHECK(f.kind() == Kind::Product);
    CHECK(f.arity() == 3);

    CHECK(to_string(parse("u_xxx + 6*u*u_x")) == "u_xxx + 6*u*u_x");
}

TEST_CASE("parse reports position and unknown identifiers") {
    CHECK_THROWS_AS(parse("t +* x"), ParseError);
    CHECK_THROWS_AS(parse("qq + 1"), ParseError);
    CHECK_THROWS_AS(parse("tan(t)"), ParseError);
    try {
        parse("t + (x");
    } catch (const ParseError& err) {
        CHECK(err.position == 6);
    }
}

TEST_CASE("print-parse round trip is stable on the corpus") {
    for (const char* text : expression_corpus()) {
        const std::string once = to_string(parse(text));
        const std::string twice = to_string(parse(once));
        CHECK_MESSAGE(once == twice, text);
    }
}

TEST_CASE("simplify identities") {
    CHECK(equal(simplify(parse("u + 0*x")), parse("u")));
    CHECK(equal(simplify(parse("t^(1-beta)*t^beta")), parse("t")));
    CHECK(simplify(parse("(2*W - omega^alpha/alpha) - 2*W + omega^alpha/alpha")).is_zero());
    CHECK(simplify(parse("x/x")).is_one());
    CHECK(equal(simplify(parse("2*u + 3*u")), simplify(parse("5*u"))));
}

TEST_CASE("simplify is idempotent and value preserving on the corpus") {
    Rng rng(kDefaultSeed);
    for (const char* text : expression_corpus()) {
        const Expr e = parse(text);
        const Expr s = simplify(e);
        CHECK_MESSAGE(equal(s, simplify(s)), "idempotence: ", text);

        int checked = 0;
        Rng local(rng.next_u64());
        for (int i = 0; i < 300 && checked < 100; ++i) {
            EvalEnv env = random_env(local);
            double v0, v1;
            try {
                v0 = eval(e, env);
                v1 = eval(s, env);
            } catch (const EvalError&) {
                continue;
            }
            ++checked;
            CHECK_MESSAGE(std::abs(v0 - v1) <= 1e-12 * (1 + std::abs(v0)), text);
        }
        CHECK(checked == 100);
    }
}

TEST_CASE("diff basics") {
    CHECK(equal(diff(parse("t^p"), sym::t), simplify(parse("p*t^(p-1)"))));
    CHECK(equal(diff(parse("6*u*u_x"), sym::u), simplify(parse("6*u_x"))));
    CHECK(equal(diff(parse("sin(x)"), sym::x), simplify(parse("cos(x)"))));
    CHECK(diff(parse("u_x"), sym::u).is_zero());  // jet symbols are independent
}

TEST_CASE("diff matches central finite differences") {
    // d/dx of x^(1-alpha) * eta(t,x,u) with the Burgers family eta.
    const Expr e = parse("x^(1-alpha)*((-c1*t^beta/beta + c2)*u + c1*x^alpha/(a*alpha) + c3)");
    const Expr d = diff(e, sym::x);
    Rng rng(kDefaultSeed);
    for (int i = 0; i < 20; ++i) {
        EvalEnv env = random_env(rng);
        const double x0 = env.get(sym::x);
        const double h = 1e-5 * std::max(1.0, std::abs(x0));
        EvalEnv hi = env, lo = env;
        hi.bind(sym::x, x0 + h);
        lo.bind(sym::x, x0 - h);
        const double fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
        const double exact = eval(d, env);
        CHECK(std::abs(fd - exact) <= 1e-7 * (1 + std::abs(exact)));
    }
}

TEST_CASE("diff is linear") {
    const Expr e1 = parse("x^(2-2*alpha)*u_xx + (1-alpha)*x^(1-2*alpha)*u_x");
    const Expr e2 = parse("6*t^beta*x^(1-alpha)/beta");
    const Expr a_ = symbol(sym::a);
    const Expr lhs = diff(simplify(a_ * e1 + e2), sym::x);
    const Expr rhs = simplify(a_ * diff(e1, sym::x) + diff(e2, sym::x));
    CHECK(equal(lhs, rhs));
}

TEST_CASE("substitute") {
    CHECK(equal(substitute(parse("u_x + u"), {{sym::u, constant(0)}}), parse("u_x")));

    // zeta -> x t^(-beta/(3 alpha)) reproduces the similarity variable.
    const Expr z = substitute(symbol(sym::zeta), {{sym::zeta, parse("x*t^(-beta/(3*alpha))")}});
    CHECK(equal(z, simplify(parse("x*t^(-beta/(3*alpha))"))));

    // Eliminating u_xxx with the solved equivalent form leaves no u_xxx.
    const Expr ee1 = parse(
        "t^(1-beta)*u_t + 6*x^(1-alpha)*u*u_x + (1-alpha)*(1-2*alpha)*x^(1-3*alpha)*u_x"
        " + 3*(1-alpha)*x^(2-3*alpha)*u_xx + x^(3-3*alpha)*u_xxx");
    const Expr solved = simplify(parse(
        "-x^(3*alpha-3)*(t^(1-beta)*u_t + 6*x^(1-alpha)*u*u_x"
        " + (1-alpha)*(1-2*alpha)*x^(1-3*alpha)*u_x + 3*(1-alpha)*x^(2-3*alpha)*u_xx)"));
    const Expr eliminated = substitute(ee1, {{sym::u_xxx, solved}});
    CHECK(!contains_symbol(eliminated, sym::u_xxx));
    CHECK(zero_test(eliminated));
}

TEST_CASE("eval") {
    EvalEnv env;
    env.bind(sym::t, 1.0);
    CHECK(eval(parse("2*t^1.7"), env) == doctest::Approx(2.0).epsilon(1e-14));

    env.bind(sym::p, 2.0).bind(sym::alpha, 0.3);
    CHECK(eval(parse("p*t^(p-alpha)"), env) == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_WITH_AS(eval(parse("u_x"), env), doctest::Contains("unbound symbol"), EvalError);

    env.bind(sym::x, -1.0);
    CHECK_THROWS_WITH_AS(eval(parse("x^(1/2)"), env), doctest::Contains("x^(1/2)"), EvalError);
    env.bind(sym::u, 0.0);
    CHECK_THROWS_AS(eval(parse("1/u"), env), EvalError);
}

TEST_CASE("division by symbolic zero stays unevaluated until eval") {
    const Expr e = simplify(parse("x/0"));
    CHECK(contains_symbol(e, sym::x));  // not folded away
    EvalEnv env;
    env.bind(sym::x, 1.0);
    CHECK_THROWS_AS(eval(e, env), EvalError);
    CHECK_THROWS_AS(eval(parse("x/(u - u)"), env), EvalError);
}

TEST_CASE("unary minus and exponent binding") {
    EvalEnv env;
    env.bind(sym::x, 3.0);
    CHECK(eval(parse("-x^2"), env) == doctest::Approx(-9.0));
    CHECK(eval(parse("x^-2"), env) == doctest::Approx(1.0 / 9.0));
    CHECK(equal(simplify(parse("--x")), parse("x")));
}

TEST_CASE("zero test soundness") {
    // A disguised zero that cancels only after canonicalization.
    const Expr z = parse("t^(1-beta)*t^beta - t + (x + u)^2*0");
    CHECK(simplify(z).is_zero());
    Rng rng(kDefaultSeed);
    for (int i = 0; i < 100; ++i) {
        EvalEnv env = random_env(rng);
        CHECK(eval(z, env) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(zero_test(z));
    CHECK(!zero_test(parse("u + t")));
    CHECK(!zero_test(parse("1/1000000*u")));  // small but not zero under the 1e-9 gate
}
