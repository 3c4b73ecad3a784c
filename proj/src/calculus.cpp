#include "confsym/calculus.hpp"

#include <cmath>

#include "confsym/printer.hpp"
#include "confsym/simplify.hpp"

namespace confsym {
namespace {

[[noreturn]] void eval_fail(const std::string& reason, const Expr& at) {
    std::string ctx = to_string(at);
    if (ctx.size() > 120) ctx = ctx.substr(0, 117) + "...";
    throw EvalError(reason + " in '" + ctx + "'");
}

bool is_integer_valued(double v) { return std::isfinite(v) && v == std::rint(v); }

}  // namespace

Expr derive(const Expr& e, int var, const DerivRules& rules) {
    switch (e.kind()) {
        case Kind::Constant:
            return constant(0);
        case Kind::Variable:
        case Kind::Parameter: {
            if (e.symbol() == var) return constant(1);
            auto it = rules.find(e.symbol());
            if (it != rules.end()) return it->second;
            return constant(0);
        }
        case Kind::Sum: {
            ExprList kids;
            kids.reserve(e.arity());
            for (const Expr& k : e.children()) kids.push_back(derive(k, var, rules));
            return sum(std::move(kids));
        }
        case Kind::Product: {
            ExprList terms;
            terms.reserve(e.arity());
            for (size_t i = 0; i < e.arity(); ++i) {
                ExprList fs = e.children();
                fs[i] = derive(fs[i], var, rules);
                terms.push_back(product(std::move(fs)));
            }
            return sum(std::move(terms));
        }
        case Kind::Quotient: {
            const Expr& f = e.child(0);
            const Expr& g = e.child(1);
            return quotient(derive(f, var, rules) * g - f * derive(g, var, rules),
                            power(g, constant(2)));
        }
        case Kind::Negate:
            return negate(derive(e.child(0), var, rules));
        case Kind::Power: {
            const Expr& f = e.child(0);
            const Expr& g = e.child(1);
            Expr dg = simplify(derive(g, var, rules));
            Expr df = derive(f, var, rules);
            if (dg.is_zero()) {
                // power rule: g * f^(g-1) * f'
                return g * power(f, g - constant(1)) * df;
            }
            // general case: f^g * (g' log f + g f'/f)
            return e * (dg * apply(Func::Log, f) + quotient(g * df, f));
        }
        case Kind::Apply: {
            const Expr& arg = e.child(0);
            Expr darg = derive(arg, var, rules);
            switch (e.func()) {
                case Func::Sin: return apply(Func::Cos, arg) * darg;
                case Func::Cos: return negate(apply(Func::Sin, arg)) * darg;
                case Func::Exp: return e * darg;
                case Func::Log: return quotient(darg, arg);
            }
            break;
        }
    }
    return constant(0);
}

Expr diff(const Expr& e, int var) { return simplify(derive(e, var, {})); }

namespace {
Expr substitute_raw(const Expr& e, const std::map<int, Expr>& bindings) {
    switch (e.kind()) {
        case Kind::Variable:
        case Kind::Parameter: {
            auto it = bindings.find(e.symbol());
            return it != bindings.end() ? it->second : e;
        }
        case Kind::Constant:
            return e;
        default: {
            ExprNode node{e.kind(), e.value(), e.symbol(), e.func(), {}};
            node.kids.reserve(e.arity());
            for (const Expr& k : e.children()) node.kids.push_back(substitute_raw(k, bindings));
            return Expr::make(std::move(node));
        }
    }
}
}  // namespace

Expr substitute(const Expr& e, const std::map<int, Expr>& bindings) {
    return simplify(substitute_raw(e, bindings));
}

double eval(const Expr& e, const EvalEnv& env) {
    switch (e.kind()) {
        case Kind::Constant:
            return e.value().to_double();
        case Kind::Variable:
        case Kind::Parameter:
            if (!env.is_bound(e.symbol()))
                eval_fail("unbound symbol '" + std::string(symbol_name(e.symbol())) + "'", e);
            return env.get(e.symbol());
        case Kind::Sum: {
            double acc = 0;
            for (const Expr& k : e.children()) acc += eval(k, env);
            return acc;
        }
        case Kind::Product: {
            double acc = 1;
            for (const Expr& k : e.children()) acc *= eval(k, env);
            return acc;
        }
        case Kind::Quotient: {
            const double den = eval(e.child(1), env);
            if (den == 0.0) eval_fail("division by zero", e);
            return eval(e.child(0), env) / den;
        }
        case Kind::Negate:
            return -eval(e.child(0), env);
        case Kind::Power: {
            const double b = eval(e.child(0), env);
            const double ex = eval(e.child(1), env);
            if (b == 0.0 && ex < 0) eval_fail("zero base with negative exponent", e);
            if (b < 0.0 && !is_integer_valued(ex)) eval_fail("negative base under non-integer power", e);
            return std::pow(b, ex);
        }
        case Kind::Apply: {
            const double v = eval(e.child(0), env);
            switch (e.func()) {
                case Func::Sin: return std::sin(v);
                case Func::Cos: return std::cos(v);
                case Func::Exp: return std::exp(v);
                case Func::Log:
                    if (v <= 0.0) eval_fail("log of non-positive value", e);
                    return std::log(v);
            }
            break;
        }
    }
    eval_fail("unreachable node", e);
}

EvalEnv random_env(Rng& rng) {
    EvalEnv env;
    for (int id = 0; id < sym::count; ++id) {
        double lo = -2, hi = 2;
        if (id == sym::t || id == sym::x || id == sym::zeta || id == sym::omega || id == sym::s) {
            lo = 0.2;
            hi = 3;
        } else if (id == sym::alpha || id == sym::beta) {
            lo = 0.3;
            hi = 1;
        } else if (id == sym::a || id == sym::b) {
            lo = 0.5;
            hi = 2.5;
        }
        env.bind(id, rng.uniform(lo, hi));
    }
    return env;
}

namespace {
double sampled_max(const Expr& e, std::uint64_t seed, int samples) {
    Rng rng(seed);
    double worst = 0;
    int done = 0, attempts = 0;
    while (done < samples && attempts < samples * 20) {
        ++attempts;
        EvalEnv env = random_env(rng);
        try {
            const double v = eval(e, env);
            if (!std::isfinite(v)) continue;
            worst = std::max(worst, std::abs(v));
            ++done;
        } catch (const EvalError&) {
            continue;  // domain edge; draw another point
        }
    }
    if (done == 0) throw EvalError("zero test could not find a valid sample point");
    return worst;
}
}  // namespace

double max_abs_on_samples(const Expr& e, std::uint64_t seed, int samples) {
    return sampled_max(simplify(e), seed, samples);
}

bool zero_test(const Expr& e, std::uint64_t seed, int samples) {
    Expr s = simplify(e);
    if (s.is_zero()) return true;
    return sampled_max(s, seed, samples) < 1e-9;
}

}  // namespace confsym
