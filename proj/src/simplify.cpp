#include "confsym/simplify.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace confsym {
namespace {

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr simplify_impl(const Expr& e);
Expr make_product(ExprList factors);
Expr make_sum(ExprList terms);

std::optional<std::int64_t> integer_value(const Expr& e) {
    if (e.is_constant() && e.value().is_integer()) return e.value().num();
    return std::nullopt;
}

// base^exponent with both sides already canonical.
Expr make_power(Expr base, Expr exponent) {
    if (exponent.is_zero()) return constant(1);
    if (exponent.is_one()) return base;
    if (base.is_constant()) {
        if (base.value().is_one()) return constant(1);
        if (base.is_zero() && exponent.is_constant() && !exponent.value().is_negative())
            return constant(0);
        if (auto n = integer_value(exponent)) {
            if (!(base.is_zero() && *n < 0)) return constant(base.value().pow(*n));
        }
    }
    // (b^p)^q -> b^(p*q) when q is an integer or b is known positive.
    if (base.kind() == Kind::Power &&
        (integer_value(exponent).has_value() || known_positive(base.child(0)))) {
        Expr inner_base = base.child(0);
        Expr merged = simplify_impl(product({base.child(1), exponent}));
        return make_power(std::move(inner_base), std::move(merged));
    }
    // (f*g)^q distributes when q is an integer or every factor is positive.
    if (base.kind() == Kind::Product) {
        bool ok = integer_value(exponent).has_value();
        if (!ok) {
            ok = true;
            for (const Expr& k : base.children()) ok = ok && known_positive(k);
        }
        if (ok) {
            ExprList factors;
            factors.reserve(base.arity());
            for (const Expr& k : base.children()) factors.push_back(make_power(k, exponent));
            return make_product(std::move(factors));
        }
    }
    return power(std::move(base), std::move(exponent));
}

// Groups product factors by base and sums exponents. Non-integer exponents are
// merged only for known-positive bases since u^(1/2)*u^(3/2) -> u^2 would
// silently extend the domain to negative u.
Expr make_product(ExprList factors) {
    Rational coeff(1);
    std::map<Expr, ExprList, ExprLess> pos_bases;   // merge everything
    std::map<Expr, Rational, ExprLess> int_bases;   // merge integer exponents
    ExprList loose;                                  // kept as-is

    ExprList queue = std::move(factors);
    while (!queue.empty()) {
        Expr f = std::move(queue.back());
        queue.pop_back();
        if (f.kind() == Kind::Product) {
            for (const Expr& k : f.children()) queue.push_back(k);
            continue;
        }
        if (f.is_constant()) {
            coeff = coeff * f.value();
            continue;
        }
        Expr base = f, exponent = constant(1);
        if (f.kind() == Kind::Power) {
            base = f.child(0);
            exponent = f.child(1);
        }
        if (known_positive(base)) {
            pos_bases[base].push_back(exponent);
        } else if (auto n = integer_value(exponent)) {
            int_bases.emplace(base, Rational(0)).first->second =
                int_bases[base] + Rational(*n);
        } else {
            loose.push_back(std::move(f));
        }
    }
    if (coeff.is_zero()) return constant(0);

    ExprList out;
    for (auto& [base, exps] : pos_bases) {
        Expr total = exps.size() == 1 ? exps[0] : simplify_impl(sum(std::move(exps)));
        Expr f = make_power(base, std::move(total));
        if (f.is_constant())
            coeff = coeff * f.value();
        else
            out.push_back(std::move(f));
    }
    for (auto& [base, n] : int_bases) {
        Expr f = make_power(base, constant(n));
        if (f.is_constant())
            coeff = coeff * f.value();
        else
            out.push_back(std::move(f));
    }
    for (Expr& f : loose) out.push_back(std::move(f));
    if (coeff.is_zero()) return constant(0);

    // Distribute over the first sum factor, if any.
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i].kind() != Kind::Sum) continue;
        Expr the_sum = out[i];
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        ExprList terms;
        terms.reserve(the_sum.arity());
        for (const Expr& summand : the_sum.children()) {
            ExprList fs = out;
            fs.push_back(summand);
            fs.push_back(constant(coeff));
            terms.push_back(make_product(std::move(fs)));
        }
        return make_sum(std::move(terms));
    }

    std::sort(out.begin(), out.end(), ExprLess{});
    if (out.empty()) return constant(coeff);
    if (!coeff.is_one()) out.insert(out.begin(), constant(coeff));
    if (out.size() == 1) return out[0];
    return product(std::move(out));
}

// Splits a canonical term into (rational coefficient, key).
std::pair<Rational, Expr> coefficient_split(const Expr& term) {
    if (term.is_constant()) return {term.value(), constant(1)};
    if (term.kind() == Kind::Product && term.child(0).is_constant()) {
        ExprList rest(term.children().begin() + 1, term.children().end());
        return {term.child(0).value(), rest.size() == 1 ? rest[0] : product(std::move(rest))};
    }
    return {Rational(1), term};
}

Expr make_sum(ExprList terms) {
    Rational acc(0);
    std::map<Expr, Rational, ExprLess> by_key;

    ExprList queue = std::move(terms);
    while (!queue.empty()) {
        Expr t = std::move(queue.back());
        queue.pop_back();
        if (t.kind() == Kind::Sum) {
            for (const Expr& k : t.children()) queue.push_back(k);
            continue;
        }
        if (t.is_zero()) continue;
        if (t.is_constant()) {
            acc = acc + t.value();
            continue;
        }
        auto [c, key] = coefficient_split(t);
        by_key.emplace(key, Rational(0)).first->second = by_key[key] + c;
    }

    ExprList out;
    if (!acc.is_zero()) out.push_back(constant(acc));
    for (auto& [key, c] : by_key) {
        if (c.is_zero()) continue;
        if (c.is_one()) {
            out.push_back(key);
        } else if (key.kind() == Kind::Product) {
            ExprList fs;
            fs.reserve(key.arity() + 1);
            fs.push_back(constant(c));
            for (const Expr& k : key.children()) fs.push_back(k);
            out.push_back(product(std::move(fs)));
        } else {
            out.push_back(product({constant(c), key}));
        }
    }
    if (out.empty()) return constant(0);
    if (out.size() == 1) return out[0];
    std::sort(out.begin(), out.end(), ExprLess{});
    return sum(std::move(out));
}

Expr simplify_impl(const Expr& e) {
    switch (e.kind()) {
        case Kind::Constant:
        case Kind::Variable:
        case Kind::Parameter:
            return e;
        case Kind::Negate:
            return make_product({constant(-1), simplify_impl(e.child(0))});
        case Kind::Quotient:
            return make_product({simplify_impl(e.child(0)),
                                 make_power(simplify_impl(e.child(1)), constant(-1))});
        case Kind::Sum: {
            ExprList kids;
            kids.reserve(e.arity());
            for (const Expr& k : e.children()) kids.push_back(simplify_impl(k));
            return make_sum(std::move(kids));
        }
        case Kind::Product: {
            ExprList kids;
            kids.reserve(e.arity());
            for (const Expr& k : e.children()) kids.push_back(simplify_impl(k));
            return make_product(std::move(kids));
        }
        case Kind::Power:
            return make_power(simplify_impl(e.child(0)), simplify_impl(e.child(1)));
        case Kind::Apply: {
            Expr arg = simplify_impl(e.child(0));
            if (arg.is_constant()) {
                const Rational& r = arg.value();
                if (r.is_zero()) {
                    if (e.func() == Func::Sin) return constant(0);
                    if (e.func() == Func::Cos || e.func() == Func::Exp) return constant(1);
                }
                if (r.is_one() && e.func() == Func::Log) return constant(0);
            }
            return apply(e.func(), std::move(arg));
        }
    }
    return e;
}

}  // namespace

Expr simplify(const Expr& e) { return simplify_impl(e); }

}  // namespace confsym
