#include "confsym/expr.hpp"

#include <stdexcept>

namespace confsym {

const std::shared_ptr<const ExprNode>& Expr::zero_node() {
    static const std::shared_ptr<const ExprNode> z =
        std::make_shared<const ExprNode>(ExprNode{Kind::Constant, Rational(0), -1, Func::Sin, {}});
    return z;
}

Expr constant(Rational r) {
    return Expr::make(ExprNode{Kind::Constant, std::move(r), -1, Func::Sin, {}});
}

Expr symbol(int id) {
    if (id < 0 || id >= sym::count) throw std::invalid_argument("unknown symbol id");
    const Kind k = symbol_is_parameter(id) ? Kind::Parameter : Kind::Variable;
    return Expr::make(ExprNode{k, Rational(0), id, Func::Sin, {}});
}

Expr sum(ExprList kids) {
    if (kids.size() == 1) return kids[0];
    return Expr::make(ExprNode{Kind::Sum, Rational(0), -1, Func::Sin, std::move(kids)});
}

Expr product(ExprList kids) {
    if (kids.size() == 1) return kids[0];
    return Expr::make(ExprNode{Kind::Product, Rational(0), -1, Func::Sin, std::move(kids)});
}

Expr quotient(Expr num, Expr den) {
    return Expr::make(
        ExprNode{Kind::Quotient, Rational(0), -1, Func::Sin, {std::move(num), std::move(den)}});
}

Expr power(Expr base, Expr exponent) {
    return Expr::make(
        ExprNode{Kind::Power, Rational(0), -1, Func::Sin, {std::move(base), std::move(exponent)}});
}

Expr negate(Expr e) {
    return Expr::make(ExprNode{Kind::Negate, Rational(0), -1, Func::Sin, {std::move(e)}});
}

Expr apply(Func f, Expr arg) {
    return Expr::make(ExprNode{Kind::Apply, Rational(0), -1, f, {std::move(arg)}});
}

int compare(const Expr& a, const Expr& b) {
    if (a.raw() == b.raw()) return 0;
    if (a.kind() != b.kind())
        return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    switch (a.kind()) {
        case Kind::Constant: {
            if (a.value() == b.value()) return 0;
            return a.value() < b.value() ? -1 : 1;
        }
        case Kind::Variable:
        case Kind::Parameter:
            if (a.symbol() == b.symbol()) return 0;
            return a.symbol() < b.symbol() ? -1 : 1;
        case Kind::Apply:
            if (a.func() != b.func())
                return static_cast<int>(a.func()) < static_cast<int>(b.func()) ? -1 : 1;
            break;
        default:
            break;
    }
    const size_t n = std::min(a.arity(), b.arity());
    for (size_t i = 0; i < n; ++i) {
        const int c = compare(a.child(i), b.child(i));
        if (c != 0) return c;
    }
    if (a.arity() == b.arity()) return 0;
    return a.arity() < b.arity() ? -1 : 1;
}

bool known_positive(const Expr& e) {
    switch (e.kind()) {
        case Kind::Constant:
            return !e.value().is_negative() && !e.value().is_zero();
        case Kind::Variable:
        case Kind::Parameter:
            return symbol_is_positive(e.symbol());
        case Kind::Sum:
        case Kind::Product: {
            for (const Expr& k : e.children())
                if (!known_positive(k)) return false;
            return true;
        }
        case Kind::Power:
            return known_positive(e.child(0));
        case Kind::Quotient:
            return known_positive(e.child(0)) && known_positive(e.child(1));
        case Kind::Apply:
            return e.func() == Func::Exp;
        case Kind::Negate:
            return false;
    }
    return false;
}

void collect_symbols(const Expr& e, std::array<bool, sym::count>& present) {
    switch (e.kind()) {
        case Kind::Variable:
        case Kind::Parameter:
            present[static_cast<size_t>(e.symbol())] = true;
            return;
        default:
            for (const Expr& k : e.children()) collect_symbols(k, present);
    }
}

bool contains_symbol(const Expr& e, int id) {
    if (e.kind() == Kind::Variable || e.kind() == Kind::Parameter) return e.symbol() == id;
    for (const Expr& k : e.children())
        if (contains_symbol(k, id)) return true;
    return false;
}

}  // namespace confsym
