#include "confsym/printer.hpp"

namespace confsym {
namespace {

// Precedence levels: sum < product < unary minus < power < atom.
enum Prec { kSum = 0, kProd = 1, kNeg = 2, kPow = 3, kAtom = 4 };

int prec_of(const Expr& e) {
    switch (e.kind()) {
        case Kind::Constant:
            if (e.value().is_negative()) return kNeg;
            return e.value().is_integer() ? kAtom : kProd;
        case Kind::Variable:
        case Kind::Parameter:
        case Kind::Apply:
            return kAtom;
        case Kind::Sum: return kSum;
        case Kind::Product:
        case Kind::Quotient:
            return kProd;
        case Kind::Negate: return kNeg;
        case Kind::Power: return kPow;
    }
    return kAtom;
}

void emit(const Expr& e, std::string& out);

void emit_wrapped(const Expr& e, int parent_prec, std::string& out) {
    if (prec_of(e) < parent_prec) {
        out += "(";
        emit(e, out);
        out += ")";
    } else {
        emit(e, out);
    }
}

bool starts_negative(const Expr& e) {
    switch (e.kind()) {
        case Kind::Negate: return true;
        case Kind::Constant: return e.value().is_negative();
        case Kind::Product:
        case Kind::Quotient:
            return e.arity() > 0 && starts_negative(e.child(0));
        default: return false;
    }
}

// Strips one leading minus sign (for "a - b" style sums).
Expr without_sign(const Expr& e) {
    switch (e.kind()) {
        case Kind::Negate: return e.child(0);
        case Kind::Constant: return constant(-e.value());
        case Kind::Product: {
            ExprList kids = e.children();
            kids[0] = without_sign(kids[0]);
            if (kids[0].is_one() && kids.size() > 1) kids.erase(kids.begin());
            return product(std::move(kids));
        }
        case Kind::Quotient:
            return quotient(without_sign(e.child(0)), e.child(1));
        default: return e;
    }
}

void emit(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case Kind::Constant:
            out += e.value().str();
            return;
        case Kind::Variable:
        case Kind::Parameter:
            out += symbol_name(e.symbol());
            return;
        case Kind::Sum: {
            for (size_t i = 0; i < e.arity(); ++i) {
                const Expr& k = e.child(i);
                if (i == 0) {
                    emit_wrapped(k, kSum, out);
                } else if (starts_negative(k)) {
                    out += " - ";
                    emit_wrapped(without_sign(k), kProd, out);
                } else {
                    out += " + ";
                    emit_wrapped(k, kProd, out);
                }
            }
            return;
        }
        case Kind::Product: {
            size_t start = 0;
            if (e.arity() > 0 && e.child(0).is_constant() && e.child(0).value().is_negative()) {
                out += "-";
                const Rational c = -e.child(0).value();
                start = 1;
                if (!c.is_one() || e.arity() == 1) {
                    emit_wrapped(constant(c), kProd, out);
                    if (e.arity() > 1) out += "*";
                }
            }
            for (size_t i = start; i < e.arity(); ++i) {
                if (i > start) out += "*";
                emit_wrapped(e.child(i), kProd, out);
            }
            return;
        }
        case Kind::Quotient: {
            emit_wrapped(e.child(0), kProd, out);
            out += "/";
            emit_wrapped(e.child(1), kPow, out);
            return;
        }
        case Kind::Negate: {
            out += "-";
            emit_wrapped(e.child(0), kNeg, out);
            return;
        }
        case Kind::Power: {
            emit_wrapped(e.child(0), kAtom, out);
            out += "^";
            const Expr& ex = e.child(1);
            const bool bare = (ex.kind() == Kind::Variable || ex.kind() == Kind::Parameter ||
                               (ex.is_constant() && ex.value().is_integer() &&
                                !ex.value().is_negative()));
            if (bare) {
                emit(ex, out);
            } else {
                out += "(";
                emit(ex, out);
                out += ")";
            }
            return;
        }
        case Kind::Apply: {
            out += func_name(e.func());
            out += "(";
            emit(e.child(0), out);
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    emit(e, out);
    return out;
}

}  // namespace confsym
