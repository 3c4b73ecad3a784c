#pragma once

#include <memory>
#include <string>
#include <vector>

#include "confsym/rational.hpp"
#include "confsym/symbols.hpp"

namespace confsym {

// Immutable symbolic expression tree. Shared subtrees are fine: nodes are
// never mutated after construction, so expressions can be copied and used
// across threads freely.
enum class Kind : std::uint8_t {
    Constant,
    Variable,
    Parameter,
    Sum,
    Product,
    Quotient,
    Power,
    Negate,
    Apply,
};

class Expr;
using ExprList = std::vector<Expr>;

struct ExprNode {
    Kind kind;
    Rational value;  // Constant
    int symbol = -1;  // Variable / Parameter
    Func func = Func::Sin;  // Apply
    ExprList kids;
};

class Expr {
public:
    Expr() : n_(zero_node()) {}

    Kind kind() const { return n_->kind; }
    const Rational& value() const { return n_->value; }
    int symbol() const { return n_->symbol; }
    Func func() const { return n_->func; }
    const ExprList& children() const { return n_->kids; }
    size_t arity() const { return n_->kids.size(); }
    const Expr& child(size_t i) const { return n_->kids[i]; }

    bool is_constant() const { return n_->kind == Kind::Constant; }
    bool is_zero() const { return is_constant() && n_->value.is_zero(); }
    bool is_one() const { return is_constant() && n_->value.is_one(); }
    bool is_symbol(int id) const {
        return (n_->kind == Kind::Variable || n_->kind == Kind::Parameter) && n_->symbol == id;
    }

    const ExprNode* raw() const { return n_.get(); }

    static Expr make(ExprNode node) {
        return Expr(std::make_shared<const ExprNode>(std::move(node)));
    }

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}
    static const std::shared_ptr<const ExprNode>& zero_node();

    std::shared_ptr<const ExprNode> n_;
};

// ---- constructors -----------------------------------------------------------

Expr constant(Rational r);
inline Expr constant(std::int64_t n) { return constant(Rational(n)); }
Expr symbol(int id);
Expr sum(ExprList kids);
Expr product(ExprList kids);
Expr quotient(Expr num, Expr den);
Expr power(Expr base, Expr exponent);
Expr negate(Expr e);
Expr apply(Func f, Expr arg);

// Convenience arithmetic; results are raw (unsimplified) trees.
inline Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sum({a, negate(b)}); }
inline Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return quotient(a, b); }
inline Expr operator-(const Expr& a) { return negate(a); }

// Total order used for canonical sorting; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);
inline bool equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

// True when the expression is provably positive on the working domain
// (positive constants and symbols, products/sums/powers thereof).
bool known_positive(const Expr& e);

// Collects the free symbols of `e` into a fixed-size presence mask.
void collect_symbols(const Expr& e, std::array<bool, sym::count>& present);
bool contains_symbol(const Expr& e, int id);

}  // namespace confsym
