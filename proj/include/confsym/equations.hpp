#pragma once

#include <string>
#include <vector>

#include "confsym/expr.hpp"
#include "confsym/jet.hpp"

namespace confsym {

enum class EquationId { Kdv, Mkdv, Burgers, Mburgers };

std::string equation_name(EquationId id);
EquationId equation_from_name(const std::string& name);

// One of the four conformable-fractional equations, with bound numeric orders
// and (for the Burgers family) coefficients.
struct EquationSpec {
    EquationId id = EquationId::Kdv;
    double alpha = 1, beta = 1;
    double a = 1, b = 1;  // Burgers family only

    // Equivalent classical form (alpha, beta, a, b symbolic): the derivative
    // rewriting of the fractional equation.
    Expr equivalent_form() const;
    // The jet symbol eliminated to enforce the equation on jet points (u_xxx
    // for the third-order family, u_xx for the second-order family).
    int eliminated_symbol() const;
    // equivalent_form() == 0 solved for that symbol.
    Expr eliminated_solved() const;
    // prolongation order in x (3 or 2)
    int x_order() const;

    EvalEnv param_env() const;  // binds alpha, beta, a, b
};

// The symmetry basis reported for each equation (parameters symbolic).
std::vector<VectorField> basis_fields(EquationId id);

// The solved generator family with free constants c1..c5.
struct SymmetryFamily {
    EquationId id;
    VectorField field;          // coefficients contain c1..cN
    int constants = 0;          // how many c's are live
};
SymmetryFamily symmetry_family(EquationId id);

// The infinitesimal criterion of the equation applied to V, as an expression
// over the jet symbols and parameters. The equation is NOT yet imposed.
Expr symmetry_criterion(const EquationSpec& eq, const VectorField& v);

// Builds the criterion once and evaluates it on jet points with the equation
// imposed by overriding the eliminated jet symbol.
class CriterionEvaluator {
public:
    CriterionEvaluator(const EquationSpec& eq, const VectorField& v);

    // `extra` supplies values for any free constants (c1..c5). Equation
    // parameters come from the spec.
    double residual(const JetPoint& p, const EvalEnv& extra = {}) const;

    // Same criterion evaluated with explicit orders and coefficients; the
    // symbolic construction is shared across calls.
    double residual_at(const JetPoint& p, double alpha, double beta, double a, double b,
                       const EvalEnv& extra = {}) const;

private:
    EquationSpec eq_;
    Expr criterion_;
    Expr solved_;
    int eliminated_;
};

// Max |criterion| over `count` seeded random jet points.
double max_criterion_residual(const EquationSpec& eq, const VectorField& v, int count,
                              std::uint64_t seed = kDefaultSeed, const EvalEnv& extra = {});

}  // namespace confsym
