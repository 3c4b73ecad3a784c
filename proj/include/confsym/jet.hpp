#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confsym/calculus.hpp"
#include "confsym/expr.hpp"
#include "confsym/rng.hpp"

namespace confsym {

// Point-symmetry generator xi d/dx + tau d/dt + eta d/du with coefficients in
// (t, x, u) and the equation parameters.
struct VectorField {
    Expr xi, tau, eta;
    std::string label;
};

// Numeric point of the truncated jet space. Coordinates are independent; no
// equation is imposed at construction.
struct JetPoint {
    double t = 1, x = 1;
    double u = 0, u_t = 0, u_x = 0, u_xx = 0, u_xxx = 0, u_xt = 0, u_xxt = 0;

    void bind(EvalEnv& env) const;
};

// t, x in [0.3, 2.5], the jet coordinates in [-2, 2].
JetPoint random_jet_point(Rng& rng);

// Total derivative operators on expressions over (t, x, u, jet symbols).
Expr total_x(const Expr& e);
Expr total_t(const Expr& e);

struct ClassicalProlongation {
    Expr eta_t, eta_x, eta_xx, eta_xxx;
};

// eta^t, eta^x, eta^xx, eta^xxx by total-derivative assembly; coefficients up
// to `order` are populated (the rest stay zero).
ClassicalProlongation classical_prolongation(const VectorField& v, int order = 3);

struct FractionalProlongation {
    Expr eta_t_beta, eta_x_alpha, eta_xx_alpha, eta_xxx_alpha;
};

// The four fractional coefficients in their printed closed form, built on the
// classical prolongation. alpha and beta may stay symbolic.
FractionalProlongation fractional_prolongation(const VectorField& v, const Expr& alpha,
                                               const Expr& beta, int order = 3);

// Alternative construction that re-applies the first-order rule to the
// once-prolonged jet; used to cross-validate the closed forms.
FractionalProlongation fractional_prolongation_recursive(const VectorField& v, const Expr& alpha,
                                                         const Expr& beta, int order = 3);

// ---- Lie algebra --------------------------------------------------------------

// Coefficient-wise V(W) - W(V), simplified.
VectorField commutator(const VectorField& v, const VectorField& w);

struct BracketEntry {
    std::vector<Expr> coefficients;  // expansion in the given basis
    bool expressible = false;
    bool zero = false;
};

struct StructureTable {
    std::vector<std::string> labels;
    std::vector<std::vector<BracketEntry>> entries;  // entries[i][j] for [Vi, Vj]
    bool closed = true;
};

// Expands every bracket in the given basis: numeric least-squares at sampled
// points, rational snapping (plain rationals, then rationals over the
// parameter `a`), and a symbolic zero-test of the residual field. Brackets
// that cannot be expressed mark the table as not closed.
StructureTable structure_constants(const std::vector<VectorField>& fields,
                                   std::uint64_t seed = kDefaultSeed);

// Jacobi identity for all triples under the zero-test.
bool jacobi_identity_holds(const std::vector<VectorField>& fields,
                           std::uint64_t seed = kDefaultSeed);

// ---- flow ----------------------------------------------------------------------

struct FlowPoint {
    double t, x, u;
};

// Integrates the group equations d(t,x,u)/d eps = (tau, xi, eta) to parameter
// eps. `params` binds any parameters appearing in the coefficients. Throws if
// the orbit leaves t > 0, x > 0.
FlowPoint flow(const VectorField& v, const FlowPoint& start, double eps, const EvalEnv& params,
               double tol = 1e-12);

}  // namespace confsym
