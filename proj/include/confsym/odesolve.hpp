#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "confsym/calculus.hpp"
#include "confsym/expr.hpp"

namespace confsym {

// ---- generic dense-output Runge-Kutta (Dormand-Prince 5(4)) -----------------

using SystemFn = std::function<void(double s, const double* y, double* dy)>;

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double blowup_threshold = 1e8;
    double max_step = 0;  // 0 = unrestricted
};

// Piecewise quintic dense output; supports forward and backward spans.
class DenseSolution {
public:
    int dim() const { return dim_; }
    double s_start() const { return s_start_; }
    double s_stop() const { return s_stop_; }
    double lo() const { return std::min(s_start_, s_stop_); }
    double hi() const { return std::max(s_start_, s_stop_); }
    bool blew_up() const { return blew_up_; }

    bool contains(double s) const;
    void state(double s, double* out) const;             // y(s)
    void state_derivative(double s, double* out) const;  // d/ds of the interpolant

private:
    friend DenseSolution integrate_system(const SystemFn&, std::vector<double>, double, double,
                                          const IntegrateOptions&);
    struct Segment {
        double s0, h;
        std::vector<double> rcont;  // 5 * dim
    };
    const Segment& segment_at(double s) const;

    int dim_ = 0;
    double s_start_ = 0, s_stop_ = 0;
    bool blew_up_ = false;
    std::vector<Segment> segments_;
};

DenseSolution integrate_system(const SystemFn& f, std::vector<double> y0, double s0, double s1,
                               const IntegrateOptions& opts = {});

// ---- canonical reduced ODEs --------------------------------------------------

// Every reduced equation of the catalog is stored through the exact change of
// variable s = v^alpha/alpha (v the equation's own variable): sequential
// conformable derivatives in v coincide with classical derivatives in s, so a
// single expression serves both readings. `lhs` lives in the symbols
// {s, F, F_1, .., F_order} with F the unknown.
enum class OdeKind {
    ReducedRaw,
    K1,
    K2,
    FP34,
    FPII,
    PI,
    FractionalRiccati,
    ClassicalRiccati,
    LinearSecondOrder,
    ClassicalSecondOrder,
};

std::string ode_kind_name(OdeKind k);

struct CanonicalODE {
    OdeKind kind = OdeKind::ReducedRaw;
    std::string label;
    int unknown = sym::Psi;  // sym::Psi / Phi / W / Theta
    int order = 2;
    bool fractional = true;  // stated with conformable derivatives in its variable
    Expr lhs;
    std::map<int, double> param_values;  // alpha, beta, gamma, mu, sigma, a, b as needed

    int deriv_symbol(int k) const;       // F, F_1, F_2, F_3
    Expr rhs_for_top() const;            // lhs = 0 solved for F_order
    EvalEnv param_env() const;
};

// Exact change of variable s = v^alpha/alpha. The expression is unchanged;
// only the reading of the derivative symbols flips from conformable-in-v to
// classical-in-s. The returned record carries the invertible variable map.
struct SSubstitution {
    CanonicalODE classical;
    double alpha = 1;
    double to_s(double v) const;
    double to_v(double s) const;
};
SSubstitution s_substitute(const CanonicalODE& ode);

// The same lhs rewritten with classical derivatives in the original variable
// `var`: s -> var^alpha/alpha and F_k -> the expanded sequential forms. Used
// by the reduction checker.
Expr ode_lhs_var_classical(const CanonicalODE& ode, int var, const Expr& alpha);

// ---- solutions ----------------------------------------------------------------

// Numeric solution with value and first three derivatives available anywhere
// in the span. Solutions obtained by integration expose a second, defect-style
// reading where the top derivative comes from differentiating the dense
// interpolant instead of the ODE; transformed solutions forward that reading
// through their defining formulas.
struct OdeSolution {
    CanonicalODE ode;
    double lo = 0, hi = 0;
    bool blew_up = false;
    std::vector<double> initial_conditions;
    double rtol = 0, atol = 0;
    std::shared_ptr<const DenseSolution> dense;
    std::function<std::array<double, 4>(double)> model_derivs;
    std::function<std::array<double, 4>(double)> defect_derivs;

    std::array<double, 4> derivs(double s) const { return model_derivs(s); }
    bool contains(double s) const { return s >= lo - 1e-12 && s <= hi + 1e-12; }
};

// Integrates the (s-substituted) ODE as an initial value problem from span
// start to span end, with |value| > blowup truncating the span and setting the
// flag. `ic` supplies order-many values (F, F', ...) at the span start.
OdeSolution integrate_ivp(const CanonicalODE& ode, const std::vector<double>& ic, double s_begin,
                          double s_end, double tol = 1e-10);

// Max |lhs| over `samples` equally spaced points, derivatives taken in the
// defect reading. Deterministic.
double residual_of_ode(const CanonicalODE& ode, const OdeSolution& sol, int samples);

// Builds the first four derivative expressions of `value_expr` (a function of
// s, F, F_1, ..) along solutions of `ode`, eliminating derivatives of order
// >= ode.order through the equation. Used by the solution-to-solution maps.
std::array<Expr, 4> derivative_chain(const CanonicalODE& ode, const Expr& value_expr);

}  // namespace confsym
