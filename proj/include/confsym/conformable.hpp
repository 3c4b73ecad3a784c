#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confsym/expr.hpp"

namespace confsym {

// Numeric configuration for the limit-based derivative and the integral
// operator.
struct ConfCalcConfig {
    double eps0 = 1e-6;        // initial step of the limit parameter
    int richardson_levels = 2; // extrapolation levels on top of the raw quotient
    double quad_abs_tol = 1e-10;
    double quad_rel_tol = 1e-8;
    int quad_max_depth = 60;
};

using RealFn = std::function<double(double)>;

// Symbolic conformable derivative of order `order` in `v`:
// simplify(v^(1-order) * d e / d v). Exact for the differentiable corpus.
Expr conf_diff_symbolic(const Expr& e, int v, const Expr& order);

// Limit-definition derivative: forward quotient with increment eps * t^(1-alpha)
// and Richardson extrapolation in eps.
double conf_diff_numeric(const RealFn& f, double t, double alpha, const ConfCalcConfig& cfg = {});

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error;
};

// Integral operator: int_0^t f(tau) tau^(alpha-1) dtau, computed after the
// substitution sigma = tau^alpha which removes the endpoint singularity.
// Throws QuadratureError with the achieved estimate when tolerances are not met.
double conf_integrate_numeric(const RealFn& f, double t, double alpha,
                              const ConfCalcConfig& cfg = {});

// A corpus entry carries the function, its classical derivative, and the
// value at zero (for the inversion rule I D f = f - f(0)).
struct CalcFunction {
    std::string name;
    RealFn f;
    RealFn df;
    double f0;
    bool positive_valued;  // g > 0 on (0, inf), required by one chain rule
};

// sin, cos, exp, sqrt, t^2, 1/(1+t^2)
const std::vector<CalcFunction>& calculus_corpus();

struct RuleReport {
    std::string rule;
    double alpha = 0;
    double max_residual = 0;
    int points_checked = 0;
    int points_skipped = 0;  // hypothesis violations (e.g. g <= 0)
    bool pass = false;
};

// Checks every rule of the calculus (linearity, power, constant, product,
// quotient, the derivative form t^(1-alpha) f', both inversion theorems and
// both chain rules) on corpus x points. Residuals are normalized as
// |lhs - rhs| / (1 + max(|lhs|, |rhs|)); pass means max < 1e-6.
std::vector<RuleReport> check_rules(double alpha, const std::vector<CalcFunction>& corpus,
                                    const std::vector<double>& points,
                                    const ConfCalcConfig& cfg = {});

}  // namespace confsym
