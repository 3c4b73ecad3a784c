#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>

#include "confsym/expr.hpp"
#include "confsym/rng.hpp"

namespace confsym {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binds symbols to finite real values for numeric evaluation.
class EvalEnv {
public:
    EvalEnv() { bound_.fill(false); }

    EvalEnv& bind(int id, double value) {
        values_[static_cast<size_t>(id)] = value;
        bound_[static_cast<size_t>(id)] = true;
        return *this;
    }
    bool is_bound(int id) const { return bound_[static_cast<size_t>(id)]; }
    double get(int id) const { return values_[static_cast<size_t>(id)]; }

private:
    std::array<double, sym::count> values_{};
    std::array<bool, sym::count> bound_{};
};

using DerivRules = std::map<int, Expr>;

// Total derivative d e / d var where each symbol s listed in `rules` is
// treated as depending on var with derivative rules[s]. With empty rules this
// is the classical partial derivative (jet symbols independent). The result is
// a raw tree; callers simplify.
Expr derive(const Expr& e, int var, const DerivRules& rules);

// Classical partial derivative, simplified.
Expr diff(const Expr& e, int var);

// Simultaneous replacement of symbols, then simplify.
Expr substitute(const Expr& e, const std::map<int, Expr>& bindings);

// Numeric evaluation. Throws EvalError naming the offending subexpression for
// unbound symbols and domain violations (negative base under a non-integer
// power, division by zero, log of a non-positive value).
double eval(const Expr& e, const EvalEnv& env);

// Fills an environment with draws from the documented per-symbol ranges:
// t, x, zeta, omega, s in [0.2, 3]; alpha, beta in [0.3, 1]; a, b in
// [0.5, 2.5]; everything else in [-2, 2].
EvalEnv random_env(Rng& rng);

// Probabilistic zero test: canonical simplification to literal 0, or
// |value| < 1e-9 at `samples` seeded random environments.
bool zero_test(const Expr& e, std::uint64_t seed = kDefaultSeed, int samples = 100);

// Maximum |value| over seeded random environments (diagnostic companion of
// zero_test).
double max_abs_on_samples(const Expr& e, std::uint64_t seed = kDefaultSeed, int samples = 100);

}  // namespace confsym
