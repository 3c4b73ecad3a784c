#include "confsym/odesolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "confsym/simplify.hpp"

namespace confsym {
namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

bool DenseSolution::contains(double s) const { return s >= lo() - 1e-12 && s <= hi() + 1e-12; }

const DenseSolution::Segment& DenseSolution::segment_at(double s) const {
    if (segments_.empty()) throw std::runtime_error("empty solution");
    if (!contains(s)) throw std::out_of_range("sample outside solution span");
    const bool fwd = s_stop_ >= s_start_;
    size_t lo_i = 0, hi_i = segments_.size() - 1;
    while (lo_i < hi_i) {
        const size_t mid = (lo_i + hi_i + 1) / 2;
        const bool before = fwd ? (segments_[mid].s0 <= s) : (segments_[mid].s0 >= s);
        if (before)
            lo_i = mid;
        else
            hi_i = mid - 1;
    }
    return segments_[lo_i];
}

void DenseSolution::state(double s, double* out) const {
    const Segment& seg = segment_at(s);
    const double th = (s - seg.s0) / seg.h;
    const double th1 = 1.0 - th;
    const int n = dim_;
    const double* r = seg.rcont.data();
    for (int i = 0; i < n; ++i)
        out[i] = r[i] +
                 th * (r[n + i] + th1 * (r[2 * n + i] + th * (r[3 * n + i] + th1 * r[4 * n + i])));
}

void DenseSolution::state_derivative(double s, double* out) const {
    const Segment& seg = segment_at(s);
    const double th = (s - seg.s0) / seg.h;
    const double th1 = 1.0 - th;
    const int n = dim_;
    const double* r = seg.rcont.data();
    for (int i = 0; i < n; ++i) {
        const double q = r[2 * n + i] + th * (r[3 * n + i] + th1 * r[4 * n + i]);
        const double dq = r[3 * n + i] + th1 * r[4 * n + i] - th * r[4 * n + i];
        out[i] = (r[n + i] + th1 * q - th * q + th * th1 * dq) / seg.h;
    }
}

DenseSolution integrate_system(const SystemFn& f, std::vector<double> y0, double s0, double s1,
                               const IntegrateOptions& opts) {
    const int n = static_cast<int>(y0.size());
    DenseSolution sol;
    sol.dim_ = n;
    sol.s_start_ = s0;
    sol.s_stop_ = s0;
    if (s0 == s1) return sol;

    const double dir = s1 > s0 ? 1.0 : -1.0;
    std::vector<double> y = std::move(y0), ynew(static_cast<size_t>(n));
    std::vector<double> k1(static_cast<size_t>(n)), k2v(static_cast<size_t>(n)),
        k3(static_cast<size_t>(n)), k4(static_cast<size_t>(n)), k5(static_cast<size_t>(n)),
        k6(static_cast<size_t>(n)), k7(static_cast<size_t>(n)), tmp(static_cast<size_t>(n));

    f(s0, y.data(), k1.data());
    double fnorm = 1e-8, ynorm = 1e-8;
    for (int i = 0; i < n; ++i) {
        fnorm = std::max(fnorm, std::abs(k1[static_cast<size_t>(i)]));
        ynorm = std::max(ynorm, std::abs(y[static_cast<size_t>(i)]));
    }
    double h = dir * std::min(std::abs(s1 - s0), 0.01 * std::max(ynorm, 1.0) / fnorm);
    if (opts.max_step > 0) h = dir * std::min(std::abs(h), opts.max_step);

    double s = s0;
    const double span = std::abs(s1 - s0);
    int rejected_in_a_row = 0;
    while (dir * (s1 - s) > 1e-14 * span) {
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(s)))
            throw std::runtime_error("step size underflow in integrator");
        if (dir * (s + h - s1) > 0) h = s1 - s;

        auto stage = [&](double frac, std::initializer_list<std::pair<const std::vector<double>*, double>> ks,
                         std::vector<double>& out) {
            for (int i = 0; i < n; ++i) {
                double acc = y[static_cast<size_t>(i)];
                for (const auto& [kv, w] : ks) acc += h * w * (*kv)[static_cast<size_t>(i)];
                tmp[static_cast<size_t>(i)] = acc;
            }
            f(s + frac * h, tmp.data(), out.data());
        };
        stage(c2, {{&k1, a21}}, k2v);
        stage(c3, {{&k1, a31}, {&k2v, a32}}, k3);
        stage(c4, {{&k1, a41}, {&k2v, a42}, {&k3, a43}}, k4);
        stage(c5, {{&k1, a51}, {&k2v, a52}, {&k3, a53}, {&k4, a54}}, k5);
        stage(1.0, {{&k1, a61}, {&k2v, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}}, k6);
        for (int i = 0; i < n; ++i)
            ynew[static_cast<size_t>(i)] =
                y[static_cast<size_t>(i)] +
                h * (a71 * k1[static_cast<size_t>(i)] + a73 * k3[static_cast<size_t>(i)] +
                     a74 * k4[static_cast<size_t>(i)] + a75 * k5[static_cast<size_t>(i)] +
                     a76 * k6[static_cast<size_t>(i)]);
        f(s + h, ynew.data(), k7.data());

        double err = 0;
        for (int i = 0; i < n; ++i) {
            const double ei =
                h * (e1 * k1[static_cast<size_t>(i)] + e3 * k3[static_cast<size_t>(i)] +
                     e4 * k4[static_cast<size_t>(i)] + e5 * k5[static_cast<size_t>(i)] +
                     e6 * k6[static_cast<size_t>(i)] + e7 * k7[static_cast<size_t>(i)]);
            const double scale =
                opts.atol + opts.rtol * std::max(std::abs(y[static_cast<size_t>(i)]),
                                                 std::abs(ynew[static_cast<size_t>(i)]));
            err = std::max(err, std::abs(ei) / scale);
        }

        if (err <= 1.0) {
            rejected_in_a_row = 0;
            DenseSolution::Segment seg;
            seg.s0 = s;
            seg.h = h;
            seg.rcont.resize(5 * static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                const size_t ui = static_cast<size_t>(i);
                const double dy = ynew[ui] - y[ui];
                const double bspl = h * k1[ui] - dy;
                seg.rcont[ui] = y[ui];
                seg.rcont[static_cast<size_t>(n) + ui] = dy;
                seg.rcont[2 * static_cast<size_t>(n) + ui] = bspl;
                seg.rcont[3 * static_cast<size_t>(n) + ui] = dy - h * k7[ui] - bspl;
                seg.rcont[4 * static_cast<size_t>(n) + ui] =
                    h * (d1 * k1[ui] + d3 * k3[ui] + d4 * k4[ui] + d5 * k5[ui] + d6 * k6[ui] +
                         d7 * k7[ui]);
            }
            sol.segments_.push_back(std::move(seg));
            s += h;
            sol.s_stop_ = s;
            y.swap(ynew);
            k1.swap(k7);

            bool exploded = false;
            for (int i = 0; i < n; ++i)
                exploded = exploded || std::abs(y[static_cast<size_t>(i)]) > opts.blowup_threshold ||
                           !std::isfinite(y[static_cast<size_t>(i)]);
            if (exploded) {
                sol.blew_up_ = true;
                break;
            }
        } else {
            ++rejected_in_a_row;
            if (rejected_in_a_row > 60) throw std::runtime_error("integrator cannot meet tolerance");
        }
        const double factor = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
        if (opts.max_step > 0 && std::abs(h) > opts.max_step) h = dir * opts.max_step;
    }
    return sol;
}

// ---- canonical ODEs ----------------------------------------------------------

std::string ode_kind_name(OdeKind k) {
    switch (k) {
        case OdeKind::ReducedRaw: return "reduced_raw";
        case OdeKind::K1: return "K1";
        case OdeKind::K2: return "K2";
        case OdeKind::FP34: return "FP_34";
        case OdeKind::FPII: return "FP_II";
        case OdeKind::PI: return "P_I";
        case OdeKind::FractionalRiccati: return "fractional_riccati";
        case OdeKind::ClassicalRiccati: return "classical_riccati";
        case OdeKind::LinearSecondOrder: return "linear_2nd_order";
        case OdeKind::ClassicalSecondOrder: return "classical_2nd_order";
    }
    return "?";
}

int CanonicalODE::deriv_symbol(int k) const {
    if (k == 0) return unknown;
    // Symbol layout: F, F_1, F_2, F_3 are contiguous.
    return unknown + k;
}

Expr CanonicalODE::rhs_for_top() const {
    const int top = deriv_symbol(order);
    const Expr coeff = diff(lhs, top);
    if (contains_symbol(coeff, top))
        throw std::logic_error("ODE is not linear in its top derivative");
    const Expr rest = substitute(lhs, {{top, constant(0)}});
    return simplify(quotient(negate(rest), coeff));
}

EvalEnv CanonicalODE::param_env() const {
    EvalEnv env;
    for (const auto& [id, v] : param_values) env.bind(id, v);
    return env;
}

double SSubstitution::to_s(double v) const { return std::pow(v, alpha) / alpha; }
double SSubstitution::to_v(double s) const { return std::pow(alpha * s, 1.0 / alpha); }

SSubstitution s_substitute(const CanonicalODE& ode) {
    SSubstitution out;
    out.classical = ode;
    out.classical.fractional = false;
    auto it = ode.param_values.find(sym::alpha);
    out.alpha = ode.fractional && it != ode.param_values.end() ? it->second : 1.0;
    return out;
}

Expr ode_lhs_var_classical(const CanonicalODE& ode, int var, const Expr& alpha) {
    // d^(k alpha) F / d var^(k alpha) written with classical derivatives:
    // repeated application of var^(1-alpha) d/dvar.
    const Expr v = symbol(var);
    std::array<Expr, 4> forms = {symbol(ode.deriv_symbol(0)), constant(0), constant(0),
                                 constant(0)};
    DerivRules rules;
    for (int k = 0; k < 3; ++k)
        rules[ode.deriv_symbol(k)] = symbol(ode.deriv_symbol(k + 1));
    for (int k = 1; k <= ode.order; ++k)
        forms[static_cast<size_t>(k)] =
            simplify(power(v, constant(1) - alpha) *
                     derive(forms[static_cast<size_t>(k - 1)], var, rules));
    std::map<int, Expr> subs;
    subs[sym::s] = simplify(power(v, alpha) / alpha);
    for (int k = 1; k <= ode.order; ++k) subs[ode.deriv_symbol(k)] = forms[static_cast<size_t>(k)];
    return substitute(ode.lhs, subs);
}

// ---- solving -----------------------------------------------------------------

std::array<Expr, 4> derivative_chain(const CanonicalODE& ode, const Expr& value_expr) {
    const Expr rhs = ode.rhs_for_top();
    DerivRules rules;
    for (int k = 0; k + 1 < ode.order; ++k)
        rules[ode.deriv_symbol(k)] = symbol(ode.deriv_symbol(k + 1));
    rules[ode.deriv_symbol(ode.order - 1)] = rhs;

    std::array<Expr, 4> chain = {simplify(value_expr), constant(0), constant(0), constant(0)};
    for (int k = 1; k < 4; ++k)
        chain[static_cast<size_t>(k)] =
            simplify(derive(chain[static_cast<size_t>(k - 1)], sym::s, rules));
    return chain;
}

OdeSolution integrate_ivp(const CanonicalODE& ode, const std::vector<double>& ic, double s_begin,
                          double s_end, double tol) {
    const int order = ode.order;
    if (static_cast<int>(ic.size()) != order)
        throw std::invalid_argument("initial conditions must supply order-many values");
    if (s_begin == s_end) throw std::invalid_argument("empty integration span");

    const Expr rhs = ode.rhs_for_top();
    const EvalEnv params = ode.param_env();

    SystemFn f = [rhs, params, order, &ode](double s, const double* y, double* dy) {
        EvalEnv env = params;
        env.bind(sym::s, s);
        for (int k = 0; k < order; ++k) env.bind(ode.deriv_symbol(k), y[k]);
        for (int k = 0; k + 1 < order; ++k) dy[k] = y[k + 1];
        dy[order - 1] = eval(rhs, env);
    };

    IntegrateOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    auto dense = std::make_shared<DenseSolution>(
        integrate_system(f, ic, s_begin, s_end, opts));

    // Model-consistent extension: derivatives of orders >= `order` come from
    // differentiating the equation along the solution.
    std::array<Expr, 4> chain = derivative_chain(ode, symbol(ode.unknown));

    OdeSolution sol;
    sol.ode = ode;
    sol.lo = dense->lo();
    sol.hi = dense->hi();
    sol.blew_up = dense->blew_up();
    sol.initial_conditions = ic;
    sol.rtol = tol;
    sol.atol = tol;
    sol.dense = dense;

    auto fill = [dense, params, order, chain, ode](double s,
                                                   bool defect) -> std::array<double, 4> {
        std::vector<double> y(static_cast<size_t>(order)), yd(static_cast<size_t>(order));
        dense->state(s, y.data());
        EvalEnv env = params;
        env.bind(sym::s, s);
        for (int k = 0; k < order; ++k) env.bind(ode.deriv_symbol(k), y[static_cast<size_t>(k)]);
        std::array<double, 4> out{};
        for (int k = 0; k < 4; ++k) {
            if (k < order)
                out[static_cast<size_t>(k)] = y[static_cast<size_t>(k)];
            else
                out[static_cast<size_t>(k)] = eval(chain[static_cast<size_t>(k)], env);
        }
        if (defect) {
            dense->state_derivative(s, yd.data());
            out[static_cast<size_t>(order)] = yd[static_cast<size_t>(order - 1)];
        }
        return out;
    };
    sol.model_derivs = [fill](double s) { return fill(s, false); };
    sol.defect_derivs = [fill](double s) { return fill(s, true); };
    return sol;
}

double residual_of_ode(const CanonicalODE& ode, const OdeSolution& sol, int samples) {
    if (samples < 2) samples = 2;
    const EvalEnv params = ode.param_env();
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        const double s = sol.lo + (sol.hi - sol.lo) * i / (samples - 1.0);
        const std::array<double, 4> d =
            sol.defect_derivs ? sol.defect_derivs(s) : sol.model_derivs(s);
        EvalEnv env = params;
        env.bind(sym::s, s);
        for (int k = 0; k <= ode.order; ++k) env.bind(ode.deriv_symbol(k), d[static_cast<size_t>(k)]);
        worst = std::max(worst, std::abs(eval(ode.lhs, env)));
    }
    return worst;
}

}  // namespace confsym
