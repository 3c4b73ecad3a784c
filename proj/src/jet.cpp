#include "confsym/jet.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "confsym/odesolve.hpp"
#include "confsym/printer.hpp"
#include "confsym/simplify.hpp"

namespace confsym {

void JetPoint::bind(EvalEnv& env) const {
    env.bind(sym::t, t).bind(sym::x, x).bind(sym::u, u);
    env.bind(sym::u_t, u_t).bind(sym::u_x, u_x).bind(sym::u_xx, u_xx);
    env.bind(sym::u_xxx, u_xxx).bind(sym::u_xt, u_xt).bind(sym::u_xxt, u_xxt);
}

JetPoint random_jet_point(Rng& rng) {
    JetPoint p;
    p.t = rng.uniform(0.3, 2.5);
    p.x = rng.uniform(0.3, 2.5);
    p.u = rng.uniform(-2, 2);
    p.u_t = rng.uniform(-2, 2);
    p.u_x = rng.uniform(-2, 2);
    p.u_xx = rng.uniform(-2, 2);
    p.u_xxx = rng.uniform(-2, 2);
    p.u_xt = rng.uniform(-2, 2);
    p.u_xxt = rng.uniform(-2, 2);
    return p;
}

namespace {
const DerivRules& x_rules() {
    static const DerivRules rules = {
        {sym::u, symbol(sym::u_x)},     {sym::u_x, symbol(sym::u_xx)},
        {sym::u_t, symbol(sym::u_xt)},  {sym::u_xx, symbol(sym::u_xxx)},
        {sym::u_xt, symbol(sym::u_xxt)},
    };
    return rules;
}
const DerivRules& t_rules() {
    static const DerivRules rules = {{sym::u, symbol(sym::u_t)}, {sym::u_x, symbol(sym::u_xt)}};
    return rules;
}
}  // namespace

Expr total_x(const Expr& e) { return simplify(derive(e, sym::x, x_rules())); }
Expr total_t(const Expr& e) { return simplify(derive(e, sym::t, t_rules())); }

ClassicalProlongation classical_prolongation(const VectorField& v, int order) {
    const Expr ux = symbol(sym::u_x), ut = symbol(sym::u_t);
    const Expr uxx = symbol(sym::u_xx), uxt = symbol(sym::u_xt);
    const Expr uxxx = symbol(sym::u_xxx), uxxt = symbol(sym::u_xxt);

    ClassicalProlongation out{constant(0), constant(0), constant(0), constant(0)};
    out.eta_t = simplify(total_t(v.eta) - ux * total_t(v.xi) - ut * total_t(v.tau));
    out.eta_x = simplify(total_x(v.eta) - ux * total_x(v.xi) - ut * total_x(v.tau));
    if (order >= 2)
        out.eta_xx = simplify(total_x(out.eta_x) - uxx * total_x(v.xi) - uxt * total_x(v.tau));
    if (order >= 3)
        out.eta_xxx = simplify(total_x(out.eta_xx) - uxxx * total_x(v.xi) - uxxt * total_x(v.tau));
    return out;
}

FractionalProlongation fractional_prolongation(const VectorField& v, const Expr& alpha,
                                               const Expr& beta, int order) {
    const ClassicalProlongation c = classical_prolongation(v, order);
    const Expr t = symbol(sym::t), x = symbol(sym::x);
    const Expr ux = symbol(sym::u_x), ut = symbol(sym::u_t);
    const Expr uxx = symbol(sym::u_xx), uxxx = symbol(sym::u_xxx);
    const Expr one = constant(1), two = constant(2), three = constant(3);

    FractionalProlongation out{constant(0), constant(0), constant(0), constant(0)};
    out.eta_t_beta = simplify(power(t, one - beta) * c.eta_t +
                              (one - beta) * v.tau * power(t, negate(beta)) * ut);
    out.eta_x_alpha = simplify(power(x, one - alpha) * c.eta_x +
                               (one - alpha) * v.xi * power(x, negate(alpha)) * ux);
    if (order >= 2) {
        out.eta_xx_alpha = simplify(
            power(x, two - two * alpha) * c.eta_xx +
            (one - alpha) * power(x, one - two * alpha) * c.eta_x +
            (two - two * alpha) * power(x, one - two * alpha) * v.xi * uxx +
            (one - alpha) * (one - two * alpha) * power(x, constant(-2) * alpha) * v.xi * ux);
    }
    if (order >= 3) {
        out.eta_xxx_alpha = simplify(
            power(x, three - three * alpha) * c.eta_xxx +
            (three - three * alpha) * power(x, two - three * alpha) * c.eta_xx +
            (one - alpha) * (one - two * alpha) * power(x, one - three * alpha) * c.eta_x +
            (three - three * alpha) * v.xi * power(x, two - three * alpha) * uxxx +
            (three - three * alpha) * (two - three * alpha) * v.xi *
                power(x, one - three * alpha) * uxx +
            (one - alpha) * (one - two * alpha) * (one - three * alpha) * v.xi *
                power(x, negate(three * alpha)) * ux);
    }
    return out;
}

FractionalProlongation fractional_prolongation_recursive(const VectorField& v, const Expr& alpha,
                                                         const Expr& beta, int order) {
    const ClassicalProlongation c = classical_prolongation(v, 1);
    const Expr t = symbol(sym::t), x = symbol(sym::x);
    const Expr ux = symbol(sym::u_x), ut = symbol(sym::u_t);
    const Expr one = constant(1);

    FractionalProlongation out{constant(0), constant(0), constant(0), constant(0)};
    out.eta_t_beta = simplify(power(t, one - beta) * c.eta_t +
                              (one - beta) * v.tau * power(t, negate(beta)) * ut);

    // Repeatedly prolong to the conformable derivative of the previous level:
    // the level-k derivative w = d^(k alpha) u / dx^(k alpha) transforms with
    // coefficient x^(1-alpha) * [Dx(prev) - w_x Dx(xi) - w_t Dx(tau)]
    //            + (1-alpha) xi x^(-alpha) w_x.
    Expr w = simplify(power(x, one - alpha) * ux);  // current derivative as a jet expression
    Expr coeff = simplify(power(x, one - alpha) * c.eta_x +
                          (one - alpha) * v.xi * power(x, negate(alpha)) * ux);
    out.eta_x_alpha = coeff;
    for (int level = 2; level <= order; ++level) {
        const Expr w_x = total_x(w);
        const Expr w_t = total_t(w);
        coeff = simplify(power(x, one - alpha) *
                             (total_x(coeff) - w_x * total_x(v.xi) - w_t * total_x(v.tau)) +
                         (one - alpha) * v.xi * power(x, negate(alpha)) * w_x);
        w = simplify(power(x, one - alpha) * w_x);
        if (level == 2) out.eta_xx_alpha = coeff;
        if (level == 3) out.eta_xxx_alpha = coeff;
    }
    return out;
}

VectorField commutator(const VectorField& v, const VectorField& w) {
    auto act = [](const VectorField& f, const Expr& g) {
        return f.xi * derive(g, sym::x, {}) + f.tau * derive(g, sym::t, {}) +
               f.eta * derive(g, sym::u, {});
    };
    VectorField out;
    out.xi = simplify(act(v, w.xi) - act(w, v.xi));
    out.tau = simplify(act(v, w.tau) - act(w, v.tau));
    out.eta = simplify(act(v, w.eta) - act(w, v.eta));
    out.label = "[" + v.label + "," + w.label + "]";
    return out;
}

namespace {

// Dense solve of the n x n normal equations (tiny n).
std::vector<double> solve_normal(std::vector<std::vector<double>> m, std::vector<double> rhs) {
    const size_t n = rhs.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        if (std::abs(m[col][col]) < 1e-12) throw std::runtime_error("basis is degenerate");
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    for (size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
    return rhs;
}

std::optional<Rational> snap_rational(double v, std::int64_t max_den = 48) {
    for (std::int64_t q = 1; q <= max_den; ++q) {
        const double scaled = v * static_cast<double>(q);
        const double rounded = std::rint(scaled);
        if (std::abs(scaled - rounded) < 1e-7 * static_cast<double>(q) + 1e-9 &&
            std::abs(rounded) < 1e15)
            return Rational(static_cast<std::int64_t>(rounded), q);
    }
    return std::nullopt;
}

bool field_zero(const VectorField& f, std::uint64_t seed) {
    return zero_test(f.xi, seed) && zero_test(f.tau, seed) && zero_test(f.eta, seed);
}

}  // namespace

StructureTable structure_constants(const std::vector<VectorField>& fields, std::uint64_t seed) {
    const size_t n = fields.size();
    StructureTable table;
    table.labels.reserve(n);
    for (const VectorField& f : fields) table.labels.push_back(f.label);
    table.entries.assign(n, std::vector<BracketEntry>(n));

    // Sample rows: each sample point contributes the three coefficients of
    // every basis field. Parameters are drawn once and held fixed across the
    // points; only (t, x, u) vary, so parameter-dependent expansion
    // coefficients (1/a in the Burgers table) stay constant over the system.
    Rng rng(seed);
    const EvalEnv params = random_env(rng);
    const int n_samples = 12;
    std::vector<EvalEnv> envs;
    for (int i = 0; i < n_samples; ++i) {
        EvalEnv env = params;
        env.bind(sym::t, rng.uniform(0.2, 3)).bind(sym::x, rng.uniform(0.2, 3));
        env.bind(sym::u, rng.uniform(-2, 2));
        envs.push_back(env);
    }

    auto rows_of = [&](const VectorField& f) {
        std::vector<double> rows;
        for (const EvalEnv& env : envs) {
            rows.push_back(eval(f.xi, env));
            rows.push_back(eval(f.tau, env));
            rows.push_back(eval(f.eta, env));
        }
        return rows;
    };
    std::vector<std::vector<double>> basis_rows;
    basis_rows.reserve(n);
    for (const VectorField& f : fields) basis_rows.push_back(rows_of(f));

    const double a_value = envs.front().get(sym::a);

    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            BracketEntry& entry = table.entries[i][j];
            entry.coefficients.assign(n, constant(0));
            if (i == j) {
                entry.expressible = true;
                entry.zero = true;
                continue;
            }
            const VectorField bracket = commutator(fields[i], fields[j]);
            if (field_zero(bracket, seed)) {
                entry.expressible = true;
                entry.zero = true;
                continue;
            }
            const std::vector<double> target = rows_of(bracket);
            std::vector<std::vector<double>> normal(n, std::vector<double>(n, 0.0));
            std::vector<double> rhs(n, 0.0);
            for (size_t r = 0; r < target.size(); ++r) {
                for (size_t k = 0; k < n; ++k) {
                    rhs[k] += basis_rows[k][r] * target[r];
                    for (size_t l = 0; l < n; ++l)
                        normal[k][l] += basis_rows[k][r] * basis_rows[l][r];
                }
            }
            const std::vector<double> numeric = solve_normal(std::move(normal), std::move(rhs));

            // Snap to exact coefficients. Plain rationals and rationals over
            // the parameter a (the Burgers table needs 1/a) are both viable
            // readings of a numeric value, so candidate combinations are tried
            // until one passes the symbolic verification.
            std::vector<std::vector<Expr>> candidates(n);
            bool snapped = true;
            for (size_t k = 0; k < n; ++k) {
                const double c = numeric[k];
                if (std::abs(c) < 1e-9) {
                    candidates[k] = {constant(0)};
                    continue;
                }
                if (auto r = snap_rational(c)) candidates[k].push_back(constant(*r));
                if (auto r = snap_rational(c * a_value))
                    candidates[k].push_back(simplify(constant(*r) / symbol(sym::a)));
                if (auto r = snap_rational(c / a_value))
                    candidates[k].push_back(simplify(constant(*r) * symbol(sym::a)));
                if (candidates[k].empty()) snapped = false;
            }

            bool ok = false;
            if (snapped) {
                std::vector<size_t> pick(n, 0);
                for (;;) {
                    Expr rx = bracket.xi, rt = bracket.tau, ru = bracket.eta;
                    for (size_t k = 0; k < n; ++k) {
                        const Expr& ck = candidates[k][pick[k]];
                        rx = rx - ck * fields[k].xi;
                        rt = rt - ck * fields[k].tau;
                        ru = ru - ck * fields[k].eta;
                    }
                    if (zero_test(rx, seed) && zero_test(rt, seed) && zero_test(ru, seed)) {
                        for (size_t k = 0; k < n; ++k)
                            entry.coefficients[k] = candidates[k][pick[k]];
                        ok = true;
                        break;
                    }
                    size_t pos = 0;
                    while (pos < n && ++pick[pos] == candidates[pos].size()) pick[pos++] = 0;
                    if (pos == n) break;
                }
            }
            entry.expressible = ok;
            if (!ok) table.closed = false;
        }
    }
    return table;
}

bool jacobi_identity_holds(const std::vector<VectorField>& fields, std::uint64_t seed) {
    const size_t n = fields.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                const VectorField s1 = commutator(commutator(fields[i], fields[j]), fields[k]);
                const VectorField s2 = commutator(commutator(fields[j], fields[k]), fields[i]);
                const VectorField s3 = commutator(commutator(fields[k], fields[i]), fields[j]);
                const Expr zx = s1.xi + s2.xi + s3.xi;
                const Expr zt = s1.tau + s2.tau + s3.tau;
                const Expr zu = s1.eta + s2.eta + s3.eta;
                if (!zero_test(zx, seed) || !zero_test(zt, seed) || !zero_test(zu, seed))
                    return false;
            }
    return true;
}

FlowPoint flow(const VectorField& v, const FlowPoint& start, double eps, const EvalEnv& params,
               double tol) {
    if (eps == 0) return start;
    SystemFn f = [&v, &params](double, const double* y, double* dy) {
        EvalEnv env = params;
        env.bind(sym::t, y[0]).bind(sym::x, y[1]).bind(sym::u, y[2]);
        dy[0] = eval(v.tau, env);
        dy[1] = eval(v.xi, env);
        dy[2] = eval(v.eta, env);
    };
    IntegrateOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    DenseSolution sol = integrate_system(f, {start.t, start.x, start.u}, 0.0, eps, opts);
    if (sol.blew_up()) throw std::runtime_error("flow left the admissible domain");
    std::array<double, 3> y{};
    sol.state(eps, y.data());
    if (!(y[0] > 0) || !(y[1] > 0))
        throw std::runtime_error("flow left the admissible domain (t, x must stay positive)");
    return {y[0], y[1], y[2]};
}

}  // namespace confsym
