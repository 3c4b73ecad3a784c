#include "confsym/conformable.hpp"

#include <array>
#include <limits>
#include <cmath>

#include "confsym/calculus.hpp"
#include "confsym/simplify.hpp"

namespace confsym {

Expr conf_diff_symbolic(const Expr& e, int v, const Expr& order) {
    const Expr factor = power(symbol(v), constant(1) - order);
    return simplify(factor * derive(e, v, {}));
}

double conf_diff_numeric(const RealFn& f, double t, double alpha, const ConfCalcConfig& cfg) {
    if (!(t > 0)) throw std::domain_error("conformable derivative requires t > 0");
    if (!(cfg.eps0 > 0) || cfg.richardson_levels < 0)
        throw std::invalid_argument("limit step and extrapolation levels must be positive");
    const double scale = std::pow(t, 1.0 - alpha);
    // The limit parameter shrinks with t so that the increment eps * t^(1-alpha)
    // stays relative near the origin, where the corpus derivatives can be
    // unbounded.
    const double eps0 = cfg.eps0 * std::min(1.0, std::pow(t, alpha));
    const double f0 = f(t);
    const int levels = cfg.richardson_levels;
    // Neville table over the step sequence eps0 / 2^k; the forward quotient
    // has a full Taylor series in eps, so each column cancels one power.
    std::vector<double> row(static_cast<size_t>(levels) + 1);
    for (int k = 0; k <= levels; ++k) {
        const double eps = eps0 / static_cast<double>(1 << k);
        const double quotient = (f(t + eps * scale) - f0) / eps;
        double prev = row[0];
        row[0] = quotient;
        double pow2 = 1;
        for (int j = 1; j <= k; ++j) {
            pow2 *= 2;
            const double tmp = row[static_cast<size_t>(j)];
            row[static_cast<size_t>(j)] =
                (pow2 * row[static_cast<size_t>(j - 1)] - prev) / (pow2 - 1);
            prev = tmp;
        }
    }
    return row[static_cast<size_t>(levels)];
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double value;
    double error;
};

Interval gk15(const RealFn& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    std::array<double, 15> values{};
    values[14] = f(c);
    double kronrod = kWgk[7] * values[14];
    double gauss = kWg[3] * values[14];
    double resabs = kWgk[7] * std::abs(values[14]);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[static_cast<size_t>(i)];
        const double fl = f(c - dx), fr = f(c + dx);
        values[static_cast<size_t>(2 * i)] = fl;
        values[static_cast<size_t>(2 * i + 1)] = fr;
        kronrod += kWgk[static_cast<size_t>(i)] * (fl + fr);
        resabs += kWgk[static_cast<size_t>(i)] * (std::abs(fl) + std::abs(fr));
        if (i % 2 == 1) gauss += kWg[static_cast<size_t>(i / 2)] * (fl + fr);
    }
    // resasc: integral of |f - mean|, the oscillation scale that normalizes
    // the sharpened error estimate.
    const double mean = kronrod * 0.5;
    double resasc = kWgk[7] * std::abs(values[14] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[static_cast<size_t>(i)] *
                  (std::abs(values[static_cast<size_t>(2 * i)] - mean) +
                   std::abs(values[static_cast<size_t>(2 * i + 1)] - mean));
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    kronrod *= h;
    gauss *= h;
    const double diff = std::abs(kronrod - gauss);
    double err = diff;
    if (resasc != 0.0 && diff != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * diff / resasc, 1.5));
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    return {kronrod, std::max(err, round_floor)};
}

// Globally adaptive subdivision: always bisect the interval with the largest
// error estimate. A global budget (rather than per-interval allocation) keeps
// integrable endpoint singularities convergent.
struct Panel {
    double lo, hi;
    Interval est;
};

}  // namespace

double conf_integrate_numeric(const RealFn& f, double t, double alpha,
                              const ConfCalcConfig& cfg) {
    if (!(t > 0)) throw std::domain_error("conformable integral requires t > 0");
    if (!(alpha > 0 && alpha <= 1)) throw std::domain_error("alpha must lie in (0, 1]");
    if (!(cfg.quad_abs_tol > 0) || !(cfg.quad_rel_tol > 0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    // sigma = tau^alpha turns the weight tau^(alpha-1) d tau into d sigma / alpha.
    const double upper = std::pow(t, alpha);
    const RealFn transformed = [&f, alpha](double sigma) {
        return f(std::pow(sigma, 1.0 / alpha)) / alpha;
    };

    std::vector<Panel> panels{{0.0, upper, gk15(transformed, 0.0, upper)}};
    const size_t panel_limit = 4000;
    for (;;) {
        double total = 0, error = 0;
        size_t worst = 0;
        for (size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].est.value;
            error += panels[i].est.error;
            if (panels[i].est.error > panels[worst].est.error) worst = i;
        }
        const double tol = std::max(cfg.quad_abs_tol, cfg.quad_rel_tol * std::abs(total));
        if (error <= tol) return total;
        const Panel& w = panels[worst];
        if (panels.size() >= panel_limit || (w.hi - w.lo) < 1e-300)
            throw QuadratureError("quadrature tolerance not met (achieved error estimate " +
                                      std::to_string(error) + ")",
                                  error);
        const double mid = 0.5 * (w.lo + w.hi);
        const Panel left{w.lo, mid, gk15(transformed, w.lo, mid)};
        const Panel right{mid, w.hi, gk15(transformed, mid, w.hi)};
        panels[worst] = left;
        panels.push_back(right);
    }
}

const std::vector<CalcFunction>& calculus_corpus() {
    static const std::vector<CalcFunction> corpus = {
        {"sin", [](double v) { return std::sin(v); }, [](double v) { return std::cos(v); }, 0.0,
         false},
        {"cos", [](double v) { return std::cos(v); }, [](double v) { return -std::sin(v); }, 1.0,
         false},
        {"exp", [](double v) { return std::exp(v); }, [](double v) { return std::exp(v); }, 1.0,
         true},
        {"sqrt", [](double v) { return std::sqrt(v); },
         [](double v) { return 0.5 / std::sqrt(v); }, 0.0, true},
        {"square", [](double v) { return v * v; }, [](double v) { return 2 * v; }, 0.0, false},
        {"lorentz", [](double v) { return 1.0 / (1.0 + v * v); },
         [](double v) {
             const double d = 1.0 + v * v;
             return -2.0 * v / (d * d);
         },
         1.0, true},
    };
    return corpus;
}

namespace {

double normalized(double lhs, double rhs) {
    return std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
}

struct RuleAccumulator {
    RuleReport report;
    void note(double lhs, double rhs) {
        report.max_residual = std::max(report.max_residual, normalized(lhs, rhs));
        ++report.points_checked;
    }
    void skip() { ++report.points_skipped; }
    RuleReport finish() {
        report.pass = report.max_residual < 1e-6 && report.points_checked > 0;
        return report;
    }
};

}  // namespace

std::vector<RuleReport> check_rules(double alpha, const std::vector<CalcFunction>& corpus,
                                    const std::vector<double>& points,
                                    const ConfCalcConfig& cfg) {
    std::vector<RuleReport> out;
    auto dalpha = [&](const RealFn& f, double t) { return conf_diff_numeric(f, t, alpha, cfg); };

    // Composite rules difference integrals; a larger limit step keeps the
    // quadrature noise out of the quotient.
    ConfCalcConfig composite = cfg;
    composite.eps0 = 1e-4;
    composite.richardson_levels = 3;
    composite.quad_abs_tol = 1e-13;
    composite.quad_rel_tol = 1e-13;

    {  // Theorem rule 1: linearity with fixed weights.
        RuleAccumulator acc;
        acc.report = {"linearity", alpha, 0, 0, 0, false};
        const double ca = 2.0, cb = -3.0;
        for (size_t i = 0; i + 1 < corpus.size(); ++i) {
            const CalcFunction& f = corpus[i];
            const CalcFunction& g = corpus[i + 1];
            const RealFn mix = [&](double v) { return ca * f.f(v) + cb * g.f(v); };
            for (double t : points)
                acc.note(dalpha(mix, t), ca * dalpha(f.f, t) + cb * dalpha(g.f, t));
        }
        out.push_back(acc.finish());
    }
    {  // Theorem rule 2: power rule against the closed form p t^(p-alpha).
        RuleAccumulator acc;
        acc.report = {"power_rule", alpha, 0, 0, 0, false};
        for (double p : {2.0, 0.5, -1.0, 3.5}) {
            const RealFn f = [p](double v) { return std::pow(v, p); };
            for (double t : points) acc.note(dalpha(f, t), p * std::pow(t, p - alpha));
        }
        out.push_back(acc.finish());
    }
    {  // Theorem rule 3: constants.
        RuleAccumulator acc;
        acc.report = {"constant_rule", alpha, 0, 0, 0, false};
        const RealFn f = [](double) { return 4.25; };
        for (double t : points) acc.note(dalpha(f, t), 0.0);
        out.push_back(acc.finish());
    }
    {  // Theorem rule 4: product rule.
        RuleAccumulator acc;
        acc.report = {"product_rule", alpha, 0, 0, 0, false};
        for (size_t i = 0; i + 1 < corpus.size(); ++i) {
            const CalcFunction& f = corpus[i];
            const CalcFunction& g = corpus[i + 1];
            const RealFn prod = [&](double v) { return f.f(v) * g.f(v); };
            for (double t : points)
                acc.note(dalpha(prod, t), f.f(t) * dalpha(g.f, t) + g.f(t) * dalpha(f.f, t));
        }
        out.push_back(acc.finish());
    }
    {  // Theorem rule 5: quotient rule (denominator bounded away from zero).
        RuleAccumulator acc;
        acc.report = {"quotient_rule", alpha, 0, 0, 0, false};
        for (size_t i = 0; i + 1 < corpus.size(); ++i) {
            const CalcFunction& f = corpus[i];
            const CalcFunction& g = corpus[i + 1];
            for (double t : points) {
                if (std::abs(g.f(t)) < 0.1) {
                    acc.skip();
                    continue;
                }
                const RealFn q = [&](double v) { return f.f(v) / g.f(v); };
                const double gv = g.f(t);
                acc.note(dalpha(q, t),
                         (gv * dalpha(f.f, t) - f.f(t) * dalpha(g.f, t)) / (gv * gv));
            }
        }
        out.push_back(acc.finish());
    }
    {  // Theorem rule 6: t^(1-alpha) f'.
        RuleAccumulator acc;
        acc.report = {"derivative_form", alpha, 0, 0, 0, false};
        for (const CalcFunction& f : corpus)
            for (double t : points)
                acc.note(dalpha(f.f, t), std::pow(t, 1.0 - alpha) * f.df(t));
        out.push_back(acc.finish());
    }
    {  // Theorem: D I f = f.
        RuleAccumulator acc;
        acc.report = {"inverse_DI", alpha, 0, 0, 0, false};
        for (const CalcFunction& f : corpus) {
            const RealFn integral = [&](double v) {
                return conf_integrate_numeric(f.f, v, alpha, composite);
            };
            for (double t : points)
                acc.note(conf_diff_numeric(integral, t, alpha, composite), f.f(t));
        }
        out.push_back(acc.finish());
    }
    {  // Lemma: I D f = f - f(0).
        RuleAccumulator acc;
        acc.report = {"inverse_ID", alpha, 0, 0, 0, false};
        ConfCalcConfig loose = composite;
        loose.quad_abs_tol = 1e-8;
        for (const CalcFunction& f : corpus) {
            const RealFn deriv = [&](double v) { return conf_diff_numeric(f.f, v, alpha, loose); };
            for (double t : points)
                acc.note(conf_integrate_numeric(deriv, t, alpha, loose), f.f(t) - f.f0);
        }
        out.push_back(acc.finish());
    }
    {  // Chain rule with the [g]^(alpha-1) factor; needs g > 0.
        RuleAccumulator acc;
        acc.report = {"chain_rule_scaled", alpha, 0, 0, 0, false};
        for (size_t i = 0; i + 1 < corpus.size(); ++i) {
            const CalcFunction& f = corpus[i];
            const CalcFunction& g = corpus[i + 1];
            for (double t : points) {
                const double gv = g.f(t);
                if (!g.positive_valued || gv <= 0) {
                    acc.skip();
                    continue;
                }
                const RealFn comp = [&](double v) { return f.f(g.f(v)); };
                const double lhs = dalpha(comp, t);
                const double rhs =
                    dalpha(f.f, gv) * dalpha(g.f, t) * std::pow(gv, alpha - 1.0);
                acc.note(lhs, rhs);
            }
        }
        out.push_back(acc.finish());
    }
    {  // Chain rule through the classical derivative of the outer function.
        RuleAccumulator acc;
        acc.report = {"chain_rule_plain", alpha, 0, 0, 0, false};
        for (size_t i = 0; i + 1 < corpus.size(); ++i) {
            const CalcFunction& f = corpus[i];
            const CalcFunction& g = corpus[i + 1];
            const RealFn comp = [&](double v) { return f.f(g.f(v)); };
            for (double t : points)
                acc.note(dalpha(comp, t), f.df(g.f(t)) * dalpha(g.f, t));
        }
        out.push_back(acc.finish());
    }
    return out;
}

}  // namespace confsym
