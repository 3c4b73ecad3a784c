#include "confsym/equations.hpp"

#include <stdexcept>

#include "confsym/parse.hpp"
#include "confsym/simplify.hpp"

namespace confsym {

std::string equation_name(EquationId id) {
    switch (id) {
        case EquationId::Kdv: return "kdv";
        case EquationId::Mkdv: return "mkdv";
        case EquationId::Burgers: return "burgers";
        case EquationId::Mburgers: return "mburgers";
    }
    return "?";
}

EquationId equation_from_name(const std::string& name) {
    if (name == "kdv") return EquationId::Kdv;
    if (name == "mkdv") return EquationId::Mkdv;
    if (name == "burgers") return EquationId::Burgers;
    if (name == "mburgers") return EquationId::Mburgers;
    throw std::invalid_argument("unknown equation '" + name + "'");
}

Expr EquationSpec::equivalent_form() const {
    switch (id) {
        case EquationId::Kdv:
            return parse(
                "t^(1-beta)*u_t + 6*x^(1-alpha)*u*u_x"
                " + (1-alpha)*(1-2*alpha)*x^(1-3*alpha)*u_x"
                " + 3*(1-alpha)*x^(2-3*alpha)*u_xx + x^(3-3*alpha)*u_xxx");
        case EquationId::Mkdv:
            return parse(
                "t^(1-beta)*u_t - 6*x^(1-alpha)*u^2*u_x"
                " + (1-alpha)*(1-2*alpha)*x^(1-3*alpha)*u_x"
                " + 3*(1-alpha)*x^(2-3*alpha)*u_xx + x^(3-3*alpha)*u_xxx");
        case EquationId::Burgers:
            return parse(
                "t^(1-beta)*u_t + a*x^(1-alpha)*u*u_x + b*(1-alpha)*x^(1-2*alpha)*u_x"
                " + b*x^(2-2*alpha)*u_xx");
        case EquationId::Mburgers:
            return parse(
                "t^(1-beta)*u_t + a*x^(1-alpha)*u^2*u_x + b*(1-alpha)*x^(1-2*alpha)*u_x"
                " + b*x^(2-2*alpha)*u_xx");
    }
    throw std::logic_error("bad equation id");
}

int EquationSpec::eliminated_symbol() const {
    return x_order() == 3 ? sym::u_xxx : sym::u_xx;
}

int EquationSpec::x_order() const {
    return (id == EquationId::Kdv || id == EquationId::Mkdv) ? 3 : 2;
}

Expr EquationSpec::eliminated_solved() const {
    const Expr form = equivalent_form();
    const int target = eliminated_symbol();
    const Expr coeff = diff(form, target);
    const Expr rest = substitute(form, {{target, constant(0)}});
    return simplify(quotient(negate(rest), coeff));
}

EvalEnv EquationSpec::param_env() const {
    EvalEnv env;
    env.bind(sym::alpha, alpha).bind(sym::beta, beta).bind(sym::a, a).bind(sym::b, b);
    return env;
}

namespace {
VectorField make_field(const char* xi, const char* tau, const char* eta, std::string label) {
    return VectorField{simplify(parse(xi)), simplify(parse(tau)), simplify(parse(eta)),
                       std::move(label)};
}
}  // namespace

std::vector<VectorField> basis_fields(EquationId id) {
    switch (id) {
        case EquationId::Kdv:
            return {
                make_field("0", "t^(1-beta)", "0", "V1"),
                make_field("x^(1-alpha)", "0", "0", "V2"),
                make_field("6*t^beta*x^(1-alpha)/beta", "0", "1", "V3"),
                make_field("-x/(2*alpha)", "-3*t/(2*beta)", "u", "V4"),
            };
        case EquationId::Mkdv:
            return {
                make_field("0", "t^(1-beta)", "0", "V1"),
                make_field("x^(1-alpha)", "0", "0", "V2"),
                make_field("x/alpha", "3*t/beta", "-u", "V3"),
            };
        case EquationId::Burgers:
            return {
                make_field("0", "t^(1-beta)", "0", "V1"),
                make_field("x^(1-alpha)", "0", "0", "V2"),
                make_field("a*t^beta*x^(1-alpha)/beta", "0", "1", "V3"),
                make_field("-x/alpha", "-2*t/beta", "u", "V4"),
                make_field("x*t^beta/(alpha*beta)", "t^(1+beta)/beta^2",
                           "-t^beta*u/beta + x^alpha/(a*alpha)", "V5"),
            };
        case EquationId::Mburgers:
            return {
                make_field("0", "t^(1-beta)", "0", "V1"),
                make_field("x^(1-alpha)", "0", "0", "V2"),
                make_field("2*x/alpha", "4*t/beta", "-u", "V3"),
            };
    }
    throw std::logic_error("bad equation id");
}

SymmetryFamily symmetry_family(EquationId id) {
    switch (id) {
        case EquationId::Kdv:
            return {id,
                    make_field("-c1/(2*alpha)*x + 6*c3/beta*t^beta*x^(1-alpha) + c4*x^(1-alpha)",
                               "-3*c1/(2*beta)*t + c2*t^(1-beta)", "c1*u + c3", "family@kdv"),
                    4};
        case EquationId::Mkdv:
            return {id,
                    make_field("-c1/alpha*x + c3*x^(1-alpha)", "-3*c1/beta*t + c2*t^(1-beta)",
                               "c1*u", "family@mkdv"),
                    3};
        case EquationId::Burgers:
            return {id,
                    make_field("c1*x*t^beta/(alpha*beta) - c2*x/alpha"
                               " + a*c3/beta*t^beta*x^(1-alpha) + c5*x^(1-alpha)",
                               "c1*t^(1+beta)/beta^2 - 2*c2*t/beta + c4*t^(1-beta)",
                               "(-c1*t^beta/beta + c2)*u + c1*x^alpha/(a*alpha) + c3",
                               "family@burgers"),
                    5};
        case EquationId::Mburgers:
            return {id,
                    make_field("-2*c1/alpha*x + c3*x^(1-alpha)", "-4*c1*t/beta + c2*t^(1-beta)",
                               "c1*u", "family@mburgers"),
                    3};
    }
    throw std::logic_error("bad equation id");
}

Expr symmetry_criterion(const EquationSpec& eq, const VectorField& v) {
    const Expr alpha = symbol(sym::alpha), beta = symbol(sym::beta);
    const Expr a_ = symbol(sym::a), b_ = symbol(sym::b);
    const Expr u = symbol(sym::u), x = symbol(sym::x), ux = symbol(sym::u_x);
    // The conformable space derivative of u written classically.
    const Expr du_alpha = power(x, constant(1) - alpha) * ux;

    const FractionalProlongation pr = fractional_prolongation(v, alpha, beta, eq.x_order());
    switch (eq.id) {
        case EquationId::Kdv:
            return simplify(constant(6) * v.eta * du_alpha + pr.eta_t_beta +
                            constant(6) * u * pr.eta_x_alpha + pr.eta_xxx_alpha);
        case EquationId::Mkdv:
            return simplify(constant(-12) * v.eta * u * du_alpha + pr.eta_t_beta -
                            constant(6) * u * u * pr.eta_x_alpha + pr.eta_xxx_alpha);
        case EquationId::Burgers:
            return simplify(a_ * v.eta * du_alpha + pr.eta_t_beta + a_ * u * pr.eta_x_alpha +
                            b_ * pr.eta_xx_alpha);
        case EquationId::Mburgers:
            return simplify(constant(2) * a_ * v.eta * u * du_alpha + pr.eta_t_beta +
                            a_ * u * u * pr.eta_x_alpha + b_ * pr.eta_xx_alpha);
    }
    throw std::logic_error("bad equation id");
}

CriterionEvaluator::CriterionEvaluator(const EquationSpec& eq, const VectorField& v)
    : eq_(eq),
      criterion_(symmetry_criterion(eq, v)),
      solved_(eq.eliminated_solved()),
      eliminated_(eq.eliminated_symbol()) {}

double CriterionEvaluator::residual(const JetPoint& p, const EvalEnv& extra) const {
    return residual_at(p, eq_.alpha, eq_.beta, eq_.a, eq_.b, extra);
}

double CriterionEvaluator::residual_at(const JetPoint& p, double alpha, double beta, double a,
                                       double b, const EvalEnv& extra) const {
    EvalEnv env = extra;
    env.bind(sym::alpha, alpha).bind(sym::beta, beta);
    env.bind(sym::a, a).bind(sym::b, b);
    p.bind(env);
    // Impose the equation: replace the highest derivative by its solved value.
    env.bind(eliminated_, eval(solved_, env));
    return eval(criterion_, env);
}

double max_criterion_residual(const EquationSpec& eq, const VectorField& v, int count,
                              std::uint64_t seed, const EvalEnv& extra) {
    const CriterionEvaluator evaluator(eq, v);
    Rng rng(seed);
    double worst = 0;
    for (int i = 0; i < count; ++i) {
        const JetPoint p = random_jet_point(rng);
        worst = std::max(worst, std::abs(evaluator.residual(p, extra)));
    }
    return worst;
}

}  // namespace confsym
