#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confsym/equations.hpp"
#include "confsym/odesolve.hpp"

namespace confsym {

// Affine connection between consecutive reduced equations, written in the
// s-variables: s_new = A * s_old + C and F_old(s_old) = V * F_new(s_new).
struct ScaleMap {
    Expr A, C, V;  // symbolic in the parameters
    std::string from_label, to_label;
};

enum class LinkKind { Scale, FirstIntegral, Miura, ColeHopf, P34 };

struct ChainLink {
    LinkKind kind;
    ScaleMap scale;  // meaningful for Scale links
};

// Numeric defaults of one reduction pipeline (overridable per run).
struct PipelineParams {
    double alpha = 0.7, beta = 0.6;
    double a = 1, b = 1;
    double gamma = 1, mu = 1;
    double sigma = -1.0 / 6.0;
};

// Similarity transformation u = P(t) Psi(zeta(t,x)) + Q(t); substituting it
// into the equivalent classical form yields prefactor * (reduced equation).
struct ReductionMap {
    Expr zeta, P, Q, prefactor;
    bool classical = false;  // reduced chain in zeta itself rather than zeta^alpha/alpha
};

struct Pipeline {
    std::string key;
    EquationId eq;
    VectorField generator;
    ReductionMap map;
    std::vector<CanonicalODE> chain;
    std::vector<ChainLink> links;
    PipelineParams defaults;
};

// All seven reduction pipelines.
const std::vector<Pipeline>& catalog();
const Pipeline& find_pipeline(const std::string& key);
std::vector<const Pipeline*> match_pipelines(const std::string& prefix);

// ---- verification -------------------------------------------------------------

struct ReduceCheckReport {
    std::string key;
    double alpha = 1, beta = 1;
    double max_abs = 0;
    bool pass = false;
};

// Substitutes the similarity form into the PDE's equivalent classical form,
// changes variables, and zero-tests the difference against
// prefactor * reduced equation at sampled points.
ReduceCheckReport reduce_check(const Pipeline& pl, double alpha, double beta,
                               std::uint64_t seed = kDefaultSeed);

// Generator invariance of the similarity map: V(zeta) = 0 and invariance of
// the solution form, both under the zero-test.
bool map_invariance_ok(const Pipeline& pl, std::uint64_t seed = kDefaultSeed);

// Looks up the scaling link with the given source and instantiates the target
// together with the change-of-variables record.
std::optional<std::pair<CanonicalODE, ScaleMap>> scale_to_canonical(const CanonicalODE& from);

// ---- solution correspondences ---------------------------------------------------

// Transformed view of a solution: value and first three derivatives computed
// from closed-form expressions over the source solution. Points where |guard|
// falls below the tolerance are flagged as NaN rather than interpolated.
OdeSolution map_solution(const OdeSolution& src, const CanonicalODE& target_ode,
                         const Expr& value_expr, const Expr& guard, double guard_tolerance);

// W = -D Phi - Phi^2 (forward) and Phi = (D W + gamma) / (2W - s) (inverse).
OdeSolution miura_forward(const OdeSolution& fp2_solution, double gamma);
OdeSolution miura_inverse(const OdeSolution& k2_solution, double gamma);

// Theta = (W - s/2) / (4 gamma + 1); throws for gamma = -1/4. The residual of
// the target equation is reported, not asserted.
struct P34Report {
    double gamma = 0, sigma = -1.0 / 6.0;
    double max_residual = 0, mean_residual = 0;
    int samples = 0, flagged = 0;
    bool finite = false;
};
OdeSolution p34_map(const OdeSolution& k2_solution, double gamma);
P34Report p34_residual_report(const OdeSolution& k2_solution, double gamma, int samples = 64);

// Psi = (2b/a) * Phi' / Phi maps solutions of the linear equation to the
// fractional Riccati; the Riccati constant of the mapped solution is
// gamma_eff = -(2b/a) * gamma_linear.
OdeSolution cole_hopf(const OdeSolution& linear_solution, double a, double b);

// ---- solving and lifting --------------------------------------------------------

struct LiftFrame {
    double A = 1, C = 0, V = 1;  // s_ode = A * zeta^p / p + C, Psi = V * F(s_ode)
    double p = 1;
};

struct SolvedPipeline {
    const Pipeline* pipeline = nullptr;
    PipelineParams params;
    OdeSolution solution;  // in the frame below; supplies Psi(zeta) for lifts
    LiftFrame frame;
    std::optional<P34Report> p34;  // populated for the FP_34 chain
};

// Integrates the pipeline's final equation over an s-span covering the given
// zeta interval and wires the correspondence maps back to the lift frame.
SolvedPipeline solve_pipeline(const Pipeline& pl, const PipelineParams& params, double zeta_lo,
                              double zeta_hi, double tol = 1e-11);

// Dense solution of the PDE on a positive rectangular grid.
struct GridSolution {
    std::string pipeline_key;
    std::vector<double> ts, xs;  // axes
    // Row-major [it * nx + ix]; NaN at flagged nodes.
    std::vector<double> u, u_t, u_x, u_xx, u_xxx;
    std::vector<std::uint8_t> flagged;
    size_t nt() const { return ts.size(); }
    size_t nx() const { return xs.size(); }
};

// Lifts the reduced solution back to u(t, x) with all partial derivatives the
// equation needs, by exact chain rule through the similarity form.
GridSolution lift(const SolvedPipeline& sp, double t_lo, double t_hi, double x_lo, double x_hi,
                  size_t nt, size_t nx);

// Convenience: zeta range of a rectangle (monotone in each axis, so corners
// suffice), padded slightly.
std::pair<double, double> zeta_range(const Pipeline& pl, const PipelineParams& params, double t_lo,
                                     double t_hi, double x_lo, double x_hi);

}  // namespace confsym
