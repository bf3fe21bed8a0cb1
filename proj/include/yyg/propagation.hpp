#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "yyg/graph.hpp"
#include "yyg/negative.hpp"

namespace yyg {

/// Knobs of the lower-level embedding energy and its unrolled descent.
/// alpha scales the update; the effective gradient step is alpha/2.
struct PropagationConfig {
    double lambda = 1.0;
    Eigen::VectorXd lambda_k;  // per-negative-graph weights, length K
    bool lambda_k_learnable = false;
    double gamma = 0.1;
    double alpha = 0.5;
    int T = 8;
    int K = 1;
    bool lower_bound_enabled = true;

    static PropagationConfig defaults(int K = 1);
    void validate() const;
    double lambda_k_mean() const { return lambda_k.mean(); }
};

struct EmbeddingState {
    Eigen::MatrixXd Y;
    int t = 0;
    std::vector<double> q_trace;  // Q^(0) .. Q^(t-1), one value per applied step
};

double stable_sigmoid(double x);
double stable_softplus(double x);

/// Q = gamma*|E| - weighted combined negative trace. For K=1 this is the
/// plain gamma*|E| - tr[Y^T Lneg_norm Y]; for K>1 each graph's trace is
/// weighted by lambda_k / mean(lambda_k) so equal weights reduce to the
/// merged-graph trace.
double compute_Q(const Eigen::MatrixXd& Y, const NegativeGraphSet& negset,
                 const PropagationConfig& cfg, long long num_pos_edges);

/// Monitored energy of the unrolled iteration:
///   sum_i ||y_i - fx_i||^2 / max(deg_i + negdeg_i, 1)
///   + lambda * tr[Y^T Lpos_norm Y]
///   + (mean(lambda_k)/K) * softplus(Q)            (bound enabled)
///   - (1/K) * sum_k lambda_k^k tr[Y^T Lneg_norm_k Y]  (bound disabled)
/// Its exact gradient is the update direction used by propagate_step.
double energy(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX, const CsrGraph& g_train,
              const NegativeGraphSet& negset, const PropagationConfig& cfg);

/// Gradient of energy() with respect to Y (dense result).
Eigen::MatrixXd energy_gradient(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX,
                                const CsrGraph& g_train, const NegativeGraphSet& negset,
                                const PropagationConfig& cfg);

/// One unrolled layer: Y <- Y - (alpha/2) * grad(energy), evaluated with the
/// sigmoid gate at the incoming Q. Appends Q to the trace.
EmbeddingState propagate_step(const EmbeddingState& state, const Eigen::MatrixXd& fX,
                              const CsrGraph& g_train, const NegativeGraphSet& negset,
                              const PropagationConfig& cfg);

/// T layers from Y^(0) = fX. Optional trace stream receives one
/// "t, energy, Q, sigma(Q)" line per layer.
EmbeddingState forward(const Eigen::MatrixXd& fX, const CsrGraph& g_train,
                       const NegativeGraphSet& negset, const PropagationConfig& cfg,
                       std::ostream* trace = nullptr);

/// Quadratic (no softplus, unnormalized Laplacians) energy and its gradient
/// step; the closed-form solvable variant used by the convergence checks.
double quadratic_energy(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX,
                        const CsrGraph& g_train, const NegativeGraphSet& negset,
                        const PropagationConfig& cfg);
Eigen::MatrixXd quadratic_step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX,
                               const CsrGraph& g_train, const NegativeGraphSet& negset,
                               const PropagationConfig& cfg);

/// Step bound and convexity verdict for the quadratic variant, from the
/// system matrix M = I + lambda*L - (1/K) sum_k lambda_k^k Lneg_k:
/// alpha_max = 1/||M||_F; convex iff 1 + lambda*eigmin(L) - eigmax(N) > 0
/// with N the combined weighted negative Laplacian.
struct StepSizeBound {
    double alpha_max = 0.0;
    bool convex = false;
    double hessian_min_bound = 0.0;  // 1 + lambda*eigmin(L) - eigmax(N)
};
StepSizeBound step_size_bound(const CsrGraph& g_train, const NegativeGraphSet& negset,
                              const PropagationConfig& cfg);

/// Exact minimizer of the quadratic variant by dense solve of M Y = fX.
/// Throws CheckError when the system is not positive definite.
Eigen::MatrixXd closed_form_minimizer(const Eigen::MatrixXd& fX, const CsrGraph& g_train,
                                      const NegativeGraphSet& negset, const PropagationConfig& cfg);

/// Dense system matrix of the quadratic variant (n <= 2000 guard inside).
Eigen::MatrixXd quadratic_system_matrix(const CsrGraph& g_train, const NegativeGraphSet& negset,
                                        const PropagationConfig& cfg);

// Shared pieces, also used by the autodiff propagate op.
namespace detail {
/// 1 / max(deg_i + negdeg_i, 1)
Eigen::VectorXd fit_scale(const CsrGraph& g_train, const NegativeGraphSet& negset);
/// Diagonal of the normalized positive Laplacian: 1 if deg_i > 0 else 0.
Eigen::VectorXd pos_lap_diag(const CsrGraph& g_train);
/// Diagonal of graph k's normalized negative Laplacian: deg_k(i)/max(negdeg_i,1).
Eigen::VectorXd neg_lap_diag(const NegativeGraphSet& negset, int k);
/// Lnorm_k applied to Y (diag part minus normalized adjacency part).
Eigen::MatrixXd neg_lap_apply(const NegativeGraphSet& negset, int k, const Eigen::MatrixXd& Y);
}  // namespace detail

}  // namespace yyg
