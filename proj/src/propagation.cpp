#include "yyg/propagation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>

#include "yyg/errors.hpp"

namespace yyg {

PropagationConfig PropagationConfig::defaults(int K) {
    PropagationConfig cfg;
    cfg.K = K;
    cfg.lambda_k = Eigen::VectorXd::Ones(K);
    return cfg;
}

void PropagationConfig::validate() const {
    if (T < 1) throw ConfigError("prop.T must be >= 1");
    if (K < 1) throw ConfigError("prop.K must be >= 1");
    if (alpha <= 0) throw ConfigError("prop.alpha must be > 0");
    if (lambda < 0) throw ConfigError("prop.lambda must be >= 0");
    if (lambda_k.size() != K) throw ConfigError("prop.lambda_k must have K entries");
}

double stable_sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

double stable_softplus(double x) {
    if (x > 0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

namespace detail {

Eigen::VectorXd fit_scale(const CsrGraph& g_train, const NegativeGraphSet& negset) {
    Eigen::VectorXd r(g_train.num_nodes);
    for (int i = 0; i < g_train.num_nodes; ++i) {
        int d = g_train.degree(i) + negset.combined_degrees[i];
        r[i] = 1.0 / static_cast<double>(d > 0 ? d : 1);
    }
    return r;
}

Eigen::VectorXd pos_lap_diag(const CsrGraph& g_train) {
    Eigen::VectorXd j(g_train.num_nodes);
    for (int i = 0; i < g_train.num_nodes; ++i) j[i] = g_train.degree(i) > 0 ? 1.0 : 0.0;
    return j;
}

Eigen::VectorXd neg_lap_diag(const NegativeGraphSet& negset, int k) {
    const CsrGraph& ng = negset.graphs[static_cast<size_t>(k)];
    Eigen::VectorXd d(ng.num_nodes);
    for (int i = 0; i < ng.num_nodes; ++i) {
        int dk = negset.combined_degrees[i];
        d[i] = static_cast<double>(ng.degree(i)) / static_cast<double>(dk > 0 ? dk : 1);
    }
    return d;
}

Eigen::MatrixXd neg_lap_apply(const NegativeGraphSet& negset, int k, const Eigen::MatrixXd& Y) {
    const CsrGraph& ng = negset.graphs[static_cast<size_t>(k)];
    Eigen::MatrixXd out = neg_lap_diag(negset, k).asDiagonal() * Y;
    out.noalias() -= normalized_adj_apply(ng, Y, negset.combined_degrees);
    return out;
}

}  // namespace detail

double compute_Q(const Eigen::MatrixXd& Y, const NegativeGraphSet& negset,
                 const PropagationConfig& cfg, long long num_pos_edges) {
    cfg.validate();
    if (negset.K() != cfg.K) throw DataError("compute_Q: negative set size != cfg.K");
    if (Y.rows() != negset.num_nodes()) throw DataError("compute_Q: row count mismatch");
    const double mean_w = cfg.lambda_k_mean();
    double combined = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        double t_k = laplacian_quadratic(negset.graphs[static_cast<size_t>(k)], Y, negset.combined_degrees);
        double w = mean_w != 0.0 ? cfg.lambda_k[k] / mean_w : 1.0;
        combined += w * t_k;
    }
    return cfg.gamma * static_cast<double>(num_pos_edges) - combined;
}

double energy(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX, const CsrGraph& g_train,
              const NegativeGraphSet& negset, const PropagationConfig& cfg) {
    if (Y.rows() != fX.rows() || Y.cols() != fX.cols()) throw DataError("energy: shape mismatch");
    if (Y.rows() != g_train.num_nodes) throw DataError("energy: row count mismatch");
    const Eigen::VectorXd r = detail::fit_scale(g_train, negset);
    double fit = (r.cwiseSqrt().asDiagonal() * (Y - fX)).squaredNorm();
    double pos = cfg.lambda * laplacian_quadratic(g_train, Y, degrees(g_train));
    double neg;
    if (cfg.lower_bound_enabled) {
        double q = compute_Q(Y, negset, cfg, g_train.num_edges);
        neg = cfg.lambda_k_mean() / static_cast<double>(cfg.K) * stable_softplus(q);
    } else {
        neg = 0.0;
        for (int k = 0; k < cfg.K; ++k)
            neg -= cfg.lambda_k[k] / static_cast<double>(cfg.K) *
                   laplacian_quadratic(negset.graphs[static_cast<size_t>(k)], Y, negset.combined_degrees);
    }
    return fit + pos + neg;
}

Eigen::MatrixXd energy_gradient(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX,
                                const CsrGraph& g_train, const NegativeGraphSet& negset,
                                const PropagationConfig& cfg) {
    const Eigen::VectorXd r = detail::fit_scale(g_train, negset);
    const Eigen::VectorXd j = detail::pos_lap_diag(g_train);

    Eigen::MatrixXd grad = 2.0 * (r.asDiagonal() * (Y - fX));
    grad.noalias() += 2.0 * cfg.lambda * (j.asDiagonal() * Y);
    grad.noalias() -= 2.0 * cfg.lambda * normalized_adj_apply(g_train, Y);

    double gate = 1.0;
    if (cfg.lower_bound_enabled)
        gate = stable_sigmoid(compute_Q(Y, negset, cfg, g_train.num_edges));
    for (int k = 0; k < cfg.K; ++k) {
        double c = 2.0 * cfg.lambda_k[k] / static_cast<double>(cfg.K) * gate;
        grad.noalias() -= c * detail::neg_lap_apply(negset, k, Y);
    }
    return grad;
}

EmbeddingState propagate_step(const EmbeddingState& state, const Eigen::MatrixXd& fX,
                              const CsrGraph& g_train, const NegativeGraphSet& negset,
                              const PropagationConfig& cfg) {
    cfg.validate();
    if (!state.Y.allFinite()) throw DivergenceError("propagate_step: non-finite embedding state");

    const double q = compute_Q(state.Y, negset, cfg, g_train.num_edges);
    const double gate = cfg.lower_bound_enabled ? stable_sigmoid(q) : 1.0;
    const Eigen::VectorXd r = detail::fit_scale(g_train, negset);
    const Eigen::VectorXd j = detail::pos_lap_diag(g_train);

    Eigen::MatrixXd dir = r.asDiagonal() * (state.Y - fX);
    dir.noalias() += cfg.lambda * (j.asDiagonal() * state.Y);
    dir.noalias() -= cfg.lambda * normalized_adj_apply(g_train, state.Y);
    for (int k = 0; k < cfg.K; ++k) {
        double c = cfg.lambda_k[k] / static_cast<double>(cfg.K) * gate;
        dir.noalias() -= c * detail::neg_lap_apply(negset, k, state.Y);
    }

    EmbeddingState next;
    next.Y = state.Y - cfg.alpha * dir;
    next.t = state.t + 1;
    next.q_trace = state.q_trace;
    next.q_trace.push_back(q);
    return next;
}

EmbeddingState forward(const Eigen::MatrixXd& fX, const CsrGraph& g_train,
                       const NegativeGraphSet& negset, const PropagationConfig& cfg,
                       std::ostream* trace) {
    cfg.validate();
    EmbeddingState state;
    state.Y = fX;
    state.t = 0;
    for (int t = 0; t < cfg.T; ++t) {
        if (trace) {
            double e = energy(state.Y, fX, g_train, negset, cfg);
            double q = compute_Q(state.Y, negset, cfg, g_train.num_edges);
            (*trace) << t << ", " << e << ", " << q << ", " << stable_sigmoid(q) << '\n';
        }
        state = propagate_step(state, fX, g_train, negset, cfg);
    }
    return state;
}

double quadratic_energy(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX,
                        const CsrGraph& g_train, const NegativeGraphSet& negset,
                        const PropagationConfig& cfg) {
    const Eigen::VectorXi ones_pos = Eigen::VectorXi::Ones(g_train.num_nodes);
    double e = (Y - fX).squaredNorm();
    e += cfg.lambda * laplacian_quadratic(g_train, Y, ones_pos);
    for (int k = 0; k < cfg.K; ++k)
        e -= cfg.lambda_k[k] / static_cast<double>(cfg.K) *
             laplacian_quadratic(negset.graphs[static_cast<size_t>(k)], Y, ones_pos);
    return e;
}

Eigen::MatrixXd quadratic_step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& fX,
                               const CsrGraph& g_train, const NegativeGraphSet& negset,
                               const PropagationConfig& cfg) {
    const Eigen::VectorXi ones = Eigen::VectorXi::Ones(g_train.num_nodes);
    const Eigen::VectorXd dpos = degrees(g_train).cast<double>();

    Eigen::MatrixXd dir = Y - fX;
    dir.noalias() += cfg.lambda * (dpos.asDiagonal() * Y);
    dir.noalias() -= cfg.lambda * normalized_adj_apply(g_train, Y, ones);
    for (int k = 0; k < cfg.K; ++k) {
        const CsrGraph& ng = negset.graphs[static_cast<size_t>(k)];
        const double c = cfg.lambda_k[k] / static_cast<double>(cfg.K);
        dir.noalias() -= c * (degrees(ng).cast<double>().asDiagonal() * Y);
        dir.noalias() += c * normalized_adj_apply(ng, Y, ones);
    }
    return Y - cfg.alpha * dir;
}

Eigen::MatrixXd quadratic_system_matrix(const CsrGraph& g_train, const NegativeGraphSet& negset,
                                        const PropagationConfig& cfg) {
    const int n = g_train.num_nodes;
    if (n > 2000) throw CheckError("quadratic_system_matrix: n > 2000");
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        M(i, i) += cfg.lambda * g_train.degree(i);
        for (const int* p = g_train.neighbors_begin(i); p != g_train.neighbors_end(i); ++p)
            M(i, *p) -= cfg.lambda;
    }
    for (int k = 0; k < cfg.K; ++k) {
        const CsrGraph& ng = negset.graphs[static_cast<size_t>(k)];
        const double c = cfg.lambda_k[k] / static_cast<double>(cfg.K);
        for (int i = 0; i < n; ++i) {
            M(i, i) -= c * ng.degree(i);
            for (const int* p = ng.neighbors_begin(i); p != ng.neighbors_end(i); ++p) M(i, *p) += c;
        }
    }
    return M;
}

StepSizeBound step_size_bound(const CsrGraph& g_train, const NegativeGraphSet& negset,
                              const PropagationConfig& cfg) {
    cfg.validate();
    StepSizeBound out;
    const int n = g_train.num_nodes;
    if (n <= 2000) {
        const Eigen::MatrixXd M = quadratic_system_matrix(g_train, negset, cfg);
        out.alpha_max = 1.0 / M.norm();

        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            L(i, i) = g_train.degree(i);
            for (const int* p = g_train.neighbors_begin(i); p != g_train.neighbors_end(i); ++p)
                L(i, *p) = -1.0;
        }
        for (int k = 0; k < cfg.K; ++k) {
            const CsrGraph& ng = negset.graphs[static_cast<size_t>(k)];
            const double c = cfg.lambda_k[k] / static_cast<double>(cfg.K);
            for (int i = 0; i < n; ++i) {
                N(i, i) += c * ng.degree(i);
                for (const int* p = ng.neighbors_begin(i); p != ng.neighbors_end(i); ++p) N(i, *p) -= c;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_l(L, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_n(N, Eigen::EigenvaluesOnly);
        const double delta_min_pos = es_l.eigenvalues().minCoeff();
        const double delta_max_neg = es_n.eigenvalues().maxCoeff();
        out.hessian_min_bound = 1.0 + cfg.lambda * delta_min_pos - delta_max_neg;
    } else {
        // Power-iteration fallback for large graphs: Frobenius norm of M by
        // entry accumulation and eigmax(N) by iteration on the sparse apply.
        const Eigen::VectorXi ones = Eigen::VectorXi::Ones(n);
        double fro2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double diag = 1.0 + cfg.lambda * g_train.degree(i);
            for (int k = 0; k < cfg.K; ++k)
                diag -= cfg.lambda_k[k] / static_cast<double>(cfg.K) *
                        negset.graphs[static_cast<size_t>(k)].degree(i);
            fro2 += diag * diag;
        }
        fro2 += cfg.lambda * cfg.lambda * 2.0 * static_cast<double>(g_train.num_edges);
        for (int k = 0; k < cfg.K; ++k) {
            // Overlaps between distinct negative graphs are rare; treat their
            // off-diagonal contributions independently (upper bound is exact
            // when no two negative graphs share an edge).
            const double c = cfg.lambda_k[k] / static_cast<double>(cfg.K);
            fro2 += c * c * 2.0 * static_cast<double>(negset.graphs[static_cast<size_t>(k)].num_edges);
        }
        out.alpha_max = 1.0 / std::sqrt(fro2);

        Eigen::MatrixXd v = Eigen::MatrixXd::Random(n, 1);
        v /= v.norm();
        double eig = 0.0;
        for (int it = 0; it < 200; ++it) {
            Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, 1);
            for (int k = 0; k < cfg.K; ++k) {
                const CsrGraph& ng = negset.graphs[static_cast<size_t>(k)];
                const double c = cfg.lambda_k[k] / static_cast<double>(cfg.K);
                w.noalias() += c * (degrees(ng).cast<double>().asDiagonal() * v);
                w.noalias() -= c * normalized_adj_apply(ng, v, ones);
            }
            double nrm = w.norm();
            if (nrm < 1e-300) break;
            eig = nrm;
            v = w / nrm;
        }
        out.hessian_min_bound = 1.0 - eig;  // eigmin(L) == 0 for any graph Laplacian
    }
    out.convex = out.hessian_min_bound > 0.0;
    return out;
}

Eigen::MatrixXd closed_form_minimizer(const Eigen::MatrixXd& fX, const CsrGraph& g_train,
                                      const NegativeGraphSet& negset, const PropagationConfig& cfg) {
    const Eigen::MatrixXd M = quadratic_system_matrix(g_train, negset, cfg);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw CheckError("closed_form_minimizer: system not positive definite (non-convex configuration)");
    return M.ldlt().solve(fX);
}

}  // namespace yyg
