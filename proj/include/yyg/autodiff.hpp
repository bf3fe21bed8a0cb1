#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "yyg/graph.hpp"
#include "yyg/negative.hpp"
#include "yyg/propagation.hpp"

namespace yyg::ad {

using Mat = Eigen::MatrixXd;

/// CSR view of a feature matrix for the first dense layer; keeps the
/// transpose for the backward product.
struct SparseFeatures {
    int rows = 0, cols = 0;
    std::vector<int> offs, idx;
    std::vector<double> vals;
    std::vector<int> t_offs, t_idx;
    std::vector<double> t_vals;

    static SparseFeatures from_dense(const Mat& X);
    double density() const;
    Mat multiply(const Mat& B) const;             // X * B
    Mat multiply_transposed(const Mat& G) const;  // X^T * G
};

/// Context shared by every unrolled propagation node of one forward pass.
/// The referenced graph/negative set must outlive the tape.
struct PropagateContext {
    const CsrGraph* g_train = nullptr;
    const NegativeGraphSet* negset = nullptr;
    PropagationConfig cfg;
    Eigen::VectorXd fit_scale;                 // 1/max(deg+negdeg,1)
    Eigen::VectorXd pos_diag;                  // diag of normalized positive Laplacian
    std::vector<Eigen::VectorXd> neg_diag;     // per-graph diag of normalized negative Laplacian

    static std::shared_ptr<PropagateContext> make(const CsrGraph& g, const NegativeGraphSet& negset,
                                                  const PropagationConfig& cfg);
};

/// Reverse-mode tape over dense matrices (scalars are 1x1). Records values on
/// the forward pass and replays registered ops in exact reverse order.
class Tape {
public:
    using Id = int;

    Id leaf(Mat value, bool requires_grad = false);
    Id scalar(double v, bool requires_grad = false);

    Id matmul(Id a, Id b);
    Id sparse_matmul(const SparseFeatures* X, Id b);
    Id add(Id a, Id b);
    Id sub(Id a, Id b);
    Id add_rowvec(Id a, Id bias);  // bias is 1 x d
    Id scale(Id a, double c);
    Id mul_scalar(Id a, Id s);  // s is 1x1
    Id relu(Id a);
    Id sigmoid(Id a);
    Id softplus(Id a);
    Id hadamard(Id a, Id b);
    Id gather_rows(Id a, std::vector<int> rows);
    Id sum_all(Id a);
    Id div(Id a, Id b);  // elementwise

    /// out[i] = sum_{j in N(i)} in[j] / sqrt(dn_i dn_j); symmetric, so the
    /// backward pass applies the same operator to the gradient.
    Id adj_apply(const CsrGraph* g, Eigen::VectorXi degree_norm, Id a);

    /// One fused unrolled layer (Eq.-exact update with the sigmoid gate
    /// evaluated at the incoming state). lambda_k_id < 0 uses the fixed
    /// weights from the context config.
    struct PropagateResult {
        Id out;
        double q;
    };
    PropagateResult propagate(Id y, Id fx, Id lambda_k_id,
                              const std::shared_ptr<PropagateContext>& ctx);

    const Mat& value(Id id) const { return nodes_[static_cast<size_t>(id)].value; }
    double scalar_value(Id id) const { return nodes_[static_cast<size_t>(id)].value(0, 0); }
    const Mat& grad(Id id) const;
    bool has_grad(Id id) const;
    void backward(Id loss);
    size_t size() const { return nodes_.size(); }

    void accumulate(Id id, const Mat& g);

private:
    struct Node {
        Mat value;
        Mat grad;
        bool requires_grad = false;
        bool grad_init = false;
        std::function<void(Tape&)> backprop;
    };
    std::vector<Node> nodes_;
    bool ran_backward_ = false;

    Id push(Mat value, bool requires_grad, std::function<void(Tape&)> backprop);
};

}  // namespace yyg::ad
