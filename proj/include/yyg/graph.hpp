#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace yyg {

using Edge = std::pair<int, int>;
using EdgeList = std::vector<Edge>;

/// Undirected simple graph in compressed sparse row form. Both directions of
/// every edge are stored; num_edges counts undirected edges. Neighbor lists
/// are sorted, deduplicated and self-loop free.
struct CsrGraph {
    int num_nodes = 0;
    long long num_edges = 0;
    std::vector<int> row_offsets;  // length num_nodes + 1
    std::vector<int> col_indices;  // length 2 * num_edges, sorted per row

    int degree(int i) const { return row_offsets[i + 1] - row_offsets[i]; }
    const int* neighbors_begin(int i) const { return col_indices.data() + row_offsets[i]; }
    const int* neighbors_end(int i) const { return col_indices.data() + row_offsets[i + 1]; }
    bool has_edge(int i, int j) const;

    /// Canonical (i<j) undirected edge list.
    EdgeList edges() const;

    /// FNV-1a over node count and adjacency structure.
    std::uint64_t fingerprint() const;

    void validate() const;  // throws DataError on a broken invariant
};

/// Builds a CsrGraph from an arbitrary edge list: symmetrizes, deduplicates,
/// and drops self-loops. Node ids must lie in [0, num_nodes).
CsrGraph build_csr(int num_nodes, const EdgeList& edges);

/// Reads whitespace-separated "src dst" pairs, one edge per line. Node count
/// defaults to max id + 1. Malformed lines and out-of-range ids throw
/// DataError with the offending line number / id.
CsrGraph load_edge_list(const std::string& path, int num_nodes = -1);

void save_edge_list(const std::string& path, const EdgeList& edges);

Eigen::VectorXi degrees(const CsrGraph& g);

/// out[i] = sum_{j in N(i)} Y[j] / sqrt(dn(i) * dn(j)) with dn = degree_norm
/// and the zero-degree substitution dn(i)=0 -> 1. With dn = degrees(g) this
/// is the symmetric normalized adjacency product  D^{-1/2} A D^{-1/2} Y.
Eigen::MatrixXd normalized_adj_apply(const CsrGraph& g, const Eigen::MatrixXd& Y,
                                     const Eigen::VectorXi& degree_norm);
Eigen::MatrixXd normalized_adj_apply(const CsrGraph& g, const Eigen::MatrixXd& Y);

/// Edge-wise normalized Laplacian quadratic form
///   sum_{(i,j) in E} || y_i/sqrt(dn_i) - y_j/sqrt(dn_j) ||^2 ,
/// the trace tr[Y^T Lnorm Y] for the Laplacian of g normalized by the
/// caller-supplied degrees (pass all-ones for the unnormalized form).
double laplacian_quadratic(const CsrGraph& g, const Eigen::MatrixXd& Y,
                           const Eigen::VectorXi& degree_norm);

/// Dense node features, row i = features of node i.
struct FeatureMatrix {
    Eigen::MatrixXd data;
    int rows() const { return static_cast<int>(data.rows()); }
    int cols() const { return static_cast<int>(data.cols()); }
};

/// One node per line, comma-separated reals.
FeatureMatrix load_features(const std::string& path);
void save_features(const std::string& path, const FeatureMatrix& X);

/// Deterministic train/valid/test partition of the undirected edge set.
/// Canonical (i<j) edges; train/valid sizes are floor(ratio * |E|), test
/// takes the remainder.
struct EdgeSplit {
    EdgeList train_edges, valid_edges, test_edges;
    std::array<double, 3> ratios{0.7, 0.1, 0.2};
    std::uint64_t split_seed = 0;

    long long total() const {
        return static_cast<long long>(train_edges.size() + valid_edges.size() + test_edges.size());
    }
};

EdgeSplit split_edges(const CsrGraph& g, const std::array<double, 3>& ratios, std::uint64_t seed);

/// Graph containing only the given edges (the training graph).
CsrGraph graph_from_edges(int num_nodes, const EdgeList& edges);

void save_split_manifest(const std::string& path, const EdgeSplit& split);
EdgeSplit load_split_manifest(const std::string& path);

}  // namespace yyg
