#pragma once

#include <cstdint>
#include <vector>

#include "yyg/graph.hpp"

namespace yyg {

enum class SampleMode { global_uniform, source_uniform };

SampleMode parse_sample_mode(const std::string& name);
std::string to_string(SampleMode mode);

/// K sampled negative graphs over the nodes of the training graph, one
/// negative edge per positive edge each, plus the combined degree diagonal
/// sum_k deg_k used to normalize every member graph.
struct NegativeGraphSet {
    std::vector<CsrGraph> graphs;
    Eigen::VectorXi combined_degrees;
    std::uint64_t epoch_seed = 0;

    int K() const { return static_cast<int>(graphs.size()); }
    int num_nodes() const { return graphs.empty() ? 0 : graphs.front().num_nodes; }
    void validate_against(const CsrGraph& g_train) const;  // throws CheckError
};

/// One negative graph with exactly one negative edge per positive edge.
/// global_uniform draws node pairs uniformly over non-edges; source_uniform
/// keeps the source of each positive edge and redraws the destination.
/// Collisions with positive edges (or self-loops) are rejection-sampled,
/// capped at 100*n attempts per slot.
CsrGraph sample_negative_graph(const CsrGraph& g_train, SampleMode mode, std::uint64_t seed);

NegativeGraphSet sample_negative_set(const CsrGraph& g_train, int K, SampleMode mode,
                                     std::uint64_t epoch_seed);

/// Assembles a set from explicit edge lists (tests, debugging).
NegativeGraphSet negative_set_from_edges(int num_nodes,
                                         const std::vector<EdgeList>& per_graph_edges);

/// Per-epoch negatives for the supervision loss: per train edge (i,j), N
/// pairs (i, j') avoiding every positive edge of the full split.
struct SupervisionNegatives {
    std::vector<Edge> pairs;  // N consecutive entries per train edge
    int per_edge = 1;
    std::uint64_t seed = 0;
};

SupervisionNegatives sample_supervision_negatives(const EdgeSplit& split, int num_nodes, int N,
                                                  std::uint64_t seed);

}  // namespace yyg
