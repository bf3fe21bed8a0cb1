#include "yyg/negative.hpp"

#include <unordered_set>

#include "yyg/errors.hpp"
#include "yyg/rng.hpp"

namespace yyg {

SampleMode parse_sample_mode(const std::string& name) {
    if (name == "global_uniform") return SampleMode::global_uniform;
    if (name == "source_uniform") return SampleMode::source_uniform;
    throw ConfigError("unknown sampler mode: " + name);
}

std::string to_string(SampleMode mode) {
    return mode == SampleMode::global_uniform ? "global_uniform" : "source_uniform";
}

void NegativeGraphSet::validate_against(const CsrGraph& g_train) const {
    if (graphs.empty()) throw CheckError("negative set: empty");
    Eigen::VectorXi acc = Eigen::VectorXi::Zero(g_train.num_nodes);
    for (const auto& ng : graphs) {
        ng.validate();
        if (ng.num_nodes != g_train.num_nodes) throw CheckError("negative set: node count mismatch");
        for (int i = 0; i < ng.num_nodes; ++i) {
            acc[i] += ng.degree(i);
            for (const int* p = ng.neighbors_begin(i); p != ng.neighbors_end(i); ++p)
                if (g_train.has_edge(i, *p))
                    throw CheckError("negative set: negative edge duplicates a positive edge");
        }
    }
    if (combined_degrees.size() != g_train.num_nodes || (combined_degrees - acc).cwiseAbs().sum() != 0)
        throw CheckError("negative set: combined_degrees inconsistent");
}

namespace {

Eigen::VectorXi sum_degrees(const std::vector<CsrGraph>& graphs) {
    Eigen::VectorXi acc = Eigen::VectorXi::Zero(graphs.front().num_nodes);
    for (const auto& g : graphs) acc += degrees(g);
    return acc;
}

}  // namespace

CsrGraph sample_negative_graph(const CsrGraph& g_train, SampleMode mode, std::uint64_t seed) {
    const int n = g_train.num_nodes;
    const long long full = static_cast<long long>(n) * (n - 1) / 2;
    if (g_train.num_edges >= full)
        throw DataError("cannot sample negatives: graph is complete");

    Rng rng(seed);
    const long long cap = 100LL * n;
    EdgeList neg;
    neg.reserve(static_cast<size_t>(g_train.num_edges));
    for (int i = 0; i < n; ++i) {
        for (const int* p = g_train.neighbors_begin(i); p != g_train.neighbors_end(i); ++p) {
            if (i >= *p) continue;  // one slot per undirected positive edge
            long long attempts = 0;
            for (;;) {
                if (++attempts > cap)
                    throw DataError("negative sampling exceeded attempt cap for source " + std::to_string(i));
                int a, b;
                if (mode == SampleMode::global_uniform) {
                    a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                    b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                } else {
                    a = i;
                    b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                }
                if (a == b || g_train.has_edge(a, b)) continue;
                neg.emplace_back(a, b);
                break;
            }
        }
    }
    return build_csr(n, neg);
}

NegativeGraphSet sample_negative_set(const CsrGraph& g_train, int K, SampleMode mode,
                                     std::uint64_t epoch_seed) {
    if (K < 1) throw ConfigError("negative set: K must be >= 1");
    NegativeGraphSet set;
    set.epoch_seed = epoch_seed;
    set.graphs.reserve(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k)
        set.graphs.push_back(
            sample_negative_graph(g_train, mode, derive_seed(epoch_seed, static_cast<std::uint64_t>(k) + 1)));
    set.combined_degrees = sum_degrees(set.graphs);
    return set;
}

NegativeGraphSet negative_set_from_edges(int num_nodes, const std::vector<EdgeList>& per_graph_edges) {
    if (per_graph_edges.empty()) throw ConfigError("negative set: need at least one graph");
    NegativeGraphSet set;
    for (const auto& edges : per_graph_edges) set.graphs.push_back(build_csr(num_nodes, edges));
    set.combined_degrees = sum_degrees(set.graphs);
    return set;
}

SupervisionNegatives sample_supervision_negatives(const EdgeSplit& split, int num_nodes, int N,
                                                  std::uint64_t seed) {
    if (N < 1) throw ConfigError("supervision negatives: N must be >= 1");

    struct EdgeHash {
        size_t operator()(const Edge& e) const {
            return std::hash<long long>()((static_cast<long long>(e.first) << 32) ^ e.second);
        }
    };
    std::unordered_set<Edge, EdgeHash> positives;
    for (const auto* list : {&split.train_edges, &split.valid_edges, &split.test_edges})
        for (const auto& [a, b] : *list) positives.insert({std::min(a, b), std::max(a, b)});

    Rng rng(seed);
    const long long cap = 100LL * num_nodes;
    SupervisionNegatives out;
    out.per_edge = N;
    out.seed = seed;
    out.pairs.reserve(split.train_edges.size() * static_cast<size_t>(N));
    for (const auto& [i, j] : split.train_edges) {
        (void)j;
        for (int a = 0; a < N; ++a) {
            long long attempts = 0;
            for (;;) {
                if (++attempts > cap)
                    throw DataError("supervision negative sampling exceeded attempt cap");
                int b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(num_nodes)));
                if (b == i) continue;
                if (positives.count({std::min(i, b), std::max(i, b)})) continue;
                out.pairs.emplace_back(i, b);
                break;
            }
        }
    }
    return out;
}

}  // namespace yyg
