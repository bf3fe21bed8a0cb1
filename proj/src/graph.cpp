#include "yyg/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "yyg/errors.hpp"
#include "yyg/rng.hpp"

namespace yyg {

bool CsrGraph::has_edge(int i, int j) const {
    return std::binary_search(neighbors_begin(i), neighbors_end(i), j);
}

EdgeList CsrGraph::edges() const {
    EdgeList out;
    out.reserve(static_cast<size_t>(num_edges));
    for (int i = 0; i < num_nodes; ++i)
        for (const int* p = neighbors_begin(i); p != neighbors_end(i); ++p)
            if (i < *p) out.emplace_back(i, *p);
    return out;
}

std::uint64_t CsrGraph::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(num_nodes));
    for (int off : row_offsets) mix(static_cast<std::uint64_t>(off));
    for (int c : col_indices) mix(static_cast<std::uint64_t>(c));
    return h;
}

void CsrGraph::validate() const {
    if (static_cast<int>(row_offsets.size()) != num_nodes + 1)
        throw DataError("csr: row_offsets length mismatch");
    if (row_offsets.front() != 0 || row_offsets.back() != static_cast<int>(col_indices.size()))
        throw DataError("csr: row_offsets endpoints broken");
    if (static_cast<long long>(col_indices.size()) != 2 * num_edges)
        throw DataError("csr: directed entry count != 2|E|");
    for (int i = 0; i < num_nodes; ++i) {
        if (row_offsets[i] > row_offsets[i + 1]) throw DataError("csr: row_offsets not monotone");
        for (const int* p = neighbors_begin(i); p != neighbors_end(i); ++p) {
            if (*p < 0 || *p >= num_nodes) throw DataError("csr: neighbor id out of range");
            if (*p == i) throw DataError("csr: self-loop");
            if (p + 1 != neighbors_end(i) && *p >= *(p + 1)) throw DataError("csr: row not sorted/unique");
            if (!has_edge(*p, i)) throw DataError("csr: asymmetric edge");
        }
    }
}

CsrGraph build_csr(int num_nodes, const EdgeList& edges) {
    std::vector<std::vector<int>> adj(num_nodes);
    for (const auto& [a, b] : edges) {
        if (a < 0 || a >= num_nodes || b < 0 || b >= num_nodes)
            throw DataError("edge id out of range: (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        if (a == b) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    CsrGraph g;
    g.num_nodes = num_nodes;
    g.row_offsets.assign(num_nodes + 1, 0);
    for (int i = 0; i < num_nodes; ++i) {
        auto& nb = adj[i];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        g.row_offsets[i + 1] = g.row_offsets[i] + static_cast<int>(nb.size());
    }
    g.col_indices.reserve(g.row_offsets.back());
    for (auto& nb : adj) g.col_indices.insert(g.col_indices.end(), nb.begin(), nb.end());
    g.num_edges = static_cast<long long>(g.col_indices.size()) / 2;
    return g;
}

CsrGraph load_edge_list(const std::string& path, int num_nodes) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list: " + path);
    EdgeList edges;
    std::string line;
    int max_id = -1;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t pos = line.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        long long a, b;
        if (!(ls >> a >> b) || a < 0 || b < 0)
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed edge line");
        std::string trailing;
        if (ls >> trailing)
            throw DataError(path + ":" + std::to_string(line_no) + ": trailing tokens on edge line");
        if (num_nodes >= 0 && (a >= num_nodes || b >= num_nodes))
            throw DataError(path + ":" + std::to_string(line_no) + ": node id >= num_nodes");
        edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        max_id = std::max({max_id, static_cast<int>(a), static_cast<int>(b)});
    }
    int n = num_nodes >= 0 ? num_nodes : max_id + 1;
    return build_csr(n, edges);
}

void save_edge_list(const std::string& path, const EdgeList& edges) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write edge list: " + path);
    for (const auto& [a, b] : edges) out << a << ' ' << b << '\n';
}

Eigen::VectorXi degrees(const CsrGraph& g) {
    Eigen::VectorXi d(g.num_nodes);
    for (int i = 0; i < g.num_nodes; ++i) d[i] = g.degree(i);
    return d;
}

namespace {

Eigen::VectorXd inv_sqrt_subst(const Eigen::VectorXi& deg) {
    Eigen::VectorXd s(deg.size());
    for (Eigen::Index i = 0; i < deg.size(); ++i)
        s[i] = 1.0 / std::sqrt(static_cast<double>(deg[i] > 0 ? deg[i] : 1));
    return s;
}

}  // namespace

Eigen::MatrixXd normalized_adj_apply(const CsrGraph& g, const Eigen::MatrixXd& Y,
                                     const Eigen::VectorXi& degree_norm) {
    if (Y.rows() != g.num_nodes) throw DataError("normalized_adj_apply: row count mismatch");
    if (degree_norm.size() != g.num_nodes) throw DataError("normalized_adj_apply: degree vector mismatch");
    const Eigen::VectorXd s = inv_sqrt_subst(degree_norm);
    Eigen::MatrixXd out(Y.rows(), Y.cols());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.num_nodes; ++i) {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(Y.cols());
        for (const int* p = g.neighbors_begin(i); p != g.neighbors_end(i); ++p)
            acc.noalias() += s[*p] * Y.row(*p);
        out.row(i) = s[i] * acc;
    }
    return out;
}

Eigen::MatrixXd normalized_adj_apply(const CsrGraph& g, const Eigen::MatrixXd& Y) {
    return normalized_adj_apply(g, Y, degrees(g));
}

double laplacian_quadratic(const CsrGraph& g, const Eigen::MatrixXd& Y,
                           const Eigen::VectorXi& degree_norm) {
    if (Y.rows() != g.num_nodes) throw DataError("laplacian_quadratic: row count mismatch");
    if (degree_norm.size() != g.num_nodes) throw DataError("laplacian_quadratic: degree vector mismatch");
    const Eigen::VectorXd s = inv_sqrt_subst(degree_norm);
    double acc = 0.0;
    for (int i = 0; i < g.num_nodes; ++i)
        for (const int* p = g.neighbors_begin(i); p != g.neighbors_end(i); ++p)
            if (i < *p) acc += (s[i] * Y.row(i) - s[*p] * Y.row(*p)).squaredNorm();
    return acc;
}

FeatureMatrix load_features(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long long line_no = 0;
    size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
            double v;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc())
                throw DataError(path + ":" + std::to_string(line_no) + ": malformed feature value");
            if (!std::isfinite(v))
                throw DataError(path + ":" + std::to_string(line_no) + ": non-finite feature value");
            row.push_back(v);
            p = next;
            while (p < end && (*p == ',' || *p == ' ' || *p == '\t' || *p == '\r')) ++p;
        }
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw DataError(path + ":" + std::to_string(line_no) + ": ragged feature row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("empty feature file: " + path);
    FeatureMatrix X;
    X.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j) X.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return X;
}

void save_features(const std::string& path, const FeatureMatrix& X) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write feature file: " + path);
    out.precision(17);
    for (int i = 0; i < X.rows(); ++i) {
        for (int j = 0; j < X.cols(); ++j) {
            if (j) out << ',';
            out << X.data(i, j);
        }
        out << '\n';
    }
}

EdgeSplit split_edges(const CsrGraph& g, const std::array<double, 3>& ratios, std::uint64_t seed) {
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
    if (ratios[0] <= 0 || ratios[1] <= 0 || ratios[2] <= 0) throw ConfigError("split ratios must be positive");

    EdgeList all = g.edges();
    Rng rng(derive_seed(seed, 0));
    // Fisher-Yates with the deterministic stream.
    for (size_t i = all.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(all[i - 1], all[j]);
    }
    const long long m = static_cast<long long>(all.size());
    const long long n_train = static_cast<long long>(std::floor(ratios[0] * static_cast<double>(m)));
    const long long n_valid = static_cast<long long>(std::floor(ratios[1] * static_cast<double>(m)));

    EdgeSplit split;
    split.ratios = ratios;
    split.split_seed = seed;
    split.train_edges.assign(all.begin(), all.begin() + n_train);
    split.valid_edges.assign(all.begin() + n_train, all.begin() + n_train + n_valid);
    split.test_edges.assign(all.begin() + n_train + n_valid, all.end());
    return split;
}

CsrGraph graph_from_edges(int num_nodes, const EdgeList& edges) {
    return build_csr(num_nodes, edges);
}

void save_split_manifest(const std::string& path, const EdgeSplit& split) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write split manifest: " + path);
    out.precision(17);
    out << "seed " << split.split_seed << '\n';
    out << "ratios " << split.ratios[0] << ' ' << split.ratios[1] << ' ' << split.ratios[2] << '\n';
    auto dump = [&out](const char* name, const EdgeList& edges) {
        out << name << ' ' << edges.size() << '\n';
        for (const auto& [a, b] : edges) out << a << ' ' << b << '\n';
    };
    dump("train", split.train_edges);
    dump("valid", split.valid_edges);
    dump("test", split.test_edges);
}

EdgeSplit load_split_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open split manifest: " + path);
    EdgeSplit split;
    std::string tag;
    if (!(in >> tag >> split.split_seed) || tag != "seed")
        throw DataError(path + ": manifest missing seed line");
    if (!(in >> tag >> split.ratios[0] >> split.ratios[1] >> split.ratios[2]) || tag != "ratios")
        throw DataError(path + ": manifest missing ratios line");
    for (auto* edges : {&split.train_edges, &split.valid_edges, &split.test_edges}) {
        size_t count;
        if (!(in >> tag >> count)) throw DataError(path + ": manifest truncated");
        edges->resize(count);
        for (auto& [a, b] : *edges)
            if (!(in >> a >> b)) throw DataError(path + ": manifest edge list truncated");
    }
    return split;
}

}  // namespace yyg
