// graph.hpp - weighted graph substrate shared by every other module
//
// WeightedGraph is immutable after construction and safe to share across
// threads. Edges are stored as a sorted (u < v) coordinate list; a compressed
// adjacency index is built alongside because refinement and Laplacian
// assembly both iterate neighborhoods.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpart/errors.hpp"

namespace qpart {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

class WeightedGraph {
public:
    struct Neighbor {
        int v;
        double w;
    };

    WeightedGraph() = default;

    // Takes vertex weights and an edge list in any order/orientation;
    // canonicalizes to u < v. Rejects self-loops, duplicates, bad indices,
    // and non-finite or negative weights.
    WeightedGraph(int n, std::vector<double> vertex_weights, std::vector<Edge> edges)
        : n_(n), vw_(std::move(vertex_weights)), edges_(std::move(edges)) {
        if (n_ < 0) throw ValidationError("vertex count must be non-negative");
        if (static_cast<int>(vw_.size()) != n_)
            throw ValidationError("vertex weight count does not match vertex count");
        total_ = 0.0;
        for (double w : vw_) {
            if (!std::isfinite(w) || w < 0.0) throw ValidationError("vertex weights must be finite and non-negative");
            total_ += w;
        }
        for (auto& e : edges_) {
            if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.u < 0 || e.v >= n_) throw ValidationError("edge endpoint out of range");
            if (!std::isfinite(e.w) || e.w < 0.0) throw ValidationError("edge weights must be finite and non-negative");
        }
        std::sort(edges_.begin(), edges_.end(),
                  [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
        for (std::size_t i = 1; i < edges_.size(); ++i)
            if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
                throw ValidationError("duplicate edge (" + std::to_string(edges_[i].u) + "," +
                                      std::to_string(edges_[i].v) + ")");
        build_adjacency();
    }

    static WeightedGraph unit_weights(int n, const std::vector<std::pair<int, int>>& edges) {
        std::vector<Edge> es;
        es.reserve(edges.size());
        for (auto [u, v] : edges) es.push_back({u, v, 1.0});
        return WeightedGraph(n, std::vector<double>(static_cast<std::size_t>(n), 1.0), std::move(es));
    }

    int n_vertices() const { return n_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& vertex_weights() const { return vw_; }
    double vertex_weight(int i) const { return vw_[static_cast<std::size_t>(i)]; }
    double total_vertex_weight() const { return total_; }

    std::span<const Neighbor> neighbors(int u) const {
        return {adj_.data() + adj_ptr_[static_cast<std::size_t>(u)],
                adj_.data() + adj_ptr_[static_cast<std::size_t>(u) + 1]};
    }

    int degree(int u) const {
        return static_cast<int>(adj_ptr_[static_cast<std::size_t>(u) + 1] - adj_ptr_[static_cast<std::size_t>(u)]);
    }

    double weighted_degree(int u) const {
        double d = 0.0;
        for (const auto& nb : neighbors(u)) d += nb.w;
        return d;
    }

    double max_vertex_weight() const {
        double m = 0.0;
        for (double w : vw_) m = std::max(m, w);
        return m;
    }

    double max_edge_weight() const {
        double m = 0.0;
        for (const auto& e : edges_) m = std::max(m, e.w);
        return m;
    }

    bool integral_edge_weights() const {
        for (const auto& e : edges_)
            if (e.w != std::floor(e.w) || e.w > 1e15) return false;
        return true;
    }

private:
    void build_adjacency() {
        adj_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const auto& e : edges_) {
            ++adj_ptr_[static_cast<std::size_t>(e.u) + 1];
            ++adj_ptr_[static_cast<std::size_t>(e.v) + 1];
        }
        for (std::size_t i = 1; i < adj_ptr_.size(); ++i) adj_ptr_[i] += adj_ptr_[i - 1];
        adj_.resize(adj_ptr_.back());
        std::vector<std::size_t> cursor(adj_ptr_.begin(), adj_ptr_.end() - 1);
        for (const auto& e : edges_) {
            adj_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, e.w};
            adj_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, e.w};
        }
        // Edge list is sorted by (u,v), so each u-bucket arrives sorted for
        // v > u but the v-bucket entries (v < u side) interleave; sort rows.
        for (int u = 0; u < n_; ++u) {
            auto begin = adj_.begin() + static_cast<std::ptrdiff_t>(adj_ptr_[static_cast<std::size_t>(u)]);
            auto end = adj_.begin() + static_cast<std::ptrdiff_t>(adj_ptr_[static_cast<std::size_t>(u) + 1]);
            std::sort(begin, end, [](const Neighbor& a, const Neighbor& b) { return a.v < b.v; });
        }
    }

    int n_ = 0;
    std::vector<double> vw_;
    double total_ = 0.0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> adj_ptr_;
    std::vector<Neighbor> adj_;
};

// ---------------------------------------------------------------------------
// Assignment: a bipartition as a 0/1 vector plus its cached score.

inline double compute_cut(const WeightedGraph& g, const std::vector<std::uint8_t>& bits) {
    if (static_cast<int>(bits.size()) != g.n_vertices())
        throw ValidationError("assignment length does not match vertex count");
    double cut = 0.0;
    for (const auto& e : g.edges())
        if (bits[static_cast<std::size_t>(e.u)] != bits[static_cast<std::size_t>(e.v)]) cut += e.w;
    return cut;
}

struct Assignment {
    std::vector<std::uint8_t> bits;
    double cut = 0.0;
    double part_weight[2] = {0.0, 0.0};
    double imbalance = 0.0; // max(part_weight)/omega - 1/2
};

inline Assignment make_assignment(const WeightedGraph& g, std::vector<std::uint8_t> bits) {
    Assignment a;
    a.cut = compute_cut(g, bits);
    a.bits = std::move(bits);
    for (int i = 0; i < g.n_vertices(); ++i)
        a.part_weight[a.bits[static_cast<std::size_t>(i)] ? 1 : 0] += g.vertex_weight(i);
    const double omega = g.total_vertex_weight();
    a.imbalance = omega > 0.0 ? std::max(a.part_weight[0], a.part_weight[1]) / omega - 0.5 : 0.0;
    return a;
}

// Both parts within (1/2 + nu) * omega.
inline bool within_balance(double w0, double w1, double omega, double nu) {
    return std::max(w0, w1) <= (0.5 + nu) * omega;
}

inline bool within_balance(const Assignment& a, double omega, double nu) {
    return within_balance(a.part_weight[0], a.part_weight[1], omega, nu);
}

// ---------------------------------------------------------------------------
// Laplacian as CSR (diagonal included, value 0 for isolated vertices).

struct CsrMatrix {
    int n = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void multiply(const double* x, double* y) const {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1];
                 ++k)
                acc += val[k] * x[col[k]];
            y[i] = acc;
        }
    }

    // Max absolute row sum; equals the 2-norm bound used for residual tests.
    double inf_norm() const {
        double m = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1];
                 ++k)
                s += std::abs(val[k]);
            m = std::max(m, s);
        }
        return m;
    }
};

inline CsrMatrix laplacian(const WeightedGraph& g) {
    const int n = g.n_vertices();
    CsrMatrix m;
    m.n = n;
    m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int u = 0; u < n; ++u)
        m.row_ptr[static_cast<std::size_t>(u) + 1] =
            m.row_ptr[static_cast<std::size_t>(u)] + static_cast<std::size_t>(g.degree(u)) + 1;
    m.col.resize(m.row_ptr.back());
    m.val.resize(m.row_ptr.back());
    for (int u = 0; u < n; ++u) {
        std::size_t k = m.row_ptr[static_cast<std::size_t>(u)];
        double deg = 0.0;
        bool diag_written = false;
        for (const auto& nb : g.neighbors(u)) {
            if (!diag_written && nb.v > u) {
                m.col[k] = u;
                ++k;
                diag_written = true;
            }
            m.col[k] = nb.v;
            m.val[k] = -nb.w;
            ++k;
            deg += nb.w;
        }
        if (!diag_written) {
            m.col[k] = u;
            ++k;
        }
        // locate the diagonal slot and fill it
        for (std::size_t j = m.row_ptr[static_cast<std::size_t>(u)]; j < k; ++j)
            if (m.col[j] == u) m.val[j] = deg;
    }
    return m;
}

// ---------------------------------------------------------------------------

inline std::vector<int> connected_components(const WeightedGraph& g) {
    const int n = g.n_vertices();
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    std::vector<int> stack;
    int c = 0;
    for (int s = 0; s < n; ++s) {
        if (label[static_cast<std::size_t>(s)] != -1) continue;
        stack.push_back(s);
        label[static_cast<std::size_t>(s)] = c;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (const auto& nb : g.neighbors(u)) {
                if (label[static_cast<std::size_t>(nb.v)] == -1) {
                    label[static_cast<std::size_t>(nb.v)] = c;
                    stack.push_back(nb.v);
                }
            }
        }
        ++c;
    }
    return label;
}

struct Subgraph {
    WeightedGraph graph;
    std::vector<int> old_to_new; // -1 for vertices outside the kept set
    std::vector<int> new_to_old;
};

inline Subgraph induced_subgraph(const WeightedGraph& g, std::vector<int> keep) {
    if (keep.empty()) throw ValidationError("induced subgraph of an empty vertex set");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.front() < 0 || keep.back() >= g.n_vertices())
        throw ValidationError("kept vertex out of range");
    Subgraph out;
    out.old_to_new.assign(static_cast<std::size_t>(g.n_vertices()), -1);
    out.new_to_old = keep;
    for (std::size_t i = 0; i < keep.size(); ++i) out.old_to_new[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    std::vector<double> vw(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) vw[i] = g.vertex_weight(keep[i]);
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        const int nu = out.old_to_new[static_cast<std::size_t>(e.u)];
        const int nv = out.old_to_new[static_cast<std::size_t>(e.v)];
        if (nu >= 0 && nv >= 0) edges.push_back({nu, nv, e.w});
    }
    out.graph = WeightedGraph(static_cast<int>(keep.size()), std::move(vw), std::move(edges));
    return out;
}

// Divides vertex weights by their maximum and edge weights by theirs, so the
// largest of each becomes exactly 1.0. Idempotent.
inline WeightedGraph normalize_weights(const WeightedGraph& g) {
    if (g.n_vertices() == 0) throw ValidationError("cannot normalize an empty graph");
    const double max_vw = g.max_vertex_weight();
    if (max_vw <= 0.0) throw ValidationError("cannot normalize all-zero vertex weights");
    double max_ew = 1.0;
    if (g.n_edges() > 0) {
        max_ew = g.max_edge_weight();
        if (max_ew <= 0.0) throw ValidationError("cannot normalize all-zero edge weights");
    }
    std::vector<double> vw = g.vertex_weights();
    for (double& w : vw) w /= max_vw;
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.w /= max_ew;
    return WeightedGraph(g.n_vertices(), std::move(vw), std::move(edges));
}

} // namespace qpart
