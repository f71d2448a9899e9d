// coarsen.hpp - spectral coarsening with screening, contraction, lifting
//
// The embedding uses the d smallest nontrivial Laplacian eigenvectors
// (per connected component for disconnected inputs, sharing columns).
// Screening re-runs seeded k-means several times from the fixed embedding,
// contracts each clustering, probes it with FM-refined random
// cardinality-balanced bipartitions, and keeps the map whose best feasible
// refined cut (the proxy cost) is lowest. Contraction aggregates vertex and
// edge weights, so lifting a coarse bipartition preserves cut weight and
// part weights exactly.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpart/errors.hpp"
#include "qpart/fm.hpp"
#include "qpart/graph.hpp"
#include "qpart/lanczos.hpp"
#include "qpart/parallel.hpp"
#include "qpart/rng.hpp"

namespace qpart {

struct SpectralEmbedding {
    int n = 0;
    int d = 0;
    std::vector<double> coords;      // row-major n x d
    std::vector<double> eigenvalues; // empty when the graph is disconnected
    bool disconnected = false;

    double at(int v, int dim) const {
        return coords[static_cast<std::size_t>(v) * static_cast<std::size_t>(d) + static_cast<std::size_t>(dim)];
    }
};

inline SpectralEmbedding spectral_embedding(const WeightedGraph& g, int d, double tol = 1e-8) {
    const int n = g.n_vertices();
    if (d < 1) throw ValidationError("embedding dimension must be >= 1");
    if (d > n - 1) throw ValidationError("embedding dimension must be <= n - 1");
    SpectralEmbedding emb;
    emb.n = n;
    emb.d = d;
    emb.coords.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(d), 0.0);

    const std::vector<int> comp = connected_components(g);
    const int n_comp = 1 + *std::max_element(comp.begin(), comp.end());
    emb.disconnected = n_comp > 1;

    if (!emb.disconnected) {
        std::vector<double> ones(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
        const LanczosResult lr = lanczos_smallest(laplacian(g), d, {ones}, tol);
        if (!lr.converged) throw std::logic_error("spectral embedding failed to converge");
        emb.eigenvalues = lr.eigenvalues;
        for (int c = 0; c < d; ++c)
            for (int v = 0; v < n; ++v)
                emb.coords[static_cast<std::size_t>(v) * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] =
                    lr.vectors[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)];
        return emb;
    }

    // Disconnected: each component contributes its own nontrivial modes to
    // the shared columns (zero elsewhere); columns are rescaled to unit norm.
    for (int c = 0; c < n_comp; ++c) {
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (comp[static_cast<std::size_t>(v)] == c) members.push_back(v);
        const int nc = static_cast<int>(members.size());
        const int dc = std::min(d, nc - 1);
        if (dc < 1) continue;
        const Subgraph sub = induced_subgraph(g, members);
        std::vector<double> ones(static_cast<std::size_t>(nc), 1.0 / std::sqrt(static_cast<double>(nc)));
        const LanczosResult lr = lanczos_smallest(laplacian(sub.graph), dc, {ones}, tol);
        if (!lr.converged) throw std::logic_error("spectral embedding failed to converge");
        for (int col = 0; col < dc; ++col)
            for (int lv = 0; lv < nc; ++lv)
                emb.coords[static_cast<std::size_t>(members[static_cast<std::size_t>(lv)]) * static_cast<std::size_t>(d) +
                           static_cast<std::size_t>(col)] = lr.vectors[static_cast<std::size_t>(col)][static_cast<std::size_t>(lv)];
    }
    for (int col = 0; col < d; ++col) {
        double s = 0.0;
        for (int v = 0; v < n; ++v) s += emb.at(v, col) * emb.at(v, col);
        if (s > 0.0) {
            const double inv = 1.0 / std::sqrt(s);
            for (int v = 0; v < n; ++v)
                emb.coords[static_cast<std::size_t>(v) * static_cast<std::size_t>(d) + static_cast<std::size_t>(col)] *= inv;
        }
    }
    return emb;
}

// ---------------------------------------------------------------------------
// Lloyd k-means with k-means++ seeding. Labels are 0-based. Deterministic for
// a fixed seed; empty clusters are repaired by stealing the point farthest
// from its centroid.

inline std::vector<int> kmeans(const SpectralEmbedding& emb, int k, std::uint64_t seed, int max_iters = 100,
                               double shift_tol = 1e-6) {
    const int n = emb.n;
    const int d = emb.d;
    if (k < 1) throw ValidationError("k must be >= 1");
    if (k > n) throw ValidationError("k-means with more clusters than points");
    Rng rng(seed);

    auto dist2 = [&](int v, const double* c) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            const double diff = emb.at(v, j) - c[j];
            s += diff * diff;
        }
        return s;
    };

    // k-means++ seeding
    std::vector<double> centroids(static_cast<std::size_t>(k) * static_cast<std::size_t>(d));
    std::vector<double> min_d2(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> chosen(static_cast<std::size_t>(n), 0);
    auto set_centroid = [&](int c, int v) {
        for (int j = 0; j < d; ++j)
            centroids[static_cast<std::size_t>(c) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] =
                emb.at(v, j);
        chosen[static_cast<std::size_t>(v)] = 1;
    };
    set_centroid(0, static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
    for (int v = 0; v < n; ++v) min_d2[static_cast<std::size_t>(v)] = dist2(v, centroids.data());
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int v = 0; v < n; ++v)
            if (!chosen[static_cast<std::size_t>(v)]) total += min_d2[static_cast<std::size_t>(v)];
        int pick = -1;
        if (total > 0.0) {
            const double r = rng.next_double() * total;
            double acc = 0.0;
            for (int v = 0; v < n; ++v) {
                if (chosen[static_cast<std::size_t>(v)]) continue;
                acc += min_d2[static_cast<std::size_t>(v)];
                if (acc >= r) {
                    pick = v;
                    break;
                }
            }
            if (pick < 0)
                for (int v = n - 1; v >= 0; --v)
                    if (!chosen[static_cast<std::size_t>(v)]) {
                        pick = v;
                        break;
                    }
        } else {
            // all remaining points coincide with a centroid; take the lowest index
            for (int v = 0; v < n; ++v)
                if (!chosen[static_cast<std::size_t>(v)]) {
                    pick = v;
                    break;
                }
        }
        set_centroid(c, pick);
        const double* cc = centroids.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(d);
        for (int v = 0; v < n; ++v)
            min_d2[static_cast<std::size_t>(v)] = std::min(min_d2[static_cast<std::size_t>(v)], dist2(v, cc));
    }

    std::vector<int> label(static_cast<std::size_t>(n), 0);
    std::vector<double> sums(static_cast<std::size_t>(k) * static_cast<std::size_t>(d));
    std::vector<int> counts(static_cast<std::size_t>(k));
    for (int it = 0; it < max_iters; ++it) {
        // assign
        for (int v = 0; v < n; ++v) {
            int best = 0;
            double best_d = dist2(v, centroids.data());
            for (int c = 1; c < k; ++c) {
                const double dd = dist2(v, centroids.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(d));
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            label[static_cast<std::size_t>(v)] = best;
        }
        // repair empty clusters
        std::fill(counts.begin(), counts.end(), 0);
        for (int v = 0; v < n; ++v) ++counts[static_cast<std::size_t>(label[static_cast<std::size_t>(v)])];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            int far = -1;
            double far_d = -1.0;
            for (int v = 0; v < n; ++v) {
                const int lv = label[static_cast<std::size_t>(v)];
                if (counts[static_cast<std::size_t>(lv)] < 2) continue;
                const double dd =
                    dist2(v, centroids.data() + static_cast<std::size_t>(lv) * static_cast<std::size_t>(d));
                if (dd > far_d) {
                    far_d = dd;
                    far = v;
                }
            }
            if (far < 0) throw std::logic_error("k-means could not repair an empty cluster");
            --counts[static_cast<std::size_t>(label[static_cast<std::size_t>(far)])];
            label[static_cast<std::size_t>(far)] = c;
            ++counts[static_cast<std::size_t>(c)];
        }
        // update
        std::fill(sums.begin(), sums.end(), 0.0);
        for (int v = 0; v < n; ++v) {
            const int c = label[static_cast<std::size_t>(v)];
            for (int j = 0; j < d; ++j)
                sums[static_cast<std::size_t>(c) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] +=
                    emb.at(v, j);
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c)
            for (int j = 0; j < d; ++j) {
                const std::size_t idx = static_cast<std::size_t>(c) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j);
                const double next = sums[idx] / counts[static_cast<std::size_t>(c)];
                shift = std::max(shift, std::abs(next - centroids[idx]));
                centroids[idx] = next;
            }
        if (shift < shift_tol) break;
    }
    // final assignment against the converged centroids, with repair
    for (int v = 0; v < n; ++v) {
        int best = 0;
        double best_d = dist2(v, centroids.data());
        for (int c = 1; c < k; ++c) {
            const double dd = dist2(v, centroids.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(d));
            if (dd < best_d) {
                best_d = dd;
                best = c;
            }
        }
        label[static_cast<std::size_t>(v)] = best;
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (int v = 0; v < n; ++v) ++counts[static_cast<std::size_t>(label[static_cast<std::size_t>(v)])];
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) continue;
        int far = -1;
        double far_d = -1.0;
        for (int v = 0; v < n; ++v) {
            const int lv = label[static_cast<std::size_t>(v)];
            if (counts[static_cast<std::size_t>(lv)] < 2) continue;
            const double dd = dist2(v, centroids.data() + static_cast<std::size_t>(lv) * static_cast<std::size_t>(d));
            if (dd > far_d) {
                far_d = dd;
                far = v;
            }
        }
        if (far < 0) throw std::logic_error("k-means could not repair an empty cluster");
        --counts[static_cast<std::size_t>(label[static_cast<std::size_t>(far)])];
        label[static_cast<std::size_t>(far)] = c;
        ++counts[static_cast<std::size_t>(c)];
    }
    return label;
}

// ---------------------------------------------------------------------------

struct CoarseMap {
    std::vector<int> sigma; // fine vertex -> supernode (0-based)
    WeightedGraph coarse;
};

inline CoarseMap contract(const WeightedGraph& g, const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != g.n_vertices())
        throw ValidationError("cluster labels do not match vertex count");
    if (sigma.empty()) throw ValidationError("cannot contract an empty graph");
    const int k = 1 + *std::max_element(sigma.begin(), sigma.end());
    std::vector<double> vw(static_cast<std::size_t>(k), 0.0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int v = 0; v < g.n_vertices(); ++v) {
        const int c = sigma[static_cast<std::size_t>(v)];
        if (c < 0) throw ValidationError("negative cluster label");
        vw[static_cast<std::size_t>(c)] += g.vertex_weight(v);
        ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw ValidationError("empty cluster " + std::to_string(c));
    std::map<std::pair<int, int>, double> agg;
    for (const auto& e : g.edges()) {
        const int a = sigma[static_cast<std::size_t>(e.u)];
        const int b = sigma[static_cast<std::size_t>(e.v)];
        if (a == b) continue;
        agg[{std::min(a, b), std::max(a, b)}] += e.w;
    }
    std::vector<Edge> edges;
    edges.reserve(agg.size());
    for (const auto& [key, w] : agg) edges.push_back({key.first, key.second, w});
    CoarseMap cm;
    cm.sigma = sigma;
    cm.coarse = WeightedGraph(k, std::move(vw), std::move(edges));
    return cm;
}

inline std::vector<std::uint8_t> lift(const std::vector<std::uint8_t>& coarse_bits, const CoarseMap& cm) {
    if (static_cast<int>(coarse_bits.size()) != cm.coarse.n_vertices())
        throw ValidationError("coarse assignment does not match supernode count");
    std::vector<std::uint8_t> fine(cm.sigma.size());
    for (std::size_t v = 0; v < cm.sigma.size(); ++v)
        fine[v] = coarse_bits[static_cast<std::size_t>(cm.sigma[v])];
    return fine;
}

// ---------------------------------------------------------------------------

struct ScreenResult {
    CoarseMap map;
    double proxy_cost = 0.0;
    bool feasible = false;
    int round = -1;
    std::vector<std::uint8_t> best_coarse_bits; // the refined bipartition that set the proxy cost
};

// Random bipartition with ceil(k/2) zeros and floor(k/2) ones.
inline std::vector<std::uint8_t> random_balanced_bits(int k, Rng& rng) {
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k / 2; ++i) bits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
    return bits;
}

inline ScreenResult screen_coarsenings(const WeightedGraph& g, int k, int d, int n_screen, int n_trials, double nu,
                                       std::uint64_t seed) {
    if (n_screen < 1 || n_trials < 1) throw ValidationError("n_screen and n_trials must be >= 1");
    if (k < 2) throw ValidationError("coarse size k must be >= 2");
    if (k > g.n_vertices()) throw ValidationError("coarse size k exceeds the vertex count");
    const SpectralEmbedding emb = spectral_embedding(g, std::min(d, g.n_vertices() - 1));
    const Rng root(seed);
    const double omega = g.total_vertex_weight();
    const FmConfig fm_cfg{nu, 10, false};

    struct Round {
        CoarseMap map;
        double cut = 0.0;
        double max_part = 0.0;
        bool feasible = false;
        std::vector<std::uint8_t> bits;
    };
    std::vector<Round> rounds(static_cast<std::size_t>(n_screen));
    parallel_for(static_cast<std::size_t>(n_screen), [&](std::size_t t) {
        Round& r = rounds[t];
        const std::vector<int> labels = kmeans(emb, k, root.stream("coarsen.kmeans", t).seed());
        r.map = contract(g, labels);
        bool any = false;
        for (int trial = 0; trial < n_trials; ++trial) {
            Rng trial_rng = root.stream("fm.shuffle", t * static_cast<std::uint64_t>(n_trials) + static_cast<std::uint64_t>(trial));
            const Assignment refined =
                fm_refine(r.map.coarse, random_balanced_bits(r.map.coarse.n_vertices(), trial_rng), fm_cfg);
            const bool feas = within_balance(refined, omega, nu);
            const double max_part = std::max(refined.part_weight[0], refined.part_weight[1]);
            bool better = false;
            if (!any)
                better = true;
            else if (feas != r.feasible)
                better = feas;
            else if (feas)
                better = refined.cut < r.cut;
            else
                better = max_part < r.max_part || (max_part == r.max_part && refined.cut < r.cut);
            if (better) {
                r.cut = refined.cut;
                r.max_part = max_part;
                r.feasible = feas;
                r.bits = refined.bits;
                any = true;
            }
        }
    });

    int winner = 0;
    for (int t = 1; t < n_screen; ++t) {
        const Round& a = rounds[static_cast<std::size_t>(t)];
        const Round& b = rounds[static_cast<std::size_t>(winner)];
        bool better = false;
        if (a.feasible != b.feasible)
            better = a.feasible;
        else if (a.feasible)
            better = a.cut < b.cut;
        else
            better = a.max_part < b.max_part || (a.max_part == b.max_part && a.cut < b.cut);
        if (better) winner = t;
    }
    ScreenResult out;
    out.map = std::move(rounds[static_cast<std::size_t>(winner)].map);
    out.proxy_cost = rounds[static_cast<std::size_t>(winner)].cut;
    out.feasible = rounds[static_cast<std::size_t>(winner)].feasible;
    out.round = winner;
    out.best_coarse_bits = std::move(rounds[static_cast<std::size_t>(winner)].bits);
    return out;
}

// Coarse map dump: `vertex cluster` per line, both 1-based at the file boundary.
inline void write_coarse_map(const CoarseMap& cm, std::ostream& out) {
    for (std::size_t v = 0; v < cm.sigma.size(); ++v) out << (v + 1) << ' ' << (cm.sigma[v] + 1) << '\n';
}

inline int default_embedding_dim(int k, int n) { return std::max(1, std::min({6, k - 1, n - 1})); }

} // namespace qpart
