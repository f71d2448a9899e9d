// fm.hpp - modified Fiduccia-Mattheyses bipartition refinement
//
// Differences from the canonical algorithm: moves are always taken from the
// currently heavier part (equal weights count as part 1), and a move prefix
// is eligible as the rollback target only if the partition it produces is
// within the (1/2 + nu) * Omega tolerance at that step. Cumulative-gain
// tracking and prefix rollback are standard. A pass commits only when the
// best eligible prefix has strictly positive net gain, or when the input was
// infeasible and the prefix restores feasibility (balance repair).
//
// Gain storage follows the classic scheme where it applies: a bucket array
// over integer gains when edge weights are small integers, otherwise a
// max-heap with lazy invalidation. Ties are always broken toward the lowest
// vertex index, which makes refinement deterministic.
#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <vector>

#include "qpart/errors.hpp"
#include "qpart/graph.hpp"

namespace qpart {

struct FmConfig {
    double nu = 0.05;
    int max_passes = 10;
    bool single_pass = false;
};

struct FmMove {
    int vertex = -1;
    double gain = 0.0;
    double cumulative_gain = 0.0;
    bool feasible = false;
};

namespace detail {

// Bucket array over integer gains in [-max_abs, +max_abs]; each bucket is an
// ordered set so equal gains resolve to the lowest vertex index.
class BucketGains {
public:
    explicit BucketGains(long max_abs) : off_(max_abs) {
        sides_[0].buckets.resize(static_cast<std::size_t>(2 * max_abs + 1));
        sides_[1].buckets.resize(static_cast<std::size_t>(2 * max_abs + 1));
        sides_[0].top = sides_[1].top = -1;
    }

    void insert(int part, double gain, int v) {
        const long idx = index_of(gain);
        auto& side = sides_[part];
        side.buckets[static_cast<std::size_t>(idx)].insert(v);
        ++side.count;
        if (idx > side.top) side.top = idx;
    }

    void update(int part, double old_gain, double new_gain, int v) {
        auto& side = sides_[part];
        side.buckets[static_cast<std::size_t>(index_of(old_gain))].erase(v);
        --side.count;
        insert(part, new_gain, v);
    }

    int pop_best(int part) {
        auto& side = sides_[part];
        if (side.count == 0) return -1;
        while (side.top >= 0 && side.buckets[static_cast<std::size_t>(side.top)].empty()) --side.top;
        auto& bucket = side.buckets[static_cast<std::size_t>(side.top)];
        const int v = *bucket.begin();
        bucket.erase(bucket.begin());
        --side.count;
        return v;
    }

private:
    long index_of(double gain) const {
        const long g = std::lround(gain);
        return g + off_;
    }

    struct Side {
        std::vector<std::set<int>> buckets;
        long top = -1;
        int count = 0;
    };
    long off_;
    Side sides_[2];
};

// Lazy max-heap keyed by (gain desc, vertex asc); stale entries carry an old
// version stamp and are skipped on pop.
class HeapGains {
public:
    explicit HeapGains(int n) : version_(static_cast<std::size_t>(n), 0), live_(static_cast<std::size_t>(n), 0) {}

    void insert(int part, double gain, int v) {
        live_[static_cast<std::size_t>(v)] = 1;
        heaps_[part].push({gain, v, version_[static_cast<std::size_t>(v)]});
    }

    void update(int part, double /*old_gain*/, double new_gain, int v) {
        ++version_[static_cast<std::size_t>(v)];
        heaps_[part].push({new_gain, v, version_[static_cast<std::size_t>(v)]});
    }

    int pop_best(int part) {
        auto& heap = heaps_[part];
        while (!heap.empty()) {
            const Entry e = heap.top();
            heap.pop();
            if (live_[static_cast<std::size_t>(e.v)] && e.version == version_[static_cast<std::size_t>(e.v)]) {
                live_[static_cast<std::size_t>(e.v)] = 0;
                return e.v;
            }
        }
        return -1;
    }

private:
    struct Entry {
        double gain;
        int v;
        std::uint32_t version;
        bool operator<(const Entry& o) const { return gain != o.gain ? gain < o.gain : v > o.v; }
    };
    std::priority_queue<Entry> heaps_[2];
    std::vector<std::uint32_t> version_;
    std::vector<std::uint8_t> live_;
};

template <typename Queue>
Assignment fm_pass_impl(const WeightedGraph& g, const Assignment& input, const FmConfig& cfg, Queue& queue,
                        std::vector<FmMove>* move_log) {
    const int n = g.n_vertices();
    const double omega = g.total_vertex_weight();
    const double limit = (0.5 + cfg.nu) * omega;

    std::vector<std::uint8_t> bits = input.bits;
    double part_w[2] = {input.part_weight[0], input.part_weight[1]};
    const bool input_feasible = std::max(part_w[0], part_w[1]) <= limit;

    // gain(v) = external - internal adjacent weight
    std::vector<double> gain(static_cast<std::size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        double e = 0.0;
        for (const auto& nb : g.neighbors(v))
            e += bits[static_cast<std::size_t>(nb.v)] != bits[static_cast<std::size_t>(v)] ? nb.w : -nb.w;
        gain[static_cast<std::size_t>(v)] = e;
        queue.insert(bits[static_cast<std::size_t>(v)], e, v);
    }

    std::vector<std::uint8_t> locked(static_cast<std::size_t>(n), 0);
    std::vector<int> moves;
    moves.reserve(static_cast<std::size_t>(n));
    double cum = 0.0;
    double best_cum = 0.0;
    std::size_t best_prefix = 0;
    bool have_best = false;

    for (;;) {
        const int from = part_w[1] >= part_w[0] ? 1 : 0;
        const int v = queue.pop_best(from);
        if (v < 0) break;
        const double g_v = gain[static_cast<std::size_t>(v)];
        locked[static_cast<std::size_t>(v)] = 1;
        bits[static_cast<std::size_t>(v)] ^= 1;
        const double vw = g.vertex_weight(v);
        part_w[from] -= vw;
        part_w[1 - from] += vw;
        cum += g_v;
        moves.push_back(v);
        const bool feasible = std::max(part_w[0], part_w[1]) <= limit;
        if (move_log) move_log->push_back({v, g_v, cum, feasible});
        if (feasible && (!have_best || cum > best_cum)) {
            have_best = true;
            best_cum = cum;
            best_prefix = moves.size();
        }
        for (const auto& nb : g.neighbors(v)) {
            if (locked[static_cast<std::size_t>(nb.v)]) continue;
            // v now sits on bits[v]; a neighbor on the same side gained an
            // internal edge, one on the other side gained an external edge
            const double delta =
                bits[static_cast<std::size_t>(nb.v)] == bits[static_cast<std::size_t>(v)] ? -2.0 * nb.w : 2.0 * nb.w;
            const double updated = gain[static_cast<std::size_t>(nb.v)] + delta;
            queue.update(bits[static_cast<std::size_t>(nb.v)], gain[static_cast<std::size_t>(nb.v)], updated, nb.v);
            gain[static_cast<std::size_t>(nb.v)] = updated;
        }
    }

    const bool commit = have_best && (input_feasible ? best_cum > 0.0 : true);
    if (!commit) return input;

    std::vector<std::uint8_t> out = input.bits;
    for (std::size_t i = 0; i < best_prefix; ++i) out[static_cast<std::size_t>(moves[i])] ^= 1;
    return make_assignment(g, std::move(out));
}

inline bool bucketable(const WeightedGraph& g) {
    if (!g.integral_edge_weights()) return false;
    double max_deg = 0.0;
    for (int v = 0; v < g.n_vertices(); ++v) max_deg = std::max(max_deg, g.weighted_degree(v));
    return max_deg <= 65536.0;
}

} // namespace detail

inline Assignment fm_pass(const WeightedGraph& g, const Assignment& input, const FmConfig& cfg,
                          std::vector<FmMove>* move_log = nullptr) {
    if (static_cast<int>(input.bits.size()) != g.n_vertices())
        throw ValidationError("assignment length does not match vertex count");
    if (!(cfg.nu >= 0.0 && cfg.nu < 0.5)) throw ValidationError("nu must lie in [0, 0.5)");
    // refresh cached scores so stale inputs cannot poison gain accounting
    const Assignment start = make_assignment(g, input.bits);
    if (detail::bucketable(g)) {
        double max_deg = 0.0;
        for (int v = 0; v < g.n_vertices(); ++v) max_deg = std::max(max_deg, g.weighted_degree(v));
        detail::BucketGains queue(std::lround(max_deg));
        return detail::fm_pass_impl(g, start, cfg, queue, move_log);
    }
    detail::HeapGains queue(g.n_vertices());
    return detail::fm_pass_impl(g, start, cfg, queue, move_log);
}

inline Assignment fm_refine(const WeightedGraph& g, const Assignment& input, const FmConfig& cfg) {
    if (cfg.max_passes < 1) throw ValidationError("max_passes must be >= 1");
    Assignment cur = make_assignment(g, input.bits);
    const int passes = cfg.single_pass ? 1 : cfg.max_passes;
    for (int p = 0; p < passes; ++p) {
        Assignment next = fm_pass(g, cur, cfg);
        if (next.bits == cur.bits) break;
        cur = std::move(next);
    }
    return cur;
}

inline Assignment fm_refine(const WeightedGraph& g, const std::vector<std::uint8_t>& bits, const FmConfig& cfg) {
    return fm_refine(g, make_assignment(g, bits), cfg);
}

// Debug dump: `vertex gain cumulative feasible` per move.
inline std::string dump_move_log(const std::vector<FmMove>& log) {
    std::string out;
    for (const auto& m : log)
        out += std::to_string(m.vertex) + ' ' + std::to_string(m.gain) + ' ' + std::to_string(m.cumulative_gain) +
               ' ' + (m.feasible ? "1" : "0") + '\n';
    return out;
}

} // namespace qpart
