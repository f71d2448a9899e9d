// params.hpp - ramp-parameter sweeps, power-law extrapolation, brute-force
// oracles, and shipped per-model delta presets
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpart/encoding.hpp"
#include "qpart/errors.hpp"
#include "qpart/graph.hpp"
#include "qpart/ordering.hpp"
#include "qpart/parallel.hpp"
#include "qpart/rng.hpp"
#include "qpart/statevector.hpp"

namespace qpart {

// ---------------------------------------------------------------------------
// Delta/p landscape sweep from the uniform initial state (no warm start).

struct SweepPoint {
    double delta = 0.0;
    int p = 0;
    double expectation = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> grid;            // ordered by (p, delta)
    std::map<int, SweepPoint> best_per_p;    // per-depth minimum
    double max_expectation = 0.0;            // normalization constant

    double normalized(const SweepPoint& pt) const {
        return max_expectation > 0.0 ? pt.expectation / max_expectation : 0.0;
    }

    // Overall minimizer; grid order breaks ties.
    SweepPoint global_best() const {
        if (grid.empty()) throw ValidationError("empty sweep grid");
        SweepPoint best = grid.front();
        for (const auto& pt : grid)
            if (pt.expectation < best.expectation) best = pt;
        return best;
    }
};

// Snaps accumulated grid coordinates back to clean decimals.
inline double snap_grid_value(double x) { return std::round(x * 1e12) / 1e12; }

inline std::vector<double> default_delta_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 40; ++i) g.push_back(snap_grid_value(0.05 * i));
    return g;
}

inline std::vector<int> default_depth_grid() { return {1, 2, 3, 4, 5, 6}; }

// shots == 0 evaluates the exact expectation; shots > 0 averages sampled
// energies (seeded per grid point).
inline SweepResult sweep_delta(const GppObjective& obj, const std::vector<double>& deltas,
                               const std::vector<int>& depths, int shots = 0, std::uint64_t seed = 0,
                               int qubit_cap = kDefaultQubitCap) {
    const int n = obj.graph.n_vertices();
    if (n < 1) throw ValidationError("cannot sweep an empty graph");
    if (n > qubit_cap)
        throw ResourceError("instance needs " + std::to_string(n) + " qubits, above the statevector cap of " +
                            std::to_string(qubit_cap));
    if (deltas.empty() || depths.empty()) throw ValidationError("sweep grid must be nonempty");
    const IsingHamiltonian ham = to_ising(obj);
    // exact objective values per basis state, shared across the grid
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> exact(dim);
    for (std::size_t x = 0; x < dim; ++x) exact[x] = qubo_objective(obj, static_cast<std::uint64_t>(x));
    const ProductState init = uniform_product_state(n);

    SweepResult res;
    res.grid.resize(deltas.size() * depths.size());
    parallel_for(res.grid.size(), [&](std::size_t g) {
        const std::size_t pi = g / deltas.size();
        const std::size_t di = g % deltas.size();
        const int p = depths[pi];
        const double delta = deltas[di];
        const Statevector sv = run_circuit(ham, build_schedule(delta, p), init, qubit_cap);
        double e = 0.0;
        if (shots == 0) {
            for (std::size_t x = 0; x < dim; ++x) {
                const double prob = std::norm(sv[x]);
                if (prob > 0.0) e += prob * exact[x];
            }
        } else {
            const SampleSet s = sample(sv, shots, stream_seed(seed, "sweep.sample", g));
            for (const auto& [bits, count] : s.counts) e += count * exact[bitstring_to_mask(bits)];
            e /= s.shots;
        }
        res.grid[g] = {delta, p, e};
    });
    for (const auto& pt : res.grid) {
        res.max_expectation = std::max(res.max_expectation, pt.expectation);
        const auto it = res.best_per_p.find(pt.p);
        if (it == res.best_per_p.end() || pt.expectation < it->second.expectation) res.best_per_p[pt.p] = pt;
    }
    return res;
}

// Mean of the per-instance optimal delta values.
inline double mean_optimal_delta(const std::vector<SweepResult>& sweeps) {
    if (sweeps.empty()) throw ValidationError("no sweeps to average");
    double s = 0.0;
    for (const auto& sw : sweeps) s += sw.global_best().delta;
    return s / static_cast<double>(sweeps.size());
}

// ---------------------------------------------------------------------------
// Least squares in log-log space: delta(n) = a * n^b.

struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double residual = 0.0; // L2 norm of log-space residuals

    double operator()(double n) const { return a * std::pow(n, b); }
};

inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ValidationError("power-law fit needs at least two points");
    std::vector<double> lx(points.size()), ly(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
            throw ValidationError("power-law fit needs positive sizes and values");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("power-law fit needs at least two distinct sizes");
    PowerLawFit fit;
    fit.b = sxy / sxx;
    fit.a = std::exp(my - fit.b * mx);
    double r2 = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = ly[i] - (std::log(fit.a) + fit.b * lx[i]);
        r2 += r * r;
    }
    fit.residual = std::sqrt(r2);
    return fit;
}

// ---------------------------------------------------------------------------
// Exhaustive balanced-minimum-cut oracle (Gray-code incremental scan).

inline constexpr int kBruteForceQubitCap = 24;
inline constexpr int kBruteForceEliminationCap = 200;

struct BruteForceResult {
    bool feasible_found = false;
    Assignment best;                   // valid when feasible_found
    std::uint64_t best_mask = 0;
    double unconstrained_min = 0.0;    // minimum of the QUBO objective
    std::uint64_t unconstrained_mask = 0;
};

inline BruteForceResult brute_force_gpp(const GppObjective& obj) {
    const int n = obj.graph.n_vertices();
    if (n < 1) throw ValidationError("cannot enumerate an empty graph");
    if (n > kBruteForceQubitCap)
        throw ResourceError("exhaustive search capped at " + std::to_string(kBruteForceQubitCap) +
                            " vertices, instance has " + std::to_string(n));
    const WeightedGraph& g = obj.graph;
    const double omega = g.total_vertex_weight();

    BruteForceResult res;
    double cut = 0.0;   // running cut, updated incrementally along the Gray walk
    double part1 = 0.0; // running weight on side 1
    std::uint64_t mask = 0;

    double best_cut = std::numeric_limits<double>::infinity();
    double best_qubo = std::numeric_limits<double>::infinity();

    // The running values drift by rounding over millions of updates, which
    // would corrupt exact lexicographic tie-breaks (complement partners have
    // identical true cuts). Near-ties are therefore re-evaluated from scratch
    // before they can displace the incumbent.
    auto exact_eval = [&](std::uint64_t m, double& exact_cut, double& exact_part1) {
        exact_cut = 0.0;
        exact_part1 = 0.0;
        for (const auto& e : g.edges())
            if (((m >> e.u) ^ (m >> e.v)) & 1ULL) exact_cut += e.w;
        for (int v = 0; v < n; ++v)
            if ((m >> v) & 1ULL) exact_part1 += g.vertex_weight(v);
    };
    auto consider = [&] {
        const double qubo = cut + obj.lambda * (part1 - 0.5 * omega) * (part1 - 0.5 * omega);
        if (qubo <= best_qubo + 1e-9 * (1.0 + std::abs(best_qubo))) {
            double ec = 0.0, ep1 = 0.0;
            exact_eval(mask, ec, ep1);
            const double eq = ec + obj.lambda * (ep1 - 0.5 * omega) * (ep1 - 0.5 * omega);
            if (eq < best_qubo || (eq == best_qubo && mask < res.unconstrained_mask)) {
                best_qubo = eq;
                res.unconstrained_min = eq;
                res.unconstrained_mask = mask;
            }
        }
        if (within_balance(omega - part1, part1, omega, obj.nu) &&
            (!res.feasible_found || cut <= best_cut + 1e-9 * (1.0 + std::abs(best_cut)))) {
            double ec = 0.0, ep1 = 0.0;
            exact_eval(mask, ec, ep1);
            if (within_balance(omega - ep1, ep1, omega, obj.nu) &&
                (!res.feasible_found || ec < best_cut || (ec == best_cut && mask < res.best_mask))) {
                best_cut = ec;
                res.best_mask = mask;
                res.feasible_found = true;
            }
        }
    };
    consider();
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int b = std::countr_zero(i); // Gray code: flip bit b
        const std::uint64_t bit = 1ULL << b;
        mask ^= bit;
        const bool now_one = (mask & bit) != 0;
        part1 += now_one ? g.vertex_weight(b) : -g.vertex_weight(b);
        for (const auto& nb : g.neighbors(b)) {
            const bool differs = ((mask >> nb.v) & 1ULL) != now_one;
            cut += differs ? nb.w : -nb.w;
        }
        consider();
    }
    if (res.feasible_found) res.best = make_assignment(g, mask_to_bits(res.best_mask, n));
    return res;
}

// Naive elimination-graph oracle: eliminate pivots in permuted order, each
// pivot's uneliminated neighborhood becomes a clique. Exact but O(n^3)-ish.
inline FactorStats brute_force_eliminate(const SparsityPattern& pat, const Permutation& p) {
    const int n = pat.n;
    if (n > kBruteForceEliminationCap)
        throw ResourceError("naive elimination capped at " + std::to_string(kBruteForceEliminationCap) +
                            " rows, pattern has " + std::to_string(n));
    if (static_cast<int>(p.perm.size()) != n) throw ValidationError("permutation size does not match pattern");
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n)); // in permuted labels
    std::int64_t input_below = 0;
    for (int old_i = 0; old_i < n; ++old_i)
        for (std::size_t k = pat.ptr[static_cast<std::size_t>(old_i)]; k < pat.ptr[static_cast<std::size_t>(old_i) + 1];
             ++k) {
            const int i = p.perm[static_cast<std::size_t>(old_i)];
            const int j = p.perm[static_cast<std::size_t>(pat.idx[k])];
            adj[static_cast<std::size_t>(i)].insert(j);
            if (j > i) ++input_below;
        }
    FactorStats stats;
    std::vector<std::uint8_t> eliminated(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        std::vector<int> live;
        for (int i : adj[static_cast<std::size_t>(j)])
            if (!eliminated[static_cast<std::size_t>(i)]) live.push_back(i);
        const auto c_j = static_cast<std::int64_t>(live.size());
        stats.nnz_factor += c_j;
        stats.op_count += 0.5 * static_cast<double>(c_j) * static_cast<double>(c_j + 3);
        eliminated[static_cast<std::size_t>(j)] = 1;
        for (std::size_t a = 0; a < live.size(); ++a)
            for (std::size_t b = a + 1; b < live.size(); ++b) {
                adj[static_cast<std::size_t>(live[a])].insert(live[b]);
                adj[static_cast<std::size_t>(live[b])].insert(live[a]);
            }
    }
    stats.fill_in = stats.nnz_factor - input_below;
    return stats;
}

// ---------------------------------------------------------------------------
// Shipped optimal-delta presets per mesh model and coarse size; sizes not in
// the table extrapolate through the power-law fit of the tabulated points.

using DeltaPresets = std::map<std::string, std::map<int, double>>;

inline const DeltaPresets& builtin_delta_presets() {
    static const DeltaPresets presets{
        {"SedanCar", {{24, 1.30}, {28, 1.20}, {32, 1.15}}},
        {"JetEngine", {{24, 1.08}, {28, 1.14}, {32, 1.26}}},
        {"Impeller", {{24, 1.14}, {28, 1.10}, {32, 1.08}}},
        {"Drill", {{24, 1.00}, {28, 0.86}, {32, 0.90}}},
    };
    return presets;
}

inline double preset_delta(const DeltaPresets& presets, const std::string& model, int n_qubits) {
    const auto it = presets.find(model);
    if (it == presets.end()) {
        std::string known;
        for (const auto& [name, tbl] : presets) known += (known.empty() ? "" : ", ") + name;
        throw ValidationError("unknown preset model '" + model + "' (known: " + known + ")");
    }
    const auto& table = it->second;
    const auto hit = table.find(n_qubits);
    if (hit != table.end()) return hit->second;
    std::vector<std::pair<double, double>> points;
    for (const auto& [size, delta] : table) points.emplace_back(static_cast<double>(size), delta);
    return fit_power_law(points)(static_cast<double>(n_qubits));
}

inline double preset_delta(const std::string& model, int n_qubits) {
    return preset_delta(builtin_delta_presets(), model, n_qubits);
}

} // namespace qpart
