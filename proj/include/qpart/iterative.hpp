// iterative.hpp - execute-evaluate-reinitialize driver around the circuit
//
// Each iteration runs the (optionally term-truncated) linear-ramp circuit
// from the current product state, samples it, optionally refines every
// distinct sample with a single FM pass, scores raw + refined candidates by
// the exact objective, merges them into the cumulative solution pool, then
// Boltzmann-weights the top_k pool entries at beta_T = 9*x^2 + 1 and turns
// the per-qubit bias m_q into the next init via rho_q = (1 - eta*m_q)/2.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qpart/bitstring.hpp"
#include "qpart/encoding.hpp"
#include "qpart/errors.hpp"
#include "qpart/fm.hpp"
#include "qpart/parallel.hpp"
#include "qpart/rng.hpp"
#include "qpart/statevector.hpp"

namespace qpart {

struct IterationConfig {
    int p = 5;
    double delta = std::numeric_limits<double>::quiet_NaN(); // must be set by the caller
    int shots = 5000;
    int n_iter = 10;
    int top_k = 50;
    int eta = +1;
    int c_factor = 0; // 0 keeps every Hamiltonian term
    bool fm_on_samples = true;
    bool early_stop = false;    // stop once the top_k set repeats twice
    bool canonicalize = true;   // rank complement-canonical representatives
    std::uint64_t seed = 0;
    int qubit_cap = kDefaultQubitCap;
};

// The objective is invariant under complementing every bit (a bipartition is
// an unordered pair), so x and ~x always tie. Left as-is, the tied pairs
// cancel the warm-start bias exactly and every reinitialization degenerates
// to rho = 1/2 once the sample set covers both partners of each low-energy
// pair. Ranking the representative with the top bit clear breaks the tie
// consistently: one qubit gets pinned, and the bias signal survives.
inline std::uint64_t canonical_mask(std::uint64_t mask, int n) {
    const std::uint64_t all = n >= 64 ? ~0ULL : (1ULL << n) - 1;
    return (mask >> (n - 1)) & 1ULL ? mask ^ all : mask;
}

// beta_T = 9x^2 + 1 with x swept linearly over [0, 1] inclusive.
inline double beta_schedule(int iteration, int n_iter) {
    if (n_iter < 1) throw ValidationError("n_iter must be >= 1");
    if (iteration < 0 || iteration >= n_iter) throw ValidationError("iteration index out of range");
    const double x = n_iter == 1 ? 1.0 : static_cast<double>(iteration) / (n_iter - 1);
    return 9.0 * x * x + 1.0;
}

// P_j proportional to exp(-beta_T * (E_j - min E)); the shift cancels after
// normalization and keeps the exponentials in range.
inline std::vector<double> boltzmann_weights(const std::vector<double>& energies, double beta_t) {
    if (energies.empty()) throw ValidationError("boltzmann_weights needs at least one energy");
    if (!(beta_t >= 0.0)) throw ValidationError("beta_t must be >= 0");
    const double e_min = *std::min_element(energies.begin(), energies.end());
    std::vector<double> w(energies.size());
    double z = 0.0;
    for (std::size_t j = 0; j < energies.size(); ++j) {
        w[j] = std::exp(-beta_t * (energies[j] - e_min));
        z += w[j];
    }
    for (double& x : w) x /= z;
    return w;
}

// m_q = sum_j P_j * (-1)^{x_{q,j}}, bit q read LSB-first from the rendered string.
inline std::vector<double> qubit_bias(const std::vector<std::pair<std::string, double>>& weighted) {
    if (weighted.empty()) throw ValidationError("qubit_bias needs at least one bitstring");
    const std::size_t n = weighted.front().first.size();
    double total = 0.0;
    for (const auto& [bits, p] : weighted) {
        if (bits.size() != n) throw ValidationError("inconsistent bitstring lengths");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("bias probabilities must sum to 1");
    std::vector<double> m(n, 0.0);
    for (const auto& [bits, p] : weighted)
        for (std::size_t q = 0; q < n; ++q) m[q] += bits[n - 1 - q] == '1' ? -p : p;
    return m;
}

inline ProductState next_init(const std::vector<double>& m, int eta) {
    if (eta != 1 && eta != -1) throw ValidationError("eta must be +1 or -1");
    std::vector<double> rho(m.size());
    for (std::size_t q = 0; q < m.size(); ++q) {
        if (!(m[q] >= -1.0 - 1e-12 && m[q] <= 1.0 + 1e-12)) throw ValidationError("bias outside [-1, 1]");
        rho[q] = std::clamp(0.5 * (1.0 - eta * m[q]), 0.0, 1.0);
    }
    return make_product_state(std::move(rho));
}

// ---------------------------------------------------------------------------

enum class CandidateSource { raw, refined };

struct PoolEntry {
    std::string bits;
    double energy = 0.0;
    int iteration = 0;
    CandidateSource source = CandidateSource::raw;
};

struct SolutionPool {
    std::vector<PoolEntry> entries; // append-only, insertion order
    std::map<std::string, std::size_t> index;
    std::size_t best_idx = 0;

    const PoolEntry& best() const {
        if (entries.empty()) throw ValidationError("empty solution pool");
        return entries[best_idx];
    }

    // Inserts if unseen; entries are deduplicated by bitstring, first
    // occurrence wins the provenance tag.
    void insert(PoolEntry e) {
        const auto [it, fresh] = index.try_emplace(e.bits, entries.size());
        if (!fresh) return;
        entries.push_back(std::move(e));
        const PoolEntry& added = entries.back();
        const PoolEntry& cur = entries[best_idx];
        if (added.energy < cur.energy || (added.energy == cur.energy && added.bits < cur.bits))
            best_idx = entries.size() - 1;
    }

    // Entry positions ordered by (energy asc, bitstring asc).
    std::vector<std::size_t> ranked() const {
        std::vector<std::size_t> order(entries.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return entries[a].energy != entries[b].energy ? entries[a].energy < entries[b].energy
                                                          : entries[a].bits < entries[b].bits;
        });
        return order;
    }
};

struct IterationRecord {
    int iteration = 0;
    double beta_t = 0.0;
    double best_energy = 0.0;
    std::size_t pool_size = 0;
    double mean_sampled_energy = 0.0; // shot-weighted, raw samples only
};

struct IterativeResult {
    SolutionPool pool;
    std::vector<IterationRecord> log;
    IsingHamiltonian circuit_hamiltonian; // possibly truncated
};

inline IterativeResult run_iterative_qaoa(const GppObjective& obj, const IterationConfig& cfg) {
    const int n = obj.graph.n_vertices();
    if (n < 1) throw ValidationError("cannot optimize an empty graph");
    if (n > cfg.qubit_cap)
        throw ResourceError("instance needs " + std::to_string(n) + " qubits, above the statevector cap of " +
                            std::to_string(cfg.qubit_cap));
    if (!std::isfinite(cfg.delta)) throw ValidationError("delta must be set to a finite value");
    if (cfg.top_k < 1 || cfg.n_iter < 1 || cfg.p < 1) throw ValidationError("top_k, n_iter and p must be >= 1");
    if (cfg.eta != 1 && cfg.eta != -1) throw ValidationError("eta must be +1 or -1");

    IsingHamiltonian ham = to_ising(obj);
    if (cfg.c_factor > 0) ham = truncate_terms(ham, cfg.c_factor);
    const RampSchedule sched = build_schedule(cfg.delta, cfg.p);
    const FmConfig fm_cfg{obj.nu, 1, true};
    const Rng root(cfg.seed);

    IterativeResult res;
    res.circuit_hamiltonian = ham;
    ProductState init = uniform_product_state(n);
    double prev_best = std::numeric_limits<double>::infinity();
    std::vector<std::string> prev_top;
    int top_repeat = 0;

    for (int iter = 0; iter < cfg.n_iter; ++iter) {
        const Statevector sv = run_circuit(ham, sched, init, cfg.qubit_cap);
        const SampleSet samples = sample(sv, cfg.shots, root.stream("qaoa.sample", static_cast<std::uint64_t>(iter)).seed());

        std::vector<std::string> distinct;
        distinct.reserve(samples.counts.size());
        double mean_sampled = 0.0;
        for (const auto& [bits, count] : samples.counts) {
            distinct.push_back(bits);
            mean_sampled += count * qubo_objective(obj, bitstring_to_mask(bits));
        }
        mean_sampled /= samples.shots;

        // score raw candidates, then refine each with one FM pass
        std::vector<PoolEntry> candidates(distinct.size() * (cfg.fm_on_samples ? 2 : 1));
        parallel_for(distinct.size(), [&](std::size_t i) {
            const std::string& bits = distinct[i];
            candidates[i] = {bits, qubo_objective(obj, bitstring_to_mask(bits)), iter, CandidateSource::raw};
            if (cfg.fm_on_samples) {
                const Assignment refined = fm_pass(obj.graph, make_assignment(obj.graph, bitstring_to_bits(bits)), fm_cfg);
                const std::uint64_t rmask = bits_to_mask(refined.bits);
                candidates[distinct.size() + i] = {to_bitstring(rmask, n), qubo_objective(obj, rmask), iter,
                                                   CandidateSource::refined};
            }
        });
        for (auto& c : candidates) res.pool.insert(std::move(c));

        if (res.pool.best().energy > prev_best + 1e-12)
            throw std::logic_error("solution pool best energy increased across iterations");
        prev_best = res.pool.best().energy;

        const double beta_t = beta_schedule(iter, cfg.n_iter);
        res.log.push_back({iter, beta_t, res.pool.best().energy, res.pool.entries.size(), mean_sampled});

        if (iter + 1 == cfg.n_iter) break;

        // top_k ranking over complement-canonical representatives: the pool
        // keeps raw bitstrings, but tied complement partners must collapse to
        // one entry here or their bias contributions cancel
        std::vector<double> energies;
        std::vector<std::string> top;
        std::set<std::string> seen;
        for (std::size_t idx : res.pool.ranked()) {
            const PoolEntry& e = res.pool.entries[idx];
            const std::string rep =
                cfg.canonicalize ? to_bitstring(canonical_mask(bitstring_to_mask(e.bits), n), n) : e.bits;
            if (!seen.insert(rep).second) continue;
            energies.push_back(e.energy);
            top.push_back(rep);
            if (top.size() == static_cast<std::size_t>(cfg.top_k)) break;
        }
        const std::size_t k = top.size();
        if (cfg.early_stop) {
            top_repeat = top == prev_top ? top_repeat + 1 : 0;
            prev_top = top;
            if (top_repeat >= 2) break;
        }
        const std::vector<double> weights = boltzmann_weights(energies, beta_t);
        std::vector<std::pair<std::string, double>> weighted(k);
        for (std::size_t j = 0; j < k; ++j) weighted[j] = {top[j], weights[j]};
        init = next_init(qubit_bias(weighted), cfg.eta);
    }
    return res;
}

// Lowest-energy pool entry satisfying the balance tolerance, if any.
inline const PoolEntry* best_feasible(const SolutionPool& pool, const GppObjective& obj) {
    for (std::size_t idx : pool.ranked()) {
        const PoolEntry& e = pool.entries[idx];
        const Assignment a = make_assignment(obj.graph, bitstring_to_bits(e.bits));
        if (within_balance(a, obj.graph.total_vertex_weight(), obj.nu)) return &e;
    }
    return nullptr;
}

} // namespace qpart
