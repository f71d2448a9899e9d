// oracles.hpp - independent reference implementations used only by tests
//
// Nothing here shares code with the library paths it checks: the dense
// circuit oracle goes through explicit 2^n x 2^n matrices and Eigen's
// Hermitian eigendecomposition, the enumeration oracle walks bit vectors
// through the public scalar API, and the elimination/component oracles are
// separate textbook algorithms.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "qpart/qpart.hpp"

namespace oracle {

using qpart::cplx;

// ---------------------------------------------------------------------------
// random test instances

inline qpart::WeightedGraph random_graph(qpart::Rng& rng, int n, double edge_prob, bool unit_vertex_weights,
                                         bool ensure_connected) {
    std::vector<double> vw(static_cast<std::size_t>(n), 1.0);
    if (!unit_vertex_weights)
        for (auto& w : vw) w = 0.5 + 1.5 * rng.next_double();
    std::vector<qpart::Edge> edges;
    std::vector<std::vector<std::uint8_t>> present(static_cast<std::size_t>(n),
                                                   std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
    auto add = [&](int u, int v) {
        if (u == v || present[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) return;
        present[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
        present[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
        edges.push_back({u, v, 0.5 + rng.next_double()});
    };
    if (ensure_connected) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (int i = 1; i < n; ++i)
            add(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i)))]);
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.next_double() < edge_prob) add(u, v);
    return qpart::WeightedGraph(n, std::move(vw), std::move(edges));
}

inline qpart::WeightedGraph grid_graph(int rows, int cols) {
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const int v = r * cols + c;
            if (c + 1 < cols) edges.push_back({v, v + 1});
            if (r + 1 < rows) edges.push_back({v, v + cols});
        }
    return qpart::WeightedGraph::unit_weights(rows * cols, edges);
}

// Two k-cliques joined by a single bridge edge.
inline qpart::WeightedGraph two_clique_bridge(int clique) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < clique; ++a)
        for (int b = a + 1; b < clique; ++b) {
            edges.push_back({a, b});
            edges.push_back({clique + a, clique + b});
        }
    edges.push_back({0, clique});
    return qpart::WeightedGraph::unit_weights(2 * clique, edges);
}

// ---------------------------------------------------------------------------
// union-find component oracle

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> fwd, bwd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto f = fwd.emplace(a[i], b[i]);
        if (!f.second && f.first->second != b[i]) return false;
        const auto g = bwd.emplace(b[i], a[i]);
        if (!g.second && g.first->second != a[i]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// dense quantum-circuit oracle

// Basis energies evaluated with explicit +-1 spins, one term at a time.
inline std::vector<double> dense_energies(const qpart::IsingHamiltonian& h) {
    const std::size_t dim = std::size_t{1} << h.n_qubits;
    std::vector<double> e(dim, 0.0);
    for (std::size_t x = 0; x < dim; ++x) {
        std::vector<int> z(static_cast<std::size_t>(h.n_qubits));
        for (int q = 0; q < h.n_qubits; ++q) z[static_cast<std::size_t>(q)] = ((x >> q) & 1ULL) ? -1 : +1;
        double acc = h.constant;
        for (const auto& t : h.terms)
            acc += t.i == t.j ? t.coeff * z[static_cast<std::size_t>(t.i)]
                              : t.coeff * z[static_cast<std::size_t>(t.i)] * z[static_cast<std::size_t>(t.j)];
        e[x] = acc;
    }
    return e;
}

// exp(i * beta * M) with M = sum_q cos(theta_q) Z_q + sin(theta_q) X_q,
// evaluated through a dense Hermitian eigendecomposition.
inline Eigen::MatrixXcd dense_mixer_unitary(const qpart::ProductState& ps, double beta) {
    const int n = ps.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t x = 0; x < dim; ++x)
        for (int q = 0; q < n; ++q) {
            const double theta = ps.theta[static_cast<std::size_t>(q)];
            m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) +=
                ((x >> q) & 1ULL) ? -std::cos(theta) : std::cos(theta);
            m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x ^ (std::size_t{1} << q))) += std::sin(theta);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXcd phases(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(cplx(0.0, beta * es.eigenvalues()(i)));
    return es.eigenvectors().cast<cplx>() * phases.asDiagonal() * es.eigenvectors().transpose().cast<cplx>();
}

inline Eigen::VectorXcd dense_initial_state(const qpart::ProductState& ps) {
    const int n = ps.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (std::size_t x = 0; x < dim; ++x) {
        double amp = 1.0;
        for (int q = 0; q < n; ++q) {
            const double rho = ps.rho[static_cast<std::size_t>(q)];
            amp *= ((x >> q) & 1ULL) ? std::sqrt(rho) : std::sqrt(1.0 - rho);
        }
        v(static_cast<Eigen::Index>(x)) = amp;
    }
    return v;
}

inline Eigen::VectorXcd dense_run_circuit(const qpart::IsingHamiltonian& h, const qpart::RampSchedule& sched,
                                          const qpart::ProductState& ps) {
    const std::vector<double> e = dense_energies(h);
    Eigen::VectorXcd psi = dense_initial_state(ps);
    for (int k = 0; k < sched.p; ++k) {
        for (Eigen::Index x = 0; x < psi.size(); ++x)
            psi(x) *= std::exp(cplx(0.0, -sched.gammas[static_cast<std::size_t>(k)] * e[static_cast<std::size_t>(x)]));
        psi = dense_mixer_unitary(ps, sched.betas[static_cast<std::size_t>(k)]) * psi;
    }
    return psi;
}

inline double fidelity(const qpart::Statevector& sv, const Eigen::VectorXcd& ref) {
    cplx ip = 0.0;
    for (std::size_t x = 0; x < sv.dim(); ++x) ip += std::conj(ref(static_cast<Eigen::Index>(x))) * sv[x];
    return std::abs(ip);
}

inline double fidelity(const qpart::Statevector& a, const qpart::Statevector& b) {
    cplx ip = 0.0;
    for (std::size_t x = 0; x < a.dim(); ++x) ip += std::conj(b[x]) * a[x];
    return std::abs(ip);
}

// ---------------------------------------------------------------------------
// plain enumeration oracle for the balanced minimum cut (vector API, no
// incremental updates)

struct EnumerationResult {
    bool feasible = false;
    double cut = 0.0;
    std::uint64_t mask = 0;
};

inline EnumerationResult enumerate_balanced_min_cut(const qpart::GppObjective& obj) {
    const int n = obj.graph.n_vertices();
    const double omega = obj.graph.total_vertex_weight();
    EnumerationResult best;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        const auto bits = qpart::mask_to_bits(mask, n);
        double w1 = 0.0;
        for (int v = 0; v < n; ++v)
            if (bits[static_cast<std::size_t>(v)]) w1 += obj.graph.vertex_weight(v);
        if (std::max(w1, omega - w1) > (0.5 + obj.nu) * omega) continue;
        const double cut = qpart::cut_cost(obj.graph, bits);
        if (!best.feasible || cut < best.cut || (cut == best.cut && mask < best.mask)) {
            best.feasible = true;
            best.cut = cut;
            best.mask = mask;
        }
    }
    return best;
}

} // namespace oracle
