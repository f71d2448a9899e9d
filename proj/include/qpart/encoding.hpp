// encoding.hpp - balanced-bipartition objective and its Ising form
//
// C(x) = sum_{(i,j) in E} w_ij [x_i != x_j] + lambda * (sum_i v_i x_i - Omega/2)^2
//
// Substituting x_j = (1 - z_j)/2 gives a diagonal Hamiltonian with
//   constant   sum_e w_e/2 + lambda/4 * sum_i v_i^2
//   J_ij       -w_ij/2 + lambda * v_i * v_j / 2        (all pairs i < j)
// and no single-Z terms. The general IsingHamiltonian type still carries
// them so truncated or externally built operators stay representable.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qpart/bitstring.hpp"
#include "qpart/errors.hpp"
#include "qpart/graph.hpp"

namespace qpart {

struct GppObjective {
    WeightedGraph graph;
    double lambda = 1.0;
    double nu = 0.05;
};

inline GppObjective make_objective(WeightedGraph graph, double lambda = 1.0, double nu = 0.05) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be finite and >= 0");
    if (!(nu >= 0.0 && nu < 0.5)) throw ValidationError("nu must lie in [0, 0.5)");
    return GppObjective{std::move(graph), lambda, nu};
}

inline double cut_cost(const WeightedGraph& g, const std::vector<std::uint8_t>& x) {
    return compute_cut(g, x);
}

inline double balance_penalty(const WeightedGraph& g, const std::vector<std::uint8_t>& x) {
    if (static_cast<int>(x.size()) != g.n_vertices())
        throw ValidationError("assignment length does not match vertex count");
    double s = 0.0;
    for (int i = 0; i < g.n_vertices(); ++i)
        if (x[static_cast<std::size_t>(i)]) s += g.vertex_weight(i);
    const double d = s - 0.5 * g.total_vertex_weight();
    return d * d;
}

inline double qubo_objective(const GppObjective& obj, const std::vector<std::uint8_t>& x) {
    return cut_cost(obj.graph, x) + obj.lambda * balance_penalty(obj.graph, x);
}

// Same value, evaluated on a basis index (qubit q = bit q). Hot path for
// expectation values and sample scoring.
inline double qubo_objective(const GppObjective& obj, std::uint64_t mask) {
    double cut = 0.0;
    for (const auto& e : obj.graph.edges())
        if (((mask >> e.u) ^ (mask >> e.v)) & 1ULL) cut += e.w;
    double s = 0.0;
    for (int i = 0; i < obj.graph.n_vertices(); ++i)
        if ((mask >> i) & 1ULL) s += obj.graph.vertex_weight(i);
    const double d = s - 0.5 * obj.graph.total_vertex_weight();
    return cut + obj.lambda * d * d;
}

// ---------------------------------------------------------------------------

// One Pauli-Z term: i == j encodes Z_i with coefficient `coeff`, i < j
// encodes Z_i Z_j. Terms are kept in a stable lexicographic (i, j) order.
struct IsingTerm {
    int i = 0;
    int j = 0;
    double coeff = 0.0;
};

struct IsingHamiltonian {
    int n_qubits = 0;
    double constant = 0.0;
    std::vector<IsingTerm> terms;

    // Energy of the computational basis state |x>, z_q = 1 - 2*bit_q.
    double energy(std::uint64_t x) const {
        double e = constant;
        for (const auto& t : terms) {
            const std::uint64_t parity =
                t.i == t.j ? (x >> t.i) & 1ULL : ((x >> t.i) ^ (x >> t.j)) & 1ULL;
            e += parity ? -t.coeff : t.coeff;
        }
        return e;
    }

    std::vector<double> linear() const {
        std::vector<double> h(static_cast<std::size_t>(n_qubits), 0.0);
        for (const auto& t : terms)
            if (t.i == t.j) h[static_cast<std::size_t>(t.i)] += t.coeff;
        return h;
    }

    std::vector<IsingTerm> quadratic() const {
        std::vector<IsingTerm> q;
        for (const auto& t : terms)
            if (t.i != t.j) q.push_back(t);
        return q;
    }
};

inline IsingHamiltonian to_ising(const GppObjective& obj) {
    const WeightedGraph& g = obj.graph;
    const int n = g.n_vertices();
    IsingHamiltonian h;
    h.n_qubits = n;
    // dense upper-triangular accumulator; n stays small (qubit-capped)
    std::vector<double> quad(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (const auto& e : g.edges()) {
        h.constant += 0.5 * e.w;
        quad[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(e.v)] -=
            0.5 * e.w;
    }
    if (obj.lambda != 0.0) {
        for (int i = 0; i < n; ++i) {
            const double vi = g.vertex_weight(i);
            h.constant += 0.25 * obj.lambda * vi * vi;
            for (int j = i + 1; j < n; ++j)
                quad[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] +=
                    0.5 * obj.lambda * vi * g.vertex_weight(j);
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double c = quad[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
            if (c != 0.0) h.terms.push_back({i, j, c});
        }
    return h;
}

// Keeps the cap = c_factor * n_qubits largest-magnitude terms. Ordering key:
// |coeff| descending, then (i, j) lexicographic ascending with single-Z terms
// ranked as (j, j). The constant is preserved; kept terms return to
// lexicographic storage order.
inline IsingHamiltonian truncate_terms(const IsingHamiltonian& h, int c_factor) {
    if (c_factor < 1) throw ValidationError("c_factor must be >= 1");
    const std::size_t cap = static_cast<std::size_t>(c_factor) * static_cast<std::size_t>(h.n_qubits);
    IsingHamiltonian out;
    out.n_qubits = h.n_qubits;
    out.constant = h.constant;
    out.terms = h.terms;
    if (out.terms.size() > cap) {
        std::sort(out.terms.begin(), out.terms.end(), [](const IsingTerm& a, const IsingTerm& b) {
            const double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
            if (ma != mb) return ma > mb;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        out.terms.resize(cap);
    }
    std::sort(out.terms.begin(), out.terms.end(),
              [](const IsingTerm& a, const IsingTerm& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    return out;
}

// Debug/test dump: `const <v>`, then `Z <j> <h_j>`, then `ZZ <i> <j> <J_ij>`,
// deterministic order, shortest round-trip number formatting.
inline std::string dump_ising(const IsingHamiltonian& h) {
    auto fmt = [](double v) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    std::ostringstream out;
    out << "const " << fmt(h.constant) << '\n';
    for (const auto& t : h.terms)
        if (t.i == t.j) out << "Z " << t.i << ' ' << fmt(t.coeff) << '\n';
    for (const auto& t : h.terms)
        if (t.i != t.j) out << "ZZ " << t.i << ' ' << t.j << ' ' << fmt(t.coeff) << '\n';
    return out.str();
}

} // namespace qpart
