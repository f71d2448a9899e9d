// statevector.hpp - exact simulation of the linear-ramp QAOA circuit
//
// The cost layer is diagonal: amplitude x picks up exp(-i*gamma*E(x)),
// constant term included. The mixer layer is the transverse-field rotation
// conjugated into the warm-start frame, U_q = Ry(theta_q) Rz(-2*beta)
// Ry(-theta_q) with theta_q = 2*asin(sqrt(rho_q)); the warm-start product
// state is an eigenstate of every U_q, and rho_q = 1/2 recovers
// exp(+i*beta*X) per qubit.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpart/bitstring.hpp"
#include "qpart/encoding.hpp"
#include "qpart/errors.hpp"
#include "qpart/rng.hpp"

namespace qpart {

inline constexpr int kDefaultQubitCap = 24;

using cplx = std::complex<double>;

// gamma_k = (k/p) * delta, beta_k = ((p - k + 1)/p) * delta, k = 1..p.
struct RampSchedule {
    int p = 0;
    double delta = 0.0;
    std::vector<double> gammas;
    std::vector<double> betas;
};

inline RampSchedule build_schedule(double delta, int p) {
    if (p < 1) throw ValidationError("schedule depth p must be >= 1");
    if (!std::isfinite(delta)) throw ValidationError("delta must be finite");
    RampSchedule s;
    s.p = p;
    s.delta = delta;
    s.gammas.resize(static_cast<std::size_t>(p));
    s.betas.resize(static_cast<std::size_t>(p));
    for (int k = 1; k <= p; ++k) {
        s.gammas[static_cast<std::size_t>(k - 1)] = (static_cast<double>(k) / p) * delta;
        s.betas[static_cast<std::size_t>(k - 1)] = (static_cast<double>(p - k + 1) / p) * delta;
    }
    return s;
}

// Product state: qubit q is sqrt(1-rho_q)|0> + sqrt(rho_q)|1>.
struct ProductState {
    std::vector<double> rho;
    std::vector<double> theta; // 2*asin(sqrt(rho_q))

    int n_qubits() const { return static_cast<int>(rho.size()); }
};

inline ProductState make_product_state(std::vector<double> rho) {
    ProductState ps;
    ps.theta.resize(rho.size());
    for (std::size_t q = 0; q < rho.size(); ++q) {
        if (!(rho[q] >= 0.0 && rho[q] <= 1.0)) throw ValidationError("rho must lie in [0, 1]");
        ps.theta[q] = 2.0 * std::asin(std::sqrt(rho[q]));
    }
    ps.rho = std::move(rho);
    return ps;
}

inline ProductState uniform_product_state(int n) {
    return make_product_state(std::vector<double>(static_cast<std::size_t>(n), 0.5));
}

class Statevector {
public:
    explicit Statevector(int n_qubits)
        : n_(n_qubits), amp_(std::size_t{1} << n_qubits, cplx{0.0, 0.0}) {
        if (n_qubits < 0 || n_qubits > 30) throw ValidationError("unreasonable qubit count for a statevector");
        amp_[0] = 1.0;
    }

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amp_.size(); }
    cplx& operator[](std::size_t i) { return amp_[i]; }
    const cplx& operator[](std::size_t i) const { return amp_[i]; }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::vector<cplx>& amplitudes() { return amp_; }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return std::sqrt(s);
    }

private:
    int n_;
    std::vector<cplx> amp_;
};

inline Statevector prepare_state(const ProductState& ps) {
    const int n = ps.n_qubits();
    Statevector sv(n);
    // amplitudes are products of per-qubit real factors, built by doubling
    sv[0] = 1.0;
    std::size_t filled = 1;
    for (int q = 0; q < n; ++q) {
        const double a0 = std::sqrt(1.0 - ps.rho[static_cast<std::size_t>(q)]);
        const double a1 = std::sqrt(ps.rho[static_cast<std::size_t>(q)]);
        for (std::size_t x = 0; x < filled; ++x) {
            const cplx base = sv[x];
            sv[x] = base * a0;
            sv[x | (std::size_t{1} << q)] = base * a1;
        }
        filled <<= 1;
    }
    return sv;
}

// E(x) for every basis state; term-major accumulation.
inline std::vector<double> basis_energies(const IsingHamiltonian& h) {
    const std::size_t dim = std::size_t{1} << h.n_qubits;
    std::vector<double> e(dim, h.constant);
    for (const auto& t : h.terms) {
        if (t.i == t.j) {
            for (std::size_t x = 0; x < dim; ++x) e[x] += ((x >> t.i) & 1ULL) ? -t.coeff : t.coeff;
        } else {
            for (std::size_t x = 0; x < dim; ++x)
                e[x] += (((x >> t.i) ^ (x >> t.j)) & 1ULL) ? -t.coeff : t.coeff;
        }
    }
    return e;
}

namespace detail {

inline void apply_phases(Statevector& sv, const std::vector<double>& energies, double gamma) {
    for (std::size_t x = 0; x < sv.dim(); ++x) {
        const double phi = -gamma * energies[x];
        sv[x] *= cplx{std::cos(phi), std::sin(phi)};
    }
}

// U = Ry(theta) Rz(-2*beta) Ry(-theta) = exp(i*beta*(cos(theta) Z + sin(theta) X))
inline void mixer_unitary(double theta, double beta, cplx u[2][2]) {
    const double c = std::cos(beta), s = std::sin(beta);
    const double ct = std::cos(theta), st = std::sin(theta);
    u[0][0] = cplx{c, s * ct};
    u[0][1] = cplx{0.0, s * st};
    u[1][0] = cplx{0.0, s * st};
    u[1][1] = cplx{c, -s * ct};
}

inline void apply_single_qubit(Statevector& sv, int q, const cplx u[2][2]) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t base = 0; base < sv.dim(); ++base) {
        if (base & bit) continue;
        const cplx a0 = sv[base];
        const cplx a1 = sv[base | bit];
        sv[base] = u[0][0] * a0 + u[0][1] * a1;
        sv[base | bit] = u[1][0] * a0 + u[1][1] * a1;
    }
}

} // namespace detail

inline void apply_cost_layer(Statevector& sv, const IsingHamiltonian& h, double gamma) {
    if (h.n_qubits != sv.n_qubits()) throw ValidationError("Hamiltonian/state qubit count mismatch");
    detail::apply_phases(sv, basis_energies(h), gamma);
}

inline void apply_mixer_layer(Statevector& sv, const ProductState& ps, double beta) {
    if (ps.n_qubits() != sv.n_qubits()) throw ValidationError("mixer/state qubit count mismatch");
    cplx u[2][2];
    for (int q = 0; q < sv.n_qubits(); ++q) {
        detail::mixer_unitary(ps.theta[static_cast<std::size_t>(q)], beta, u);
        detail::apply_single_qubit(sv, q, u);
    }
}

inline Statevector run_circuit(const IsingHamiltonian& h, const RampSchedule& sched, const ProductState& ps,
                               int qubit_cap = kDefaultQubitCap) {
    if (h.n_qubits != ps.n_qubits()) throw ValidationError("Hamiltonian/init-state qubit count mismatch");
    if (h.n_qubits > qubit_cap)
        throw ResourceError("instance needs " + std::to_string(h.n_qubits) +
                            " qubits, above the statevector cap of " + std::to_string(qubit_cap));
    const std::vector<double> energies = basis_energies(h);
    Statevector sv = prepare_state(ps);
    cplx u[2][2];
    for (int k = 0; k < sched.p; ++k) {
        detail::apply_phases(sv, energies, sched.gammas[static_cast<std::size_t>(k)]);
        const double beta = sched.betas[static_cast<std::size_t>(k)];
        for (int q = 0; q < sv.n_qubits(); ++q) {
            detail::mixer_unitary(ps.theta[static_cast<std::size_t>(q)], beta, u);
            detail::apply_single_qubit(sv, q, u);
        }
    }
    return sv;
}

// ---------------------------------------------------------------------------

struct SampleSet {
    std::map<std::string, int> counts; // bitstring (MSB first) -> shots
    int shots = 0;
    std::uint64_t seed = 0;
};

inline SampleSet sample(const Statevector& sv, int shots, std::uint64_t seed) {
    if (shots < 1) throw ValidationError("shots must be >= 1");
    std::vector<double> cdf(sv.dim());
    double acc = 0.0;
    for (std::size_t x = 0; x < sv.dim(); ++x) {
        acc += std::norm(sv[x]);
        cdf[x] = acc;
    }
    SampleSet out;
    out.shots = shots;
    out.seed = seed;
    Rng rng(seed);
    std::map<std::size_t, int> index_counts;
    for (int s = 0; s < shots; ++s) {
        const double r = rng.next_double() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        std::size_t x = static_cast<std::size_t>(it - cdf.begin());
        if (x >= sv.dim()) x = sv.dim() - 1;
        ++index_counts[x];
    }
    for (const auto& [x, c] : index_counts) out.counts[to_bitstring(x, sv.n_qubits())] = c;
    return out;
}

// Debug dump: one `index re im` line per amplitude.
inline std::string dump_amplitudes(const Statevector& sv) {
    auto fmt = [](double v) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    std::string out;
    for (std::size_t x = 0; x < sv.dim(); ++x)
        out += std::to_string(x) + ' ' + fmt(sv[x].real()) + ' ' + fmt(sv[x].imag()) + '\n';
    return out;
}

// <C> over the exact (untruncated) objective.
inline double expectation(const GppObjective& obj, const Statevector& sv) {
    if (obj.graph.n_vertices() != sv.n_qubits())
        throw ValidationError("objective/state qubit count mismatch");
    double e = 0.0;
    for (std::size_t x = 0; x < sv.dim(); ++x) {
        const double p = std::norm(sv[x]);
        if (p > 0.0) e += p * qubo_objective(obj, static_cast<std::uint64_t>(x));
    }
    return e;
}

} // namespace qpart
