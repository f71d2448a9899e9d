// lanczos.hpp - symmetric Lanczos with full reorthogonalization
//
// Computes the k smallest eigenpairs of a sparse symmetric matrix while
// keeping the Krylov basis orthogonal to a supplied deflation set (here: the
// Laplacian kernel). When a Krylov sequence exhausts an invariant subspace
// the iteration restarts with a fresh vector, leaving the projected matrix
// block tridiagonal; Ritz extraction is unaffected. The basis grows until
// every requested pair meets the residual tolerance or the orthogonal
// complement is exhausted (at which point the projection is exact).
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "qpart/errors.hpp"
#include "qpart/graph.hpp"
#include "qpart/rng.hpp"

namespace qpart {

struct LanczosResult {
    std::vector<double> eigenvalues;            // ascending
    std::vector<std::vector<double>> vectors;   // unit length
    std::vector<double> residuals;              // ||A v - lambda v||
    bool converged = false;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double c, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

inline std::vector<double> pseudo_random_vector(int n, std::uint64_t salt) {
    std::vector<double> v(static_cast<std::size_t>(n));
    std::uint64_t state = 0x5EEDF00DBAD5EEDULL ^ salt;
    for (auto& x : v) x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
    return v;
}

} // namespace detail

inline LanczosResult lanczos_smallest(const CsrMatrix& A, int k,
                                      const std::vector<std::vector<double>>& deflate, double tol = 1e-8,
                                      int max_steps = 1000) {
    const int n = A.n;
    if (k < 1) throw ValidationError("lanczos: need k >= 1");
    const int complement = n - static_cast<int>(deflate.size());
    if (k > complement) throw ValidationError("lanczos: k exceeds the deflated subspace dimension");
    const double a_norm = std::max(A.inf_norm(), 1e-300);
    const int m_cap = std::min(complement, max_steps);

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta; // beta[j] couples basis[j] and basis[j+1]
    basis.reserve(static_cast<std::size_t>(std::min(m_cap, 2 * k + 32)));

    auto orthogonalize = [&](std::vector<double>& w) {
        for (int round = 0; round < 2; ++round) {
            for (const auto& d : deflate) detail::axpy(-detail::dot(w, d), d, w);
            for (const auto& v : basis) detail::axpy(-detail::dot(w, v), v, w);
        }
    };

    auto fresh_vector = [&](std::uint64_t salt) {
        std::vector<double> v = detail::pseudo_random_vector(n, salt);
        orthogonalize(v);
        double nv = detail::norm2(v);
        for (std::uint64_t retry = 1; nv < 1e-10 && retry < 32; ++retry) {
            v = detail::pseudo_random_vector(n, salt + retry * 7919);
            orthogonalize(v);
            nv = detail::norm2(v);
        }
        if (nv < 1e-10) throw std::logic_error("lanczos: failed to draw a vector in the complement");
        for (auto& x : v) x /= nv;
        return v;
    };

    basis.push_back(fresh_vector(0));
    std::vector<double> w(static_cast<std::size_t>(n));

    int target = std::min(m_cap, std::max(2 * k + 30, 60));
    LanczosResult res;
    for (;;) {
        // invariant: basis holds alpha.size() processed vectors plus one
        // unprocessed tail vector (until the complement is exhausted)
        while (static_cast<int>(alpha.size()) < target) {
            const std::vector<double>& v = basis[alpha.size()];
            A.multiply(v.data(), w.data());
            alpha.push_back(detail::dot(w, v));
            orthogonalize(w);
            const double b = detail::norm2(w);
            if (b < 1e-12 * a_norm) {
                beta.push_back(0.0);
                if (static_cast<int>(basis.size()) >= complement) break; // complement exhausted
                basis.push_back(fresh_vector(basis.size()));             // orthogonal restart
            } else if (static_cast<int>(basis.size()) < complement) {
                beta.push_back(b);
                std::vector<double> next = w;
                for (auto& x : next) x /= b;
                basis.push_back(std::move(next));
            } else {
                beta.push_back(0.0);
                break;
            }
        }

        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m && i < static_cast<int>(beta.size())) {
                T(i, i + 1) = beta[static_cast<std::size_t>(i)];
                T(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        if (es.info() != Eigen::Success) throw std::logic_error("lanczos: tridiagonal eigensolver failed");

        res.eigenvalues.assign(static_cast<std::size_t>(k), 0.0);
        res.vectors.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(n), 0.0));
        res.residuals.assign(static_cast<std::size_t>(k), 0.0);
        bool ok = true;
        for (int idx = 0; idx < k; ++idx) {
            res.eigenvalues[static_cast<std::size_t>(idx)] = es.eigenvalues()(idx);
            auto& phi = res.vectors[static_cast<std::size_t>(idx)];
            std::fill(phi.begin(), phi.end(), 0.0);
            for (int j = 0; j < m; ++j) {
                const double c = es.eigenvectors()(j, idx);
                if (c != 0.0) detail::axpy(c, basis[static_cast<std::size_t>(j)], phi);
            }
            const double nphi = detail::norm2(phi);
            if (nphi > 0.0)
                for (auto& x : phi) x /= nphi;
            A.multiply(phi.data(), w.data());
            detail::axpy(-res.eigenvalues[static_cast<std::size_t>(idx)], phi, w);
            res.residuals[static_cast<std::size_t>(idx)] = detail::norm2(w);
            if (res.residuals[static_cast<std::size_t>(idx)] > tol * a_norm) ok = false;
        }
        res.converged = ok;
        if (ok || target >= m_cap || static_cast<int>(alpha.size()) < target) return res;
        target = std::min(m_cap, target * 2);
    }
}

} // namespace qpart
