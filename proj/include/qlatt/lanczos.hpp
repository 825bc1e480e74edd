#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <cblas.h>
#include <lapacke.h>

#include "qlatt/rng.hpp"
#include "qlatt/spectrum.hpp"

namespace qlatt {

enum class SpectralSide { lowest, highest };

struct LanczosOptions {
    double tol = 1e-10;              // residual tolerance per returned pair
    std::size_t max_iterations = 0;  // 0: min(dim, max(400, 10k + 100))
    std::uint64_t start_seed = 0x517cc1b727220a95ull;
    std::size_t check_every = 10;
};

class LanczosError : public std::runtime_error {
public:
    LanczosError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}
    double best_residual() const { return best_residual_; }

private:
    double best_residual_;
};

namespace detail {

inline void tridiag_eig(const std::vector<double>& alpha, const std::vector<double>& beta,
                        std::size_t m, std::vector<double>& theta, std::vector<double>& s) {
    theta.assign(alpha.begin(), alpha.begin() + m);
    std::vector<double> off(beta.begin(), beta.begin() + (m > 0 ? m - 1 : 0));
    s.assign(m * m, 0.0);
    const lapack_int info =
        LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', static_cast<lapack_int>(m), theta.data(),
                       off.data(), s.data(), static_cast<lapack_int>(m));
    if (info != 0)
        throw std::runtime_error("tridiag_eig: dstevd failed with info=" + std::to_string(info));
}

} // namespace detail

/// k extremal eigenpairs by Lanczos with full (two-pass) reorthogonalization
/// against all retained basis vectors, so converged eigenvalues are not
/// reported in spurious duplicate copies. Eigenvalues come back ascending
/// with unit eigenvectors; residual_bound holds the verified max ||Hv-λv||.
template <typename Operator>
SpectrumResult iterative_extremal(const Operator& h, std::size_t k, SpectralSide side,
                                  const LanczosOptions& opt = {}) {
    const std::size_t dim = h.dimension;
    if (k == 0 || k > dim)
        throw std::invalid_argument("iterative_extremal: k must be in [1, dim]");

    const double sign = (side == SpectralSide::highest) ? -1.0 : 1.0;
    const std::size_t m_max = opt.max_iterations
                                  ? std::min(opt.max_iterations, dim)
                                  : std::min(dim, std::max<std::size_t>(400, 10 * k + 100));

    // crude operator scale for the breakdown threshold
    double norm_est = 0.0;
    for (double d : h.diag) norm_est = std::max(norm_est, std::abs(d));
    for (const auto& e : h.offdiag) norm_est = std::max(norm_est, std::abs(e.value));
    norm_est = std::max(norm_est, 1.0);

    std::vector<double> v_basis(m_max * dim); // Lanczos vectors, column-major
    std::vector<double> alpha, beta;
    alpha.reserve(m_max);
    beta.reserve(m_max);

    UniformRng rng(opt.start_seed ^ (0x9e3779b97f4a7c15ull * dim));
    auto fill_random_orthogonal = [&](double* v, std::size_t ncols) {
        for (std::size_t i = 0; i < dim; ++i) v[i] = rng.next_in(-1.0, 1.0);
        std::vector<double> c(std::max<std::size_t>(ncols, 1));
        for (int pass = 0; pass < 2 && ncols > 0; ++pass) {
            cblas_dgemv(CblasColMajor, CblasTrans, static_cast<int>(dim),
                        static_cast<int>(ncols), 1.0, v_basis.data(), static_cast<int>(dim), v,
                        1, 0.0, c.data(), 1);
            cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(dim),
                        static_cast<int>(ncols), -1.0, v_basis.data(), static_cast<int>(dim),
                        c.data(), 1, 1.0, v, 1);
        }
        const double nrm = cblas_dnrm2(static_cast<int>(dim), v, 1);
        cblas_dscal(static_cast<int>(dim), 1.0 / nrm, v, 1);
    };

    fill_random_orthogonal(v_basis.data(), 0);

    std::vector<double> w(dim), theta, s;
    std::size_t m = 0;
    bool converged = false;
    double best_residual_est = std::numeric_limits<double>::infinity();

    auto converged_count = [&](std::size_t steps) {
        detail::tridiag_eig(alpha, beta, steps, theta, s);
        const double b_last = (steps < dim) ? beta.back() : 0.0;
        std::size_t nconv = 0;
        double worst = 0.0;
        for (std::size_t i = 0; i < std::min(k, steps); ++i) {
            const double est = std::abs(b_last * s[i * steps + (steps - 1)]);
            worst = std::max(worst, est);
            if (est <= opt.tol) ++nconv;
        }
        if (std::min(k, steps) == k) best_residual_est = std::min(best_residual_est, worst);
        return nconv;
    };

    while (m < m_max) {
        const double* vj = v_basis.data() + m * dim;
        h.matvec(vj, w.data());
        if (sign < 0) cblas_dscal(static_cast<int>(dim), -1.0, w.data(), 1);

        const double a = cblas_ddot(static_cast<int>(dim), vj, 1, w.data(), 1);
        alpha.push_back(a);
        // two-pass full reorthogonalization
        std::vector<double> c(m + 1);
        for (int pass = 0; pass < 2; ++pass) {
            cblas_dgemv(CblasColMajor, CblasTrans, static_cast<int>(dim),
                        static_cast<int>(m + 1), 1.0, v_basis.data(), static_cast<int>(dim),
                        w.data(), 1, 0.0, c.data(), 1);
            cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(dim),
                        static_cast<int>(m + 1), -1.0, v_basis.data(), static_cast<int>(dim),
                        c.data(), 1, 1.0, w.data(), 1);
        }
        double b = cblas_dnrm2(static_cast<int>(dim), w.data(), 1);
        ++m;

        const bool last_step = (m == m_max) || (m == dim);
        if (m >= k && (m % opt.check_every == 0 || last_step || b <= 1e-13 * norm_est)) {
            beta.push_back(m == dim ? 0.0 : b);
            if (converged_count(m) >= k || m == dim) {
                beta.pop_back();
                converged = true;
                break;
            }
            beta.pop_back();
            if (last_step) break;
        } else if (last_step) {
            break;
        }

        if (b <= 1e-13 * norm_est) {
            // invariant subspace hit; continue in a fresh direction
            fill_random_orthogonal(w.data(), m);
            b = 0.0;
            std::copy(w.begin(), w.end(), v_basis.begin() + m * dim);
            beta.push_back(b);
        } else {
            cblas_dscal(static_cast<int>(dim), 1.0 / b, w.data(), 1);
            std::copy(w.begin(), w.end(), v_basis.begin() + m * dim);
            beta.push_back(b);
        }
    }

    if (!converged) {
        detail::tridiag_eig(alpha, beta, m, theta, s);
        throw LanczosError("iterative_extremal: not converged within " + std::to_string(m) +
                               " iterations (best residual estimate " +
                               std::to_string(best_residual_est) + ")",
                           best_residual_est);
    }
    detail::tridiag_eig(alpha, beta, m, theta, s);

    // Ritz vectors for the k lowest Ritz values of the (signed) operator.
    SpectrumResult res;
    res.dim = dim;
    res.method = SolveMethod::iterative;
    res.vectors.assign(k * dim, 0.0);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(dim),
                static_cast<int>(k), static_cast<int>(m), 1.0, v_basis.data(),
                static_cast<int>(dim), s.data(), static_cast<int>(m), 0.0, res.vectors.data(),
                static_cast<int>(dim));
    res.eigenvalues.assign(theta.begin(), theta.begin() + k);

    if (sign < 0) {
        // lowest of -H are the highest of H; restore ascending order
        for (double& e : res.eigenvalues) e = -e;
        std::reverse(res.eigenvalues.begin(), res.eigenvalues.end());
        std::vector<double> flipped(k * dim);
        for (std::size_t i = 0; i < k; ++i)
            std::copy(res.vectors.begin() + (k - 1 - i) * dim,
                      res.vectors.begin() + (k - i) * dim, flipped.begin() + i * dim);
        res.vectors = std::move(flipped);
    }

    // verified residual certificate
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double* x = res.vector(i);
        h.matvec(x, w.data());
        double r2 = 0.0;
        for (std::size_t q = 0; q < dim; ++q) {
            const double r = w[q] - res.eigenvalues[i] * x[q];
            r2 += r * r;
        }
        worst = std::max(worst, std::sqrt(r2));
    }
    res.residual_bound = worst;

    for (std::size_t i = 1; i < k; ++i)
        if (res.eigenvalues[i] - res.eigenvalues[i - 1] < degeneracy_tolerance)
            res.degenerate_levels = true;
    return res;
}

} // namespace qlatt
