#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <lapacke.h>

#include "qlatt/band_hamiltonian.hpp"
#include "qlatt/spectrum.hpp"

namespace qlatt {

inline constexpr std::size_t default_dense_cap = 16000;

namespace detail {

/// Dense symmetric eigensolve (LAPACK dsyevd) of a matrix given as
/// diagonal + one-sided off-diagonal entries.
template <typename Operator>
SpectrumResult dense_eig(const Operator& h, bool want_vectors, std::size_t dense_cap) {
    const std::size_t n = h.dimension;
    if (n == 0) throw std::invalid_argument("dense_eig: empty operator");
    if (n > dense_cap)
        throw std::length_error("dense_eig: dimension " + std::to_string(n) +
                                " exceeds the dense cap " + std::to_string(dense_cap) +
                                "; use the iterative solver");

    std::vector<double> a(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) a[k * n + k] = h.diag[k];
    for (const auto& e : h.offdiag) {
        a[static_cast<std::size_t>(e.col) * n + e.row] += e.value; // upper triangle, col-major
        a[static_cast<std::size_t>(e.row) * n + e.col] += e.value;
    }

    std::vector<double> w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L',
                                           static_cast<lapack_int>(n), a.data(),
                                           static_cast<lapack_int>(n), w.data());
    if (info != 0)
        throw std::runtime_error("dense_eig: dsyevd failed with info=" + std::to_string(info));

    SpectrumResult res;
    res.dim = n;
    res.method = SolveMethod::dense;
    res.eigenvalues = std::move(w);
    if (want_vectors) res.vectors = std::move(a);
    a.clear();

    for (std::size_t m = 1; m < n; ++m)
        if (res.eigenvalues[m] - res.eigenvalues[m - 1] < degeneracy_tolerance)
            res.degenerate_levels = true;

    if (want_vectors) {
        // Residual certificate on a sample of columns (all, when cheap).
        const std::size_t stride = (n <= 256) ? 1 : n / 32;
        std::vector<double> y(n);
        double worst = 0.0;
        for (std::size_t m = 0; m < n; m += stride) {
            h.matvec(res.vector(m), y.data());
            double r2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double r = y[i] - res.eigenvalues[m] * res.vectors[m * n + i];
                r2 += r * r;
            }
            worst = std::max(worst, std::sqrt(r2));
        }
        res.residual_bound = worst;
    }
    return res;
}

} // namespace detail

/// All eigenpairs of the band Hamiltonian by dense diagonalization.
inline SpectrumResult dense_full_diag(const BandHamiltonian& h, bool want_vectors,
                                      std::size_t dense_cap = default_dense_cap) {
    return detail::dense_eig(h, want_vectors, dense_cap);
}

} // namespace qlatt
