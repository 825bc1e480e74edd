#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qlatt {

enum class SolveMethod { dense, iterative };

/// Eigenvalues (always ascending) and, optionally, the matching unit
/// eigenvectors stored column-major with leading dimension `dim`.
struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::vector<double> vectors; // empty when not requested
    std::size_t dim = 0;
    SolveMethod method = SolveMethod::dense;
    double residual_bound = 0.0;
    bool degenerate_levels = false;

    bool has_vectors() const { return !vectors.empty(); }

    const double* vector(std::size_t m) const {
        if (m * dim + dim > vectors.size())
            throw std::out_of_range("SpectrumResult::vector: index out of range");
        return vectors.data() + m * dim;
    }
};

// Eigenvalues closer than this (units of delta) are flagged degenerate
// for downstream spacing statistics.
inline constexpr double degeneracy_tolerance = 1e-12;

} // namespace qlatt
