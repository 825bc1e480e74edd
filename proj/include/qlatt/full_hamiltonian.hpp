#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qlatt/band_hamiltonian.hpp"
#include "qlatt/disorder.hpp"
#include "qlatt/lattice.hpp"

namespace qlatt {

/// Full 2^n Hamiltonian H = sum_i Gamma_i sigma_i^z + sum_bonds J_ij
/// sigma_i^x sigma_j^x with Gamma_i = delta0 + delta_i. sigma_i^x
/// sigma_j^x flips both spins of the bond, which covers the
/// spin-exchange and double-flip parts in one off-diagonal entry.
/// Validation-only, hence the small-n cap.
struct FullHamiltonian {
    std::size_t dimension = 0;
    std::vector<double> diag;
    std::vector<BandHamiltonian::Entry> offdiag; // row < col
    int n = 0;

    static constexpr int max_sites = 14;

    void matvec(const double* x, double* y) const {
        for (std::size_t k = 0; k < dimension; ++k) y[k] = diag[k] * x[k];
        for (const auto& e : offdiag) {
            y[e.row] += e.value * x[e.col];
            y[e.col] += e.value * x[e.row];
        }
    }
};

inline FullHamiltonian build_full_hamiltonian(const LatticeSpec& lattice,
                                              const DisorderRealization& real,
                                              double delta0) {
    if (lattice.n > FullHamiltonian::max_sites)
        throw std::length_error("build_full_hamiltonian: n exceeds the validation cap");
    if (static_cast<int>(real.deltas.size()) != lattice.n ||
        real.couplings.size() != lattice.bonds.size())
        throw std::invalid_argument("build_full_hamiltonian: inconsistent sizes");

    FullHamiltonian h;
    h.n = lattice.n;
    h.dimension = std::size_t{1} << lattice.n;
    h.diag.resize(h.dimension);

    for (std::uint32_t mask = 0; mask < h.dimension; ++mask) {
        double d = 0.0;
        for (int i = 0; i < lattice.n; ++i) {
            const double gamma = delta0 + real.deltas[i];
            d += ((mask >> i) & 1u) ? gamma : -gamma;
        }
        h.diag[mask] = d;
    }

    for (std::uint32_t mask = 0; mask < h.dimension; ++mask) {
        for (std::size_t b = 0; b < lattice.bonds.size(); ++b) {
            const auto [i, j] = lattice.bonds[b];
            const std::uint32_t partner = mask ^ (1u << i) ^ (1u << j);
            if (partner < mask) continue;
            h.offdiag.push_back({mask, partner, real.couplings[b]});
        }
    }
    return h;
}

} // namespace qlatt
