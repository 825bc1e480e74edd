#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qlatt/basis.hpp"
#include "qlatt/disorder.hpp"
#include "qlatt/lattice.hpp"

namespace qlatt {

/// Sparse symmetric operator on the fixed-magnetization band, in
/// band-relative energies (the constant delta0*(2*n_up - n) is removed).
/// Diagonal: sum_i delta_i s_i with s_i = +-1. Off-diagonal: one entry
/// J_ij per (state, bond) with anti-aligned spins, connecting the state
/// to the one with the two spins exchanged. Entries stored once with
/// row < col.
struct BandHamiltonian {
    struct Entry {
        std::uint32_t row;
        std::uint32_t col;
        double value;
    };

    std::size_t dimension = 0;
    std::vector<double> diag;
    std::vector<Entry> offdiag;
    double sum_deltas = 0.0; // cached for the shifted energy E'
    int n = 0;
    int n_up = 0;

    /// y = H x. Pure; no shared mutable state.
    void matvec(const double* x, double* y) const {
        for (std::size_t k = 0; k < dimension; ++k) y[k] = diag[k] * x[k];
        for (const Entry& e : offdiag) {
            y[e.row] += e.value * x[e.col];
            y[e.col] += e.value * x[e.row];
        }
    }

    std::vector<double> matvec(const std::vector<double>& x) const {
        if (x.size() != dimension)
            throw std::invalid_argument("BandHamiltonian::matvec: size mismatch");
        std::vector<double> y(dimension);
        matvec(x.data(), y.data());
        return y;
    }

    double trace() const {
        double t = 0.0;
        for (double d : diag) t += d;
        return t;
    }

    double frobenius_sq() const {
        double f = 0.0;
        for (double d : diag) f += d * d;
        for (const Entry& e : offdiag) f += 2.0 * e.value * e.value;
        return f;
    }
};

inline BandHamiltonian build_band_hamiltonian(const LatticeSpec& lattice,
                                              const DisorderRealization& real,
                                              const BandBasis& basis) {
    if (static_cast<int>(real.deltas.size()) != lattice.n ||
        real.couplings.size() != lattice.bonds.size() || basis.n() != lattice.n)
        throw std::invalid_argument("build_band_hamiltonian: inconsistent sizes");

    BandHamiltonian h;
    h.dimension = basis.dimension();
    h.n = lattice.n;
    h.n_up = basis.n_up();
    h.sum_deltas = real.sum_deltas();
    h.diag.resize(h.dimension);

    for (std::size_t k = 0; k < h.dimension; ++k) {
        const std::uint32_t mask = basis.state(k);
        double d = 0.0;
        for (int i = 0; i < lattice.n; ++i)
            d += ((mask >> i) & 1u) ? real.deltas[i] : -real.deltas[i];
        h.diag[k] = d;
    }

    for (std::size_t k = 0; k < h.dimension; ++k) {
        const std::uint32_t mask = basis.state(k);
        for (std::size_t b = 0; b < lattice.bonds.size(); ++b) {
            const auto [i, j] = lattice.bonds[b];
            const std::uint32_t bi = 1u << i;
            const std::uint32_t bj = 1u << j;
            const bool up_i = mask & bi;
            const bool up_j = mask & bj;
            if (up_i == up_j) continue; // only anti-aligned spins exchange
            const std::uint32_t partner = mask ^ bi ^ bj;
            if (partner < mask) continue; // partner row emits the entry
            const std::size_t kp = basis.rank(partner);
            if (kp >= h.dimension || basis.state(kp) != partner)
                throw std::logic_error("build_band_hamiltonian: rank lookup miss");
            h.offdiag.push_back({static_cast<std::uint32_t>(k),
                                 static_cast<std::uint32_t>(kp), real.couplings[b]});
        }
    }
    return h;
}

/// E' = E/2 + sum_i delta_i / 2. For a J=0 eigenstate this equals the
/// sum of delta_i over the up spins.
inline double shifted_energy(double band_energy, double sum_deltas) {
    return band_energy / 2.0 + sum_deltas / 2.0;
}

} // namespace qlatt
