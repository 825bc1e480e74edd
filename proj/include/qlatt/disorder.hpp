#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qlatt/lattice.hpp"
#include "qlatt/rng.hpp"

namespace qlatt {

/// Model parameters in units of the detuning width delta (delta = 1
/// internally). delta0 is the mean qubit spacing, used only when the
/// full 2^n Hamiltonian is assembled for validation.
struct ModelParams {
    double delta = 1.0;  // detuning width
    double J = 0.0;      // coupling amplitude, |J_ij| <= J
    double delta0 = 0.0; // qubit spacing, full-H validation only

    void validate() const {
        if (!(delta > 0.0)) throw std::invalid_argument("ModelParams: delta must be > 0");
        if (J < 0.0) throw std::invalid_argument("ModelParams: J must be >= 0");
    }
};

/// One draw of per-site detunings and per-bond couplings together with
/// the seed that produced it.
struct DisorderRealization {
    std::uint64_t seed = 0;
    std::vector<double> deltas;    // delta_i in [-delta/2, delta/2]
    std::vector<double> couplings; // J_ij in [-J, J], one per bond

    double sum_deltas() const {
        double s = 0.0;
        for (double d : deltas) s += d;
        return s;
    }
};

/// Draw order is part of the stable contract: all sites in index order,
/// then all bonds in bond order.
inline DisorderRealization sample_disorder(const ModelParams& params,
                                           const LatticeSpec& lattice,
                                           std::uint64_t seed) {
    params.validate();
    DisorderRealization real;
    real.seed = seed;
    UniformRng rng(seed);
    real.deltas.reserve(lattice.n);
    for (int i = 0; i < lattice.n; ++i)
        real.deltas.push_back(rng.next_in(-params.delta / 2.0, params.delta / 2.0));
    real.couplings.reserve(lattice.bonds.size());
    for (std::size_t b = 0; b < lattice.bonds.size(); ++b)
        real.couplings.push_back(rng.next_in(-params.J, params.J));
    return real;
}

} // namespace qlatt
