#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qlatt/basis.hpp"
#include "qlatt/spacing.hpp"

namespace qlatt {

/// Analytic scale estimates for the chaos/thermalization border. The
/// border constant C is a reported parameter, not a hard-coded truth:
/// level statistics place it near 3.7, the thermalization crossover
/// near 3.2.
struct TheoryEstimates {
    double j_c = 0.0;            // critical coupling C*delta/n
    double delta_c = 0.0;        // spacing of directly coupled states, delta/n
    double delta_n_scaling = 0.0;  // multi-qubit spacing scale n^{3/2} 2^{-n} delta
    double delta_n_empirical = 0.0; // mean central-window gap, 0 if no spectrum given
    double gamma_bw = 0.0;       // Breit-Wigner mixing width J^2 n / delta
    double tau_chi = 0.0;        // chaotic destruction time 1/gamma_bw
    std::uint64_t n_b = 0;       // central band dimension
    double border_constant = 0.0;

    double n_eff(double excitation, double delta) const {
        return std::sqrt(n_sites * excitation / delta);
    }

    int n_sites = 0;
};

inline constexpr double default_border_constant = 3.7;

inline TheoryEstimates theory_estimates(int n, double delta, double J,
                                        double border_constant = default_border_constant,
                                        const std::vector<double>* spectrum = nullptr,
                                        double window_fraction = 0.05) {
    if (n < 2) throw std::invalid_argument("theory_estimates: n must be >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("theory_estimates: delta must be > 0");

    TheoryEstimates t;
    t.n_sites = n;
    t.border_constant = border_constant;
    t.j_c = border_constant * delta / n;
    t.delta_c = delta / n;
    t.delta_n_scaling = std::pow(n, 1.5) * std::ldexp(delta, -n);
    t.gamma_bw = J * J * n / delta;
    t.tau_chi = (t.gamma_bw > 0.0) ? 1.0 / t.gamma_bw : std::numeric_limits<double>::infinity();
    t.n_b = binomial(n, central_n_up(n));

    if (spectrum && spectrum->size() >= 3) {
        const IndexRange w = central_window(*spectrum, window_fraction);
        const double span = (*spectrum)[w.last - 1] - (*spectrum)[w.first];
        t.delta_n_empirical = span / static_cast<double>(w.size() - 1);
    }
    return t;
}

} // namespace qlatt
