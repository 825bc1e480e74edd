#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qlatt/basis.hpp"

namespace qlatt {

/// Shannon entropy (base 2) of an eigenstate's weights over the
/// computational basis states, with 0*log(0) := 0.
inline double eigenstate_entropy(const std::vector<double>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("eigenstate_entropy: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw std::invalid_argument("eigenstate_entropy: weights do not sum to 1");
    double s = 0.0;
    for (double w : weights)
        if (w > 0.0) s -= w * std::log2(w);
    return s;
}

inline double eigenstate_entropy_from_vector(const double* vec, std::size_t dim) {
    double s = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double w = vec[k] * vec[k];
        sum += w;
        if (w > 0.0) s -= w * std::log2(w);
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw std::invalid_argument("eigenstate_entropy: vector is not unit norm");
    return s;
}

/// Per-site occupation probabilities of one eigenstate plus its energy
/// bookkeeping (band-relative E, shifted E', excitation above the band's
/// lowest E').
struct OccupationProfile {
    std::size_t m = 0;
    std::vector<double> occupations;
    double energy = 0.0;
    double shifted = 0.0;
    double excitation = 0.0;
};

/// n_i = sum over basis states with bit i set of the squared amplitude.
inline std::vector<double> occupation_numbers(const double* vec, const BandBasis& basis) {
    std::vector<double> occ(basis.n(), 0.0);
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
        const double w = vec[k] * vec[k];
        std::uint32_t mask = basis.state(k);
        while (mask != 0) {
            const int bit = std::countr_zero(mask);
            occ[bit] += w;
            mask &= mask - 1;
        }
    }
    return occ;
}

inline double fd_occupation(double beta, double mu, double eps) {
    return 1.0 / (std::exp(beta * (eps - mu)) + 1.0);
}

/// Chemical potential solving sum_i f(beta, mu, eps_i) = target by
/// bisection; the sum is strictly monotone in mu for beta != 0
/// (increasing for beta > 0, decreasing for beta < 0). At beta = 0
/// every term is 1/2 regardless of mu, and mu := delta/2 by convention.
inline double fd_mu_solve(double beta, const std::vector<double>& epsilons, double target,
                          double delta) {
    const auto n = static_cast<double>(epsilons.size());
    if (!(target > 0.0) || !(target < n))
        throw std::invalid_argument("fd_mu_solve: target filling must be strictly inside (0, n)");
    if (beta == 0.0) return delta / 2.0;

    const auto [mn, mx] = std::minmax_element(epsilons.begin(), epsilons.end());
    const double pad = 10.0 / std::abs(beta);
    double lo = *mn - pad, hi = *mx + pad;
    auto filling = [&](double mu) {
        double s = 0.0;
        for (double e : epsilons) s += fd_occupation(beta, mu, e);
        return s;
    };
    // filling is monotone between lo and hi up to exp(-10) tails
    const double sign = (beta > 0.0) ? 1.0 : -1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sign * (filling(mid) - target) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * (1.0 + std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

struct FDFit {
    double beta = 0.0;
    double mu = 0.0;
    double t_fd = std::numeric_limits<double>::infinity(); // 1/beta, +inf at beta=0
    double sigma_fd = 0.0;
    bool flat_profile = false;
};

inline constexpr double fd_beta_max = 1e3;

namespace detail {

inline double fd_objective(double beta, const std::vector<double>& occ,
                           const std::vector<double>& epsilons, double target, double delta,
                           double* mu_out = nullptr) {
    const double mu = fd_mu_solve(beta, epsilons, target, delta);
    if (mu_out) *mu_out = mu;
    double obj = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        const double d = occ[i] - fd_occupation(beta, mu, epsilons[i]);
        obj += d * d;
    }
    return obj;
}

} // namespace detail

/// Least-squares Fermi-Dirac fit with the filling constraint: beta is
/// located by a 129-point grid (beta = 0 plus 64 log-spaced magnitudes
/// per sign) followed by golden-section refinement between the
/// neighboring grid points.
inline FDFit fd_fit(const std::vector<double>& occupations, const std::vector<double>& epsilons,
                    double target, double delta) {
    if (occupations.size() != epsilons.size() || occupations.empty())
        throw std::invalid_argument("fd_fit: size mismatch");

    FDFit fit;
    const auto [omin, omax] = std::minmax_element(occupations.begin(), occupations.end());
    if (*omax - *omin < 1e-12) {
        fit.flat_profile = true;
        fit.beta = 0.0;
        fit.mu = delta / 2.0;
        double obj = detail::fd_objective(0.0, occupations, epsilons, target, delta);
        fit.sigma_fd = std::sqrt(obj / static_cast<double>(occupations.size()));
        return fit;
    }

    std::vector<double> grid;
    grid.push_back(0.0);
    const int per_sign = 64;
    for (int i = 0; i < per_sign; ++i) {
        const double mag =
            1e-3 * std::pow(fd_beta_max / 1e-3, static_cast<double>(i) / (per_sign - 1));
        grid.push_back(mag / delta);
        grid.push_back(-mag / delta);
    }
    std::sort(grid.begin(), grid.end());

    std::size_t best = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double obj = detail::fd_objective(grid[g], occupations, epsilons, target, delta);
        if (obj < best_obj) {
            best_obj = obj;
            best = g;
        }
    }

    double a = (best == 0) ? grid[0] : grid[best - 1];
    double b = (best + 1 == grid.size()) ? grid.back() : grid[best + 1];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = detail::fd_objective(x1, occupations, epsilons, target, delta);
    double f2 = detail::fd_objective(x2, occupations, epsilons, target, delta);
    while (b - a > 1e-6 / delta) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = detail::fd_objective(x1, occupations, epsilons, target, delta);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = detail::fd_objective(x2, occupations, epsilons, target, delta);
        }
    }
    double beta_star = 0.5 * (a + b);
    // keep beta = 0 exactly when the grid point wins outright
    if (grid[best] == 0.0 && best_obj <= std::min(f1, f2)) beta_star = 0.0;

    fit.beta = beta_star;
    const double obj = detail::fd_objective(beta_star, occupations, epsilons, target, delta, &fit.mu);
    fit.sigma_fd = std::sqrt(obj / static_cast<double>(occupations.size()));
    fit.t_fd = (fit.beta == 0.0) ? std::numeric_limits<double>::infinity() : 1.0 / fit.beta;
    return fit;
}

/// RMS deviation of a profile from its Fermi-Dirac fit.
inline double sigma_fd(const std::vector<double>& occupations,
                       const std::vector<double>& epsilons, const FDFit& fit) {
    double s = 0.0;
    for (std::size_t i = 0; i < occupations.size(); ++i) {
        const double d = occupations[i] - fd_occupation(fit.beta, fit.mu, epsilons[i]);
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(occupations.size()));
}

/// RMS change of the occupations between consecutive eigenstates.
inline double sigma_s(const std::vector<double>& occ_m, const std::vector<double>& occ_m1) {
    if (occ_m.size() != occ_m1.size() || occ_m.empty())
        throw std::invalid_argument("sigma_s: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < occ_m.size(); ++i) {
        const double d = occ_m1[i] - occ_m[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(occ_m.size()));
}

struct CanonicalTemperature {
    double t_can = std::numeric_limits<double>::infinity();
    double beta_can = 0.0;
    bool out_of_range = false; // target outside the open spectral range
    bool clamped = false;      // |beta| hit the bracket edge
};

inline constexpr double t_can_beta_max = 1e3;

namespace detail {

/// Canonical mean energy sum_m E_m exp(-beta E'_m) / sum_m exp(-beta E'_m),
/// max-shifted for overflow safety. Strictly decreasing in beta because
/// E' = E/2 + const.
inline double canonical_energy(const std::vector<double>& energies,
                               const std::vector<double>& shifted, double beta) {
    double wmax = -std::numeric_limits<double>::infinity();
    for (double ep : shifted) wmax = std::max(wmax, -beta * ep);
    double zsum = 0.0, esum = 0.0;
    for (std::size_t m = 0; m < energies.size(); ++m) {
        const double w = std::exp(-beta * shifted[m] - wmax);
        zsum += w;
        esum += w * energies[m];
    }
    return esum / zsum;
}

} // namespace detail

/// Temperature solving the canonical energy-matching condition by
/// bisection in beta = 1/T over [-t_can_beta_max, t_can_beta_max].
inline CanonicalTemperature t_canonical(const std::vector<double>& energies,
                                        const std::vector<double>& shifted,
                                        double target_energy) {
    if (energies.size() != shifted.size() || energies.size() < 2)
        throw std::invalid_argument("t_canonical: need a full band spectrum");

    CanonicalTemperature out;
    const auto [emin, emax] = std::minmax_element(energies.begin(), energies.end());
    if (!(target_energy > *emin) || !(target_energy < *emax)) {
        out.out_of_range = true;
        out.t_can = (target_energy >= *emax) ? -std::numeric_limits<double>::infinity()
                                             : std::numeric_limits<double>::infinity();
        out.beta_can = 0.0;
        return out;
    }

    double lo = -t_can_beta_max, hi = t_can_beta_max;
    const double e_lo = detail::canonical_energy(energies, shifted, lo); // near max
    const double e_hi = detail::canonical_energy(energies, shifted, hi); // near min
    if (target_energy > e_lo || target_energy < e_hi) {
        // root lies beyond the bracket; clamp (|T| < 1/beta_max there)
        out.clamped = true;
        out.beta_can = (target_energy > e_lo) ? lo : hi;
        out.t_can = 1.0 / out.beta_can;
        return out;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::canonical_energy(energies, shifted, mid) > target_energy)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * (1.0 + std::abs(mid))) break;
    }
    out.beta_can = 0.5 * (lo + hi);
    out.t_can = (out.beta_can == 0.0) ? std::numeric_limits<double>::infinity()
                                      : 1.0 / out.beta_can;
    return out;
}

/// Gaussian density of states by moment matching on the shifted
/// energies E'.
struct DosFit {
    double mean = 0.0;
    double sigma2 = 0.0; // variance of the E' sample
};

inline DosFit dos_fit(const std::vector<double>& shifted) {
    if (shifted.size() < 2) throw std::invalid_argument("dos_fit: need at least 2 levels");
    DosFit fit;
    for (double e : shifted) fit.mean += e;
    fit.mean /= static_cast<double>(shifted.size());
    for (double e : shifted) fit.sigma2 += (e - fit.mean) * (e - fit.mean);
    fit.sigma2 /= static_cast<double>(shifted.size());
    if (!(fit.sigma2 > 0.0)) throw std::runtime_error("dos_fit: zero variance");
    return fit;
}

/// T_th = -Var(E') / (E' - mean): positive below the DOS peak, negative
/// above, infinite at the peak.
inline double t_thermodynamic(const DosFit& dos, double eprime) {
    const double d = eprime - dos.mean;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return -dos.sigma2 / d;
}

struct TemperatureSet {
    double t_fd = 0.0;
    double t_can = 0.0;
    double t_th = 0.0;
};

} // namespace qlatt
