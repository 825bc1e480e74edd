#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qlatt/rng.hpp"

namespace qlatt {

// First intersection point of the Poisson and Wigner surmise densities.
inline constexpr double eta_s0 = 0.4729;

inline double poisson_density(double s) { return std::exp(-s); }
inline double wigner_density(double s) {
    return (std::numbers::pi * s / 2.0) * std::exp(-std::numbers::pi * s * s / 4.0);
}
inline double poisson_cdf(double s) { return 1.0 - std::exp(-s); }
inline double wigner_cdf(double s) { return 1.0 - std::exp(-std::numbers::pi * s * s / 4.0); }

/// Consecutive-level gaps normalized to unit mean within one window of
/// one realization.
struct SpacingSample {
    std::vector<double> spacings;
    double window_lo = 0.0; // level-index fractions of the window
    double window_hi = 1.0;

    std::size_t count() const { return spacings.size(); }

    void merge(const SpacingSample& other) {
        spacings.insert(spacings.end(), other.spacings.begin(), other.spacings.end());
    }
};

struct EtaResult {
    double eta = 0.0;
    std::size_t n_spacings = 0;
    double stderr_boot = 0.0;
};

struct IndexRange {
    std::size_t first = 0; // inclusive
    std::size_t last = 0;  // exclusive
    std::size_t size() const { return last - first; }
};

/// The 2*fraction*N contiguous levels centered on index N/2, selected
/// by level count (round half up per side, symmetric trim).
inline IndexRange central_window(const std::vector<double>& eigs, double fraction) {
    if (!(fraction > 0.0) || fraction > 0.5)
        throw std::invalid_argument("central_window: fraction must be in (0, 0.5]");
    const std::size_t n = eigs.size();
    const auto half = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
    const std::size_t count = std::min(2 * half, n);
    if (count < 3) throw std::invalid_argument("central_window: fewer than 3 levels in window");
    const std::size_t first = (n - count) / 2;
    return {first, first + count};
}

inline SpacingSample normalized_spacings(const std::vector<double>& eigs, IndexRange window) {
    if (window.last > eigs.size() || window.size() < 3)
        throw std::invalid_argument("normalized_spacings: need at least 3 levels");
    SpacingSample sample;
    sample.spacings.reserve(window.size() - 1);
    double mean = 0.0;
    for (std::size_t i = window.first + 1; i < window.last; ++i) {
        const double gap = eigs[i] - eigs[i - 1];
        sample.spacings.push_back(gap);
        mean += gap;
    }
    mean /= static_cast<double>(sample.spacings.size());
    if (!(mean > 0.0))
        throw std::runtime_error("normalized_spacings: zero mean gap (degenerate window)");
    for (double& s : sample.spacings) s /= mean;
    return sample;
}

inline SpacingSample normalized_spacings(const std::vector<double>& eigs) {
    return normalized_spacings(eigs, {0, eigs.size()});
}

/// Raw consecutive gaps within a window, no normalization. Ensemble
/// drivers pool these across realizations and normalize by the pooled
/// mean: with narrow windows (11 spacings at n=9) normalizing each
/// realization by its own sample mean biases the empirical CDF and
/// drags eta down by ~0.1 even for ideal Poisson levels.
inline std::vector<double> window_gaps(const std::vector<double>& eigs, IndexRange window) {
    if (window.last > eigs.size() || window.size() < 3)
        throw std::invalid_argument("window_gaps: need at least 3 levels");
    std::vector<double> gaps;
    gaps.reserve(window.size() - 1);
    for (std::size_t i = window.first + 1; i < window.last; ++i)
        gaps.push_back(eigs[i] - eigs[i - 1]);
    return gaps;
}

/// Normalize a pooled gap list to unit mean.
inline SpacingSample normalize_pooled(const std::vector<double>& gaps) {
    if (gaps.empty()) throw std::invalid_argument("normalize_pooled: empty gap list");
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());
    if (!(mean > 0.0)) throw std::runtime_error("normalize_pooled: zero mean gap");
    SpacingSample sample;
    sample.spacings.reserve(gaps.size());
    for (double g : gaps) sample.spacings.push_back(g / mean);
    return sample;
}

/// Crossover parameter from the empirical CDF at s0. This evaluates the
/// ratio of integrals int_0^s0 (P - P_W) / int_0^s0 (P_P - P_W) without
/// binning: eta = 1 for Poisson spacings, 0 for Wigner-Dyson.
inline EtaResult eta_from_spacings(const SpacingSample& sample, std::size_t bootstrap = 200,
                                   std::uint64_t bootstrap_seed = 0x6c62272e07bb0142ull) {
    if (sample.spacings.empty())
        throw std::invalid_argument("eta_from_spacings: empty sample");
    const double fp = poisson_cdf(eta_s0);
    const double fw = wigner_cdf(eta_s0);
    auto eta_of = [&](double below_count, double total) {
        const double fhat = below_count / total;
        return (fhat - fw) / (fp - fw);
    };
    const auto n = static_cast<double>(sample.spacings.size());
    double below = 0.0;
    for (double s : sample.spacings)
        if (s < eta_s0) below += 1.0;

    EtaResult res;
    res.eta = eta_of(below, n);
    res.n_spacings = sample.spacings.size();

    if (bootstrap > 0 && sample.spacings.size() > 1) {
        // the statistic depends only on the below-s0 count, so resample it
        UniformRng rng(bootstrap_seed);
        const double p = below / n;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t b = 0; b < bootstrap; ++b) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < sample.spacings.size(); ++i)
                if (rng.next_unit() < p) ++hits;
            const double e = eta_of(static_cast<double>(hits), n);
            sum += e;
            sum2 += e * e;
        }
        const double bmean = sum / static_cast<double>(bootstrap);
        res.stderr_boot =
            std::sqrt(std::max(0.0, sum2 / static_cast<double>(bootstrap) - bmean * bmean));
    }
    return res;
}

struct PsHistogram {
    std::vector<double> bin_centers;
    std::vector<double> density; // integrates to 1
    std::vector<double> poisson; // P_P at bin centers
    std::vector<double> wigner;  // P_W at bin centers
    double bin_width = 0.0;
};

inline PsHistogram ps_histogram(const SpacingSample& sample, double bin_width) {
    if (!(bin_width > 0.0)) throw std::invalid_argument("ps_histogram: bin_width must be > 0");
    PsHistogram h;
    h.bin_width = bin_width;
    const double s_max = *std::max_element(sample.spacings.begin(), sample.spacings.end());
    const auto nbins = static_cast<std::size_t>(std::floor(s_max / bin_width)) + 1;
    h.bin_centers.resize(nbins);
    h.density.assign(nbins, 0.0);
    for (double s : sample.spacings) {
        auto b = static_cast<std::size_t>(s / bin_width);
        if (b >= nbins) b = nbins - 1;
        h.density[b] += 1.0;
    }
    const double norm = static_cast<double>(sample.spacings.size()) * bin_width;
    for (std::size_t b = 0; b < nbins; ++b) {
        h.bin_centers[b] = (static_cast<double>(b) + 0.5) * bin_width;
        h.density[b] /= norm;
    }
    h.poisson.resize(nbins);
    h.wigner.resize(nbins);
    for (std::size_t b = 0; b < nbins; ++b) {
        h.poisson[b] = poisson_density(h.bin_centers[b]);
        h.wigner[b] = wigner_density(h.bin_centers[b]);
    }
    return h;
}

/// Equal-count windows over the E < 0 half of one spectrum (the DOS is
/// symmetric about 0). Returns per-window spacing samples plus the mean
/// E/B of each window, with B the full numerical band width.
struct EnergyWindowSpacings {
    std::vector<SpacingSample> windows;   // normalized within this realization
    std::vector<std::vector<double>> gaps; // raw gaps for ensemble pooling
    std::vector<double> e_over_b; // mean energy of each window / band width
};

inline EnergyWindowSpacings energy_window_spacings(const std::vector<double>& eigs,
                                                   std::size_t n_windows) {
    if (n_windows == 0) throw std::invalid_argument("energy_window_spacings: need >= 1 window");
    const double band_width = eigs.back() - eigs.front();
    if (!(band_width > 0.0))
        throw std::runtime_error("energy_window_spacings: degenerate spectrum");
    std::size_t n_neg = 0;
    while (n_neg < eigs.size() && eigs[n_neg] < 0.0) ++n_neg;
    const std::size_t per = n_neg / n_windows;
    if (per < 4) throw std::invalid_argument("energy_window_spacings: window too thin");

    EnergyWindowSpacings out;
    for (std::size_t w = 0; w < n_windows; ++w) {
        const std::size_t first = w * per;
        const std::size_t last = (w + 1 == n_windows) ? n_neg : (w + 1) * per;
        out.windows.push_back(normalized_spacings(eigs, {first, last}));
        out.gaps.push_back(window_gaps(eigs, {first, last}));
        double mean_e = 0.0;
        for (std::size_t i = first; i < last; ++i) mean_e += eigs[i];
        out.e_over_b.push_back(mean_e / static_cast<double>(last - first) / band_width);
    }
    return out;
}

} // namespace qlatt
