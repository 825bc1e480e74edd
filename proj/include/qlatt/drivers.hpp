#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlatt/band_hamiltonian.hpp"
#include "qlatt/basis.hpp"
#include "qlatt/config.hpp"
#include "qlatt/dense_solver.hpp"
#include "qlatt/disorder.hpp"
#include "qlatt/lanczos.hpp"
#include "qlatt/lattice.hpp"
#include "qlatt/parallel.hpp"
#include "qlatt/spacing.hpp"
#include "qlatt/theory.hpp"
#include "qlatt/thermo.hpp"

namespace qlatt {

/// Immutable per-run context shared read-only by all workers.
struct RunContext {
    LatticeSpec lattice;
    BandBasis basis;

    explicit RunContext(const ExperimentConfig& cfg)
        : lattice(build_lattice(cfg.rows, cfg.cols)),
          basis(lattice.n, central_n_up(lattice.n)) {}
};

/// Dense path when the band fits under the cap, otherwise the k_lowest
/// lowest eigenpairs by Lanczos.
inline SpectrumResult solve_band(const ExperimentConfig& cfg, const BandHamiltonian& h,
                                 bool want_vectors, std::size_t k_lowest) {
    const bool dense_ok = h.dimension <= cfg.dense_cap;
    const bool use_dense = (cfg.solver == SolverChoice::dense) ||
                           (cfg.solver == SolverChoice::automatic && dense_ok);
    if (use_dense) return dense_full_diag(h, want_vectors, cfg.dense_cap);
    if (k_lowest == 0)
        throw std::length_error(
            "band dimension " + std::to_string(h.dimension) +
            " exceeds the dense cap and this experiment needs the full spectrum");
    LanczosOptions opt;
    opt.tol = cfg.lanczos_tol;
    opt.max_iterations = cfg.lanczos_max_iterations;
    return iterative_extremal(h, std::min(k_lowest, h.dimension), SpectralSide::lowest, opt);
}

/// Run fn over all realizations of the ensemble; failures are excluded
/// from aggregation and counted, never aborting the run.
template <typename Fn>
auto run_realizations(const ExperimentConfig& cfg, Fn&& fn)
    -> std::pair<std::vector<decltype(fn(std::size_t{0}))>, std::size_t> {
    using T = decltype(fn(std::size_t{0}));
    auto results = parallel_map(cfg.n_realizations, cfg.threads,
                                [&](std::size_t r) -> std::optional<T> {
                                    try {
                                        return fn(r);
                                    } catch (const std::exception&) {
                                        return std::nullopt;
                                    }
                                });
    std::vector<T> ok;
    std::size_t failed = 0;
    for (auto& res : results) {
        if (res)
            ok.push_back(std::move(*res));
        else
            ++failed;
    }
    return {std::move(ok), failed};
}

// ---------------------------------------------------------------------------
// eta-scan (level statistics vs coupling)

struct EtaScanPoint {
    double j = 0.0;
    EtaResult eta;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

inline EtaScanPoint eta_scan_point(const ExperimentConfig& cfg, const RunContext& ctx,
                                   double j_value) {
    ModelParams params{cfg.delta, j_value, 0.0};
    auto [samples, failed] = run_realizations(cfg, [&](std::size_t r) {
        const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed + r);
        const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
        const auto spec = solve_band(cfg, h, false, 0);
        return window_gaps(spec.eigenvalues,
                           central_window(spec.eigenvalues, cfg.window_fraction));
    });
    if (samples.empty()) throw std::runtime_error("eta_scan_point: all realizations failed");
    std::vector<double> gaps;
    for (const auto& s : samples) gaps.insert(gaps.end(), s.begin(), s.end()); // index order
    EtaScanPoint pt;
    pt.j = j_value;
    pt.eta = eta_from_spacings(normalize_pooled(gaps));
    pt.n_ok = samples.size();
    pt.n_failed = failed;
    return pt;
}

inline std::vector<EtaScanPoint> eta_scan(const ExperimentConfig& cfg) {
    RunContext ctx(cfg);
    std::vector<EtaScanPoint> points;
    for (double j : cfg.j_values) points.push_back(eta_scan_point(cfg, ctx, j));
    return points;
}

// ---------------------------------------------------------------------------
// eta-energy (energy-resolved level statistics, E < 0 half band)

struct EtaEnergyResult {
    double j = 0.0;
    std::vector<double> e_over_b;
    std::vector<EtaResult> eta;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

inline EtaEnergyResult eta_vs_energy(const ExperimentConfig& cfg, const RunContext& ctx,
                                     double j_value) {
    ModelParams params{cfg.delta, j_value, 0.0};
    auto [per_real, failed] = run_realizations(cfg, [&](std::size_t r) {
        const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed + r);
        const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
        const auto spec = solve_band(cfg, h, false, 0);
        return energy_window_spacings(spec.eigenvalues, cfg.n_windows);
    });
    if (per_real.empty()) throw std::runtime_error("eta_vs_energy: all realizations failed");

    EtaEnergyResult out;
    out.j = j_value;
    out.n_ok = per_real.size();
    out.n_failed = failed;
    for (std::size_t w = 0; w < cfg.n_windows; ++w) {
        std::vector<double> gaps;
        double mean_e = 0.0;
        for (const auto& res : per_real) {
            gaps.insert(gaps.end(), res.gaps[w].begin(), res.gaps[w].end());
            mean_e += res.e_over_b[w];
        }
        out.e_over_b.push_back(mean_e / static_cast<double>(per_real.size()));
        out.eta.push_back(eta_from_spacings(normalize_pooled(gaps)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// ps-hist (level spacing histogram in the central window)

struct PsHistResult {
    double j = 0.0;
    PsHistogram hist;
    EtaResult eta;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

inline PsHistResult ps_hist(const ExperimentConfig& cfg, const RunContext& ctx, double j_value) {
    ModelParams params{cfg.delta, j_value, 0.0};
    auto [samples, failed] = run_realizations(cfg, [&](std::size_t r) {
        const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed + r);
        const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
        const auto spec = solve_band(cfg, h, false, 0);
        return window_gaps(spec.eigenvalues,
                           central_window(spec.eigenvalues, cfg.window_fraction));
    });
    if (samples.empty()) throw std::runtime_error("ps_hist: all realizations failed");
    std::vector<double> gaps;
    for (const auto& s : samples) gaps.insert(gaps.end(), s.begin(), s.end());
    const SpacingSample pooled = normalize_pooled(gaps);
    PsHistResult out;
    out.j = j_value;
    out.hist = ps_histogram(pooled, cfg.bin_width);
    out.eta = eta_from_spacings(pooled);
    out.n_ok = samples.size();
    out.n_failed = failed;
    return out;
}

// ---------------------------------------------------------------------------
// occupations (Fermi-Dirac profiles, ensemble-averaged or per-state)

struct StateDiagnostics {
    std::size_t realization = 0;
    std::size_t m = 0; // 1-based, ascending energy
    double energy = 0.0;
    double eprime = 0.0;
    double excitation = 0.0;
    double t_fd = 0.0;
    double sigma_fd = 0.0;
    double sigma_s = 0.0; // vs the next state; 0 for the last analyzed level
    double s_q = 0.0;
};

struct OccupationCloudPoint {
    std::size_t realization = 0;
    int site = 0;
    double delta_i = 0.0;
    double n_bar = 0.0; // averaged over the level range
    double n_fd = 0.0;  // pooled-cloud fit evaluated at this site
};

struct OccupationRunResult {
    double j = 0.0;
    std::vector<OccupationCloudPoint> cloud;
    FDFit fit;                  // fit to the pooled (delta_i, n_bar) cloud
    double sigma_fd_cloud = 0.0;
    double mean_s_q = 0.0;
    double mean_excitation = 0.0;
    std::vector<StateDiagnostics> states; // per (realization, level)
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

namespace detail {

struct OccupationRealization {
    std::size_t r = 0;
    std::vector<double> deltas;
    std::vector<double> n_bar;
    std::vector<StateDiagnostics> states;
};

} // namespace detail

inline OccupationRunResult occupation_run(const ExperimentConfig& cfg, const RunContext& ctx,
                                          double j_value) {
    cfg.validate();
    ModelParams params{cfg.delta, j_value, 0.0};
    const int n = ctx.lattice.n;
    const int n_up = ctx.basis.n_up();

    auto [per_real, failed] = run_realizations(cfg, [&](std::size_t r) {
        const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed + r);
        const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
        const std::size_t need = cfg.m_hi + 1 + cfg.lanczos_extra; // +1 for sigma_s
        const auto spec = solve_band(cfg, h, true, need);
        if (spec.eigenvalues.size() < cfg.m_hi)
            throw std::runtime_error("occupation_run: level range beyond solved spectrum");

        std::vector<double> epsilons(real.deltas);
        for (double& e : epsilons) e += cfg.delta / 2.0;
        const double e0_prime = shifted_energy(spec.eigenvalues[0], h.sum_deltas);

        detail::OccupationRealization out;
        out.r = r;
        out.deltas = real.deltas;
        out.n_bar.assign(n, 0.0);

        const std::size_t extra = (cfg.m_hi < spec.eigenvalues.size()) ? 1 : 0;
        std::vector<std::vector<double>> occs;
        for (std::size_t m = cfg.m_lo - 1; m < cfg.m_hi + extra; ++m)
            occs.push_back(occupation_numbers(spec.vector(m), ctx.basis));

        for (std::size_t m = cfg.m_lo - 1; m < cfg.m_hi; ++m) {
            const auto& occ = occs[m - (cfg.m_lo - 1)];
            StateDiagnostics d;
            d.realization = r;
            d.m = m + 1;
            d.energy = spec.eigenvalues[m];
            d.eprime = shifted_energy(d.energy, h.sum_deltas);
            d.excitation = d.eprime - e0_prime;
            d.s_q = eigenstate_entropy_from_vector(spec.vector(m), spec.dim);
            const auto fit = fd_fit(occ, epsilons, n_up, cfg.delta);
            d.t_fd = fit.t_fd;
            d.sigma_fd = fit.sigma_fd;
            const std::size_t next = m + 1 - (cfg.m_lo - 1);
            d.sigma_s = (next < occs.size()) ? sigma_s(occ, occs[next]) : 0.0;
            out.states.push_back(d);
            for (int i = 0; i < n; ++i) out.n_bar[i] += occ[i];
        }
        const auto n_levels = static_cast<double>(cfg.m_hi - cfg.m_lo + 1);
        for (double& v : out.n_bar) v /= n_levels;
        return out;
    });
    if (per_real.empty()) throw std::runtime_error("occupation_run: all realizations failed");

    OccupationRunResult out;
    out.j = j_value;
    out.n_ok = per_real.size();
    out.n_failed = failed;

    std::vector<double> pooled_occ, pooled_eps;
    for (const auto& res : per_real) {
        for (int i = 0; i < n; ++i) {
            pooled_occ.push_back(res.n_bar[i]);
            pooled_eps.push_back(res.deltas[i] + cfg.delta / 2.0);
        }
        for (const auto& d : res.states) {
            out.mean_s_q += d.s_q;
            out.mean_excitation += d.excitation;
        }
        out.states.insert(out.states.end(), res.states.begin(), res.states.end());
    }
    const auto n_states = static_cast<double>(out.states.size());
    out.mean_s_q /= n_states;
    out.mean_excitation /= n_states;

    const double target = static_cast<double>(per_real.size()) * n_up;
    out.fit = fd_fit(pooled_occ, pooled_eps, target, cfg.delta);
    out.sigma_fd_cloud = out.fit.sigma_fd;

    for (std::size_t p = 0; p < pooled_occ.size(); ++p) {
        OccupationCloudPoint pt;
        pt.realization = per_real[p / n].r;
        pt.site = static_cast<int>(p % n);
        pt.delta_i = pooled_eps[p] - cfg.delta / 2.0;
        pt.n_bar = pooled_occ[p];
        pt.n_fd = fd_occupation(out.fit.beta, out.fit.mu, pooled_eps[p]);
        out.cloud.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// sigma-scan (thermalization border, central window)

struct SigmaScanPoint {
    double j = 0.0;
    double sigma_fd_mean = 0.0;
    double sigma_s_mean = 0.0;
    double sigma_fd_stderr = 0.0;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

inline SigmaScanPoint sigma_scan_point(const ExperimentConfig& cfg, const RunContext& ctx,
                                       double j_value) {
    ModelParams params{cfg.delta, j_value, 0.0};
    const int n_up = ctx.basis.n_up();

    struct PerReal {
        double sigma_fd = 0.0;
        double sigma_s = 0.0;
    };
    auto [per_real, failed] = run_realizations(cfg, [&](std::size_t r) {
        const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed + r);
        const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
        const auto spec = solve_band(cfg, h, true, 0);
        const auto window = central_window(spec.eigenvalues, cfg.window_fraction);

        std::vector<double> epsilons(real.deltas);
        for (double& e : epsilons) e += cfg.delta / 2.0;

        PerReal acc;
        std::vector<double> prev_occ;
        std::size_t n_states = 0, n_pairs = 0;
        for (std::size_t m = window.first; m < window.last; ++m) {
            auto occ = occupation_numbers(spec.vector(m), ctx.basis);
            const auto fit = fd_fit(occ, epsilons, n_up, cfg.delta);
            acc.sigma_fd += fit.sigma_fd;
            ++n_states;
            if (!prev_occ.empty()) {
                acc.sigma_s += sigma_s(prev_occ, occ);
                ++n_pairs;
            }
            prev_occ = std::move(occ);
        }
        acc.sigma_fd /= static_cast<double>(n_states);
        acc.sigma_s /= static_cast<double>(n_pairs);
        return acc;
    });
    if (per_real.empty()) throw std::runtime_error("sigma_scan_point: all realizations failed");

    SigmaScanPoint pt;
    pt.j = j_value;
    pt.n_ok = per_real.size();
    pt.n_failed = failed;
    double sum = 0.0, sum2 = 0.0;
    for (const auto& pr : per_real) {
        pt.sigma_fd_mean += pr.sigma_fd;
        pt.sigma_s_mean += pr.sigma_s;
        sum += pr.sigma_fd;
        sum2 += pr.sigma_fd * pr.sigma_fd;
    }
    const auto nd = static_cast<double>(per_real.size());
    pt.sigma_fd_mean /= nd;
    pt.sigma_s_mean /= nd;
    if (per_real.size() > 1) {
        const double var = (sum2 - sum * sum / nd) / (nd - 1.0);
        pt.sigma_fd_stderr = std::sqrt(std::max(0.0, var) / nd);
    }
    return pt;
}

inline std::vector<SigmaScanPoint> sigma_scan(const ExperimentConfig& cfg) {
    RunContext ctx(cfg);
    std::vector<SigmaScanPoint> points;
    for (double j : cfg.j_values) points.push_back(sigma_scan_point(cfg, ctx, j));
    return points;
}

// ---------------------------------------------------------------------------
// sigma-energy (thermalization vs energy, E < 0 half band)

struct SigmaEnergyResult {
    double j = 0.0;
    std::vector<double> e_over_b;
    std::vector<double> sigma_fd;
    std::vector<double> sigma_s;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

inline SigmaEnergyResult sigma_vs_energy(const ExperimentConfig& cfg, const RunContext& ctx,
                                         double j_value) {
    ModelParams params{cfg.delta, j_value, 0.0};
    const int n_up = ctx.basis.n_up();

    struct PerReal {
        std::vector<double> e_over_b, sigma_fd, sigma_s;
    };
    auto [per_real, failed] = run_realizations(cfg, [&](std::size_t r) {
        const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed + r);
        const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
        const auto spec = solve_band(cfg, h, true, 0);
        const double band_width = spec.eigenvalues.back() - spec.eigenvalues.front();

        std::size_t n_neg = 0;
        while (n_neg < spec.eigenvalues.size() && spec.eigenvalues[n_neg] < 0.0) ++n_neg;
        const std::size_t per = n_neg / cfg.n_windows;
        if (per < 2) throw std::invalid_argument("sigma_vs_energy: window too thin");

        std::vector<double> epsilons(real.deltas);
        for (double& e : epsilons) e += cfg.delta / 2.0;

        PerReal out;
        for (std::size_t w = 0; w < cfg.n_windows; ++w) {
            const std::size_t first = w * per;
            const std::size_t last = (w + 1 == cfg.n_windows) ? n_neg : (w + 1) * per;
            double mean_e = 0.0, sfd = 0.0, ss = 0.0;
            std::vector<double> prev_occ;
            std::size_t n_pairs = 0;
            for (std::size_t m = first; m < last; ++m) {
                mean_e += spec.eigenvalues[m];
                auto occ = occupation_numbers(spec.vector(m), ctx.basis);
                const auto fit = fd_fit(occ, epsilons, n_up, cfg.delta);
                sfd += fit.sigma_fd;
                if (!prev_occ.empty()) {
                    ss += sigma_s(prev_occ, occ);
                    ++n_pairs;
                }
                prev_occ = std::move(occ);
            }
            const auto count = static_cast<double>(last - first);
            out.e_over_b.push_back(mean_e / count / band_width);
            out.sigma_fd.push_back(sfd / count);
            out.sigma_s.push_back(ss / static_cast<double>(n_pairs));
        }
        return out;
    });
    if (per_real.empty()) throw std::runtime_error("sigma_vs_energy: all realizations failed");

    SigmaEnergyResult out;
    out.j = j_value;
    out.n_ok = per_real.size();
    out.n_failed = failed;
    out.e_over_b.assign(cfg.n_windows, 0.0);
    out.sigma_fd.assign(cfg.n_windows, 0.0);
    out.sigma_s.assign(cfg.n_windows, 0.0);
    for (const auto& pr : per_real)
        for (std::size_t w = 0; w < cfg.n_windows; ++w) {
            out.e_over_b[w] += pr.e_over_b[w];
            out.sigma_fd[w] += pr.sigma_fd[w];
            out.sigma_s[w] += pr.sigma_s[w];
        }
    const auto nd = static_cast<double>(per_real.size());
    for (std::size_t w = 0; w < cfg.n_windows; ++w) {
        out.e_over_b[w] /= nd;
        out.sigma_fd[w] /= nd;
        out.sigma_s[w] /= nd;
    }
    return out;
}

// ---------------------------------------------------------------------------
// temps (three temperature definitions across the band; dense path only)

struct TempsStateRow {
    std::size_t realization = 0;
    std::size_t m = 0;
    double e_over_b = 0.0;
    double eprime = 0.0;
    TemperatureSet temps;
};

struct TempsResult {
    double j = 0.0;
    std::vector<TempsStateRow> states;
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

inline TempsResult temperature_comparison(const ExperimentConfig& cfg, const RunContext& ctx,
                                          double j_value) {
    if (ctx.basis.dimension() > cfg.dense_cap)
        throw std::length_error("temperature_comparison requires the dense path "
                                "(T_can and T_th need the full band spectrum)");
    ModelParams params{cfg.delta, j_value, 0.0};
    const int n_up = ctx.basis.n_up();

    auto [per_real, failed] = run_realizations(cfg, [&](std::size_t r) {
        const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed + r);
        const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
        const auto spec = dense_full_diag(h, true, cfg.dense_cap);
        const double band_width = spec.eigenvalues.back() - spec.eigenvalues.front();

        std::vector<double> shifted(spec.eigenvalues.size());
        for (std::size_t m = 0; m < shifted.size(); ++m)
            shifted[m] = shifted_energy(spec.eigenvalues[m], h.sum_deltas);
        const auto dos = dos_fit(shifted);

        std::vector<double> epsilons(real.deltas);
        for (double& e : epsilons) e += cfg.delta / 2.0;

        std::vector<TempsStateRow> rows;
        for (std::size_t m = 0; m < spec.eigenvalues.size(); ++m) {
            TempsStateRow row;
            row.realization = r;
            row.m = m + 1;
            row.e_over_b = spec.eigenvalues[m] / band_width;
            row.eprime = shifted[m];
            const auto occ = occupation_numbers(spec.vector(m), ctx.basis);
            row.temps.t_fd = fd_fit(occ, epsilons, n_up, cfg.delta).t_fd;
            row.temps.t_can = t_canonical(spec.eigenvalues, shifted, spec.eigenvalues[m]).t_can;
            row.temps.t_th = t_thermodynamic(dos, shifted[m]);
            rows.push_back(row);
        }
        return rows;
    });
    if (per_real.empty())
        throw std::runtime_error("temperature_comparison: all realizations failed");

    TempsResult out;
    out.j = j_value;
    out.n_ok = per_real.size();
    out.n_failed = failed;
    for (const auto& rows : per_real)
        out.states.insert(out.states.end(), rows.begin(), rows.end());
    return out;
}

// ---------------------------------------------------------------------------
// spectrum (one realization, eigenvalues + E')

struct SpectrumRows {
    std::vector<double> energies;
    std::vector<double> shifted;
    SolveMethod method = SolveMethod::dense;
};

inline SpectrumRows spectrum_run(const ExperimentConfig& cfg, const RunContext& ctx,
                                 double j_value) {
    ModelParams params{cfg.delta, j_value, 0.0};
    const auto real = sample_disorder(params, ctx.lattice, cfg.base_seed);
    const auto h = build_band_hamiltonian(ctx.lattice, real, ctx.basis);
    const auto spec = solve_band(cfg, h, false, cfg.m_hi + cfg.lanczos_extra);
    SpectrumRows out;
    out.method = spec.method;
    out.energies = spec.eigenvalues;
    for (double e : out.energies) out.shifted.push_back(shifted_energy(e, h.sum_deltas));
    return out;
}

} // namespace qlatt
