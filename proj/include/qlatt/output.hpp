#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "qlatt/csv.hpp"
#include "qlatt/config.hpp"
#include "qlatt/drivers.hpp"
#include "qlatt/theory.hpp"
#include "qlatt/version.hpp"

namespace qlatt {

inline std::string j_tag(double j) { return "J" + format_value(j); }

/// Config echo + provenance for the sidecar `<run>.meta`.
inline MetadataSidecar make_sidecar(const ExperimentConfig& cfg, double wall_seconds) {
    MetadataSidecar meta;
    meta.set("kind", cfg.kind);
    meta.set("rows", cfg.rows);
    meta.set("cols", cfg.cols);
    meta.set("delta", cfg.delta);
    std::string js;
    for (std::size_t i = 0; i < cfg.j_values.size(); ++i)
        js += format_value(cfg.j_values[i]) + (i + 1 < cfg.j_values.size() ? "," : "");
    meta.set("J", js);
    meta.set("realizations", static_cast<std::uint64_t>(cfg.n_realizations));
    meta.set("base_seed", cfg.base_seed);
    meta.set("window", cfg.window_fraction);
    meta.set("levels", std::to_string(cfg.m_lo) + ":" + std::to_string(cfg.m_hi));
    meta.set("dense_cap", static_cast<std::uint64_t>(cfg.dense_cap));
    meta.set("threads", static_cast<int>(cfg.threads));
    meta.set("wall_seconds", wall_seconds);
    meta.set("version", std::string(version_string));
    return meta;
}

inline void write_eta_scan(const std::vector<EtaScanPoint>& points, const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / "eta_scan.csv",
                  {"J_over_delta", "Jn_over_delta", "eta", "stderr", "n_spacings"},
                  "J_over_delta: delta; Jn_over_delta, eta, stderr, n_spacings: dimensionless",
                  cfg.force);
    for (const auto& p : points)
        csv.row({p.j / cfg.delta, p.j * cfg.n_sites() / cfg.delta, p.eta.eta, p.eta.stderr_boot,
                 static_cast<double>(p.eta.n_spacings)});
}

inline void write_eta_energy(const EtaEnergyResult& res, const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / ("eta_energy_" + j_tag(res.j) + ".csv"),
                  {"E_over_B", "eta", "n_spacings"}, "all columns dimensionless", cfg.force);
    for (std::size_t w = 0; w < res.eta.size(); ++w)
        csv.row({res.e_over_b[w], res.eta[w].eta,
                 static_cast<double>(res.eta[w].n_spacings)});
}

inline void write_ps_hist(const PsHistResult& res, const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / ("ps_hist_" + j_tag(res.j) + ".csv"),
                  {"s", "density", "poisson", "wigner"}, "all columns dimensionless", cfg.force);
    for (std::size_t b = 0; b < res.hist.bin_centers.size(); ++b)
        csv.row({res.hist.bin_centers[b], res.hist.density[b], res.hist.poisson[b],
                 res.hist.wigner[b]});
}

inline void write_occupations(const OccupationRunResult& res, const ExperimentConfig& cfg,
                              const std::filesystem::path& out_dir) {
    const std::string m_tag = "_m" + std::to_string(cfg.m_lo) + "-" + std::to_string(cfg.m_hi);
    {
        CsvWriter csv(out_dir / ("occupations_" + j_tag(res.j) + m_tag + ".csv"),
                      {"site", "delta_i", "n_i", "n_i_fd", "m_range", "T_fd", "sigma_fd"},
                      "delta_i, T_fd: delta; n_i, n_i_fd, sigma_fd: dimensionless; m_range: "
                      "m_lo + m_hi/1000",
                      cfg.force);
        const double m_range =
            static_cast<double>(cfg.m_lo) + static_cast<double>(cfg.m_hi) / 1000.0;
        for (const auto& p : res.cloud)
            csv.row({static_cast<double>(p.site), p.delta_i, p.n_bar, p.n_fd, m_range,
                     res.fit.t_fd, res.sigma_fd_cloud});
    }
    {
        CsvWriter csv(out_dir / ("occupation_states_" + j_tag(res.j) + m_tag + ".csv"),
                      {"realization", "m", "E", "E_prime", "excitation", "T_fd", "sigma_fd",
                       "sigma_s", "S_q"},
                      "E, E_prime, excitation, T_fd: delta; sigma_fd, sigma_s, S_q: "
                      "dimensionless",
                      cfg.force);
        for (const auto& d : res.states)
            csv.row({static_cast<double>(d.realization), static_cast<double>(d.m), d.energy,
                     d.eprime, d.excitation, d.t_fd, d.sigma_fd, d.sigma_s, d.s_q});
    }
}

inline void write_sigma_scan(const std::vector<SigmaScanPoint>& points,
                             const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / "sigma_scan.csv",
                  {"J_over_delta", "Jn_over_delta", "sigma_fd", "sigma_s", "stderr"},
                  "all columns dimensionless", cfg.force);
    for (const auto& p : points)
        csv.row({p.j / cfg.delta, p.j * cfg.n_sites() / cfg.delta, p.sigma_fd_mean,
                 p.sigma_s_mean, p.sigma_fd_stderr});
}

inline void write_sigma_energy(const SigmaEnergyResult& res, const ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / ("sigma_energy_" + j_tag(res.j) + ".csv"),
                  {"E_over_B", "sigma_fd", "sigma_s_over_sqrt2"}, "all columns dimensionless",
                  cfg.force);
    for (std::size_t w = 0; w < res.e_over_b.size(); ++w)
        csv.row({res.e_over_b[w], res.sigma_fd[w], res.sigma_s[w] / std::sqrt(2.0)});
}

inline void write_temps(const TempsResult& res, const ExperimentConfig& cfg,
                        const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / ("temps_" + j_tag(res.j) + ".csv"),
                  {"E_over_B", "E_prime", "T_fd", "T_can", "T_th"},
                  "E_over_B: dimensionless; E_prime, T_fd, T_can, T_th: delta", cfg.force);
    for (const auto& row : res.states)
        csv.row({row.e_over_b, row.eprime, row.temps.t_fd, row.temps.t_can, row.temps.t_th});
}

inline void write_spectrum(const SpectrumRows& res, const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / "spectrum.csv", {"m", "E", "E_prime"},
                  "m: index (1-based); E, E_prime: delta", cfg.force);
    for (std::size_t m = 0; m < res.energies.size(); ++m)
        csv.row({static_cast<double>(m + 1), res.energies[m], res.shifted[m]});
}

inline void write_theory(const TheoryEstimates& t, double j_value, const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir) {
    CsvWriter csv(out_dir / "theory.csv",
                  {"n", "J_over_delta", "J_c", "Delta_c", "Delta_n_scaling",
                   "Delta_n_empirical", "Gamma_BW", "tau_chi", "N_B", "border_constant"},
                  "J_c, Delta_c, Delta_n_*, Gamma_BW: delta; tau_chi: 1/delta; others "
                  "dimensionless",
                  cfg.force);
    csv.row({static_cast<double>(t.n_sites), j_value / cfg.delta, t.j_c, t.delta_c,
             t.delta_n_scaling, t.delta_n_empirical, t.gamma_bw, t.tau_chi,
             static_cast<double>(t.n_b), t.border_constant});
}

} // namespace qlatt
