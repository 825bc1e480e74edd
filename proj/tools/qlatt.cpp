// Command-line front end: one subcommand per experiment kind, flat
// key=value config files, CSV outputs with provenance sidecars.

#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlatt/experiment.hpp"
#include "qlatt/theory.hpp"
#include "qlatt/version.hpp"

namespace {

struct CommonFlags {
    // flag values route through apply_config_entry, so the CLI and the
    // config file share one vocabulary; CLI flags win
    std::map<std::string, std::string> values;
    std::vector<std::string> provided; // in declaration order
    std::string config_path;
    bool force = false;

    void apply(qlatt::ExperimentConfig& cfg) const {
        if (!config_path.empty()) qlatt::apply_config_file(cfg, config_path);
        for (const auto& key : provided) qlatt::apply_config_entry(cfg, key, values.at(key));
        if (force) cfg.force = true;
    }
};

void add_common_options(CLI::App* sub, CommonFlags& flags) {
    auto add = [sub, &flags](const std::string& flag, const std::string& key,
                             const std::string& desc) {
        sub->add_option_function<std::string>(
               flag,
               [&flags, key](const std::string& v) {
                   flags.values[key] = v;
                   flags.provided.push_back(key);
               },
               desc)
            ->take_last();
    };
    add("--rows", "rows", "lattice rows (>= 2)");
    add("--cols", "cols", "lattice columns (>= 2)");
    add("--delta", "delta", "detuning width delta (energy unit)");
    add("--J", "J", "coupling amplitude(s), comma-separated, units of delta");
    add("--seed", "seed", "base seed; realization r uses seed+r");
    add("--realizations", "realizations", "number of disorder realizations");
    add("--window", "window", "central window fraction (default 0.05)");
    add("--levels", "levels", "1-based level range m_lo:m_hi, ascending energy");
    add("--dense-cap", "dense_cap", "max band dimension for dense diagonalization");
    add("--threads", "threads", "worker threads (1 forces serial execution)");
    add("--n-windows", "n_windows", "energy windows for eta-energy/sigma-energy");
    add("--bin-width", "bin_width", "P(s) histogram bin width");
    add("--border-constant", "border_constant", "chaos border constant C in J_c = C*delta/n");
    add("--solver", "solver", "auto | dense | iterative");
    add("--lanczos-tol", "lanczos_tol", "iterative residual tolerance");
    add("--lanczos-extra", "lanczos_extra", "extra converged pairs beyond m_hi");
    add("--lanczos-max-iterations", "lanczos_max_iterations", "iteration budget (0 = auto)");
    add("--out", "out", "output directory");
    sub->add_option("--config", flags.config_path, "key=value config file");
    sub->add_flag("--force", flags.force, "overwrite existing output files");
}

void print_theory(const qlatt::ExperimentConfig& cfg) {
    const int n = cfg.n_sites();
    const double j = cfg.j_values.front();
    const auto t = qlatt::theory_estimates(n, cfg.delta, j, cfg.border_constant);
    std::printf("n        = %d\n", n);
    std::printf("N_B      = %llu\n", static_cast<unsigned long long>(t.n_b));
    std::printf("J        = %s delta\n", qlatt::format_value(j / cfg.delta).c_str());
    std::printf("J_c      = %s delta  (C = %s)\n", qlatt::format_value(t.j_c).c_str(),
                qlatt::format_value(t.border_constant).c_str());
    std::printf("Delta_c  = %s delta\n", qlatt::format_value(t.delta_c).c_str());
    std::printf("Delta_n  ~ %s delta\n", qlatt::format_value(t.delta_n_scaling).c_str());
    std::printf("Gamma_BW = %s delta\n", qlatt::format_value(t.gamma_bw).c_str());
    std::printf("tau_chi  = %s / delta\n", qlatt::format_value(t.tau_chi).c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"disordered qubit-lattice band simulator"};
    app.set_version_flag("--version", qlatt::version_string);
    app.require_subcommand(1);

    struct SubSpec {
        const char* name;
        const char* kind;
        const char* desc;
    };
    const std::vector<SubSpec> subs = {
        {"spectrum", "spectrum", "eigenvalues of one disorder realization"},
        {"eta-scan", "eta_scan", "level-statistics crossover parameter vs coupling"},
        {"eta-energy", "eta_energy", "energy-resolved crossover parameter"},
        {"ps-hist", "ps_hist", "level spacing histogram with reference curves"},
        {"occupations", "occupations", "occupation profiles and Fermi-Dirac fits"},
        {"sigma-scan", "sigma_scan", "thermalization deviation vs coupling"},
        {"sigma-energy", "sigma_energy", "thermalization deviation vs energy"},
        {"temps", "temps", "Fermi-Dirac, canonical, and thermodynamic temperatures"},
        {"theory", "theory", "analytic chaos-border and scale estimates"},
    };

    std::map<std::string, std::pair<CLI::App*, CommonFlags*>> handlers;
    std::vector<std::unique_ptr<CommonFlags>> storage;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.desc);
        storage.push_back(std::make_unique<CommonFlags>());
        add_common_options(sub, *storage.back());
        handlers[s.name] = {sub, storage.back().get()};
    }

    int figure_id = 0;
    auto* fig = app.add_subcommand("figure", "regenerate the data behind one figure (1-9)");
    fig->add_option("id", figure_id, "figure number")->required()->check(CLI::Range(1, 9));
    storage.push_back(std::make_unique<CommonFlags>());
    CommonFlags& fig_flags = *storage.back();
    add_common_options(fig, fig_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fig->parsed()) {
            qlatt::ExperimentConfig cfg = qlatt::figure_defaults(figure_id);
            fig_flags.apply(cfg);
            qlatt::figure_driver(figure_id, cfg);
            return 0;
        }
        for (const auto& s : subs) {
            auto [sub, flags] = handlers[s.name];
            if (!sub->parsed()) continue;
            qlatt::ExperimentConfig cfg;
            cfg.kind = s.kind;
            flags->apply(cfg);
            cfg.validate();
            if (cfg.kind == "theory") print_theory(cfg);
            qlatt::run_experiment(cfg);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
