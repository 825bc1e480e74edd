#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlatt {

enum class SolverChoice { automatic, dense, iterative };

/// One experiment run: lattice, disorder ensemble, and per-kind knobs.
/// Values come from a flat key=value config file, overridden by CLI
/// flags.
struct ExperimentConfig {
    std::string kind;
    int rows = 3;
    int cols = 3;
    double delta = 1.0;
    std::vector<double> j_values{0.2};
    std::size_t n_realizations = 10;
    std::uint64_t base_seed = 1;
    double window_fraction = 0.05;
    std::size_t m_lo = 1; // 1-based inclusive level range, ascending energy
    std::size_t m_hi = 1;
    SolverChoice solver = SolverChoice::automatic;
    std::size_t dense_cap = 16000;
    std::size_t lanczos_extra = 8; // converged pairs beyond m_hi
    double lanczos_tol = 1e-10;
    std::size_t lanczos_max_iterations = 0;
    unsigned threads = 1;
    std::size_t n_windows = 6;    // eta-energy / sigma-energy
    double bin_width = 0.1;       // ps-hist
    double border_constant = 3.7; // theory
    std::string out_dir = "out";
    bool force = false;

    int n_sites() const { return rows * cols; }

    void validate() const {
        if (rows < 2 || cols < 2) throw std::invalid_argument("config: rows/cols must be >= 2");
        if (!(delta > 0.0)) throw std::invalid_argument("config: delta must be > 0");
        for (double j : j_values)
            if (j < 0.0) throw std::invalid_argument("config: J values must be >= 0");
        if (n_realizations == 0) throw std::invalid_argument("config: realizations must be > 0");
        if (!(window_fraction > 0.0) || window_fraction > 0.5)
            throw std::invalid_argument("config: window fraction must be in (0, 0.5]");
        if (m_lo == 0 || m_hi < m_lo)
            throw std::invalid_argument("config: level range must satisfy 1 <= m_lo <= m_hi");
    }
};

inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) values.push_back(std::stod(item));
    if (values.empty()) throw std::invalid_argument("expected a comma-separated number list");
    return values;
}

inline std::pair<std::size_t, std::size_t> parse_level_range(const std::string& text) {
    const auto pos = text.find(':');
    if (pos == std::string::npos) {
        const auto m = static_cast<std::size_t>(std::stoull(text));
        return {m, m};
    }
    return {static_cast<std::size_t>(std::stoull(text.substr(0, pos))),
            static_cast<std::size_t>(std::stoull(text.substr(pos + 1)))};
}

/// key=value lines, one key per line, `#` comments.
inline std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return (a == std::string::npos) ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
    if (key == "kind") cfg.kind = value;
    else if (key == "rows") cfg.rows = std::stoi(value);
    else if (key == "cols") cfg.cols = std::stoi(value);
    else if (key == "delta") cfg.delta = std::stod(value);
    else if (key == "J") cfg.j_values = parse_double_list(value);
    else if (key == "realizations") cfg.n_realizations = std::stoull(value);
    else if (key == "seed") cfg.base_seed = std::stoull(value);
    else if (key == "window") cfg.window_fraction = std::stod(value);
    else if (key == "levels") std::tie(cfg.m_lo, cfg.m_hi) = parse_level_range(value);
    else if (key == "dense_cap") cfg.dense_cap = std::stoull(value);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
    else if (key == "n_windows") cfg.n_windows = std::stoull(value);
    else if (key == "bin_width") cfg.bin_width = std::stod(value);
    else if (key == "border_constant") cfg.border_constant = std::stod(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "force") cfg.force = (value == "1" || value == "true");
    else if (key == "lanczos_tol") cfg.lanczos_tol = std::stod(value);
    else if (key == "lanczos_extra") cfg.lanczos_extra = std::stoull(value);
    else if (key == "lanczos_max_iterations") cfg.lanczos_max_iterations = std::stoull(value);
    else if (key == "solver") {
        if (value == "auto") cfg.solver = SolverChoice::automatic;
        else if (value == "dense") cfg.solver = SolverChoice::dense;
        else if (value == "iterative") cfg.solver = SolverChoice::iterative;
        else throw std::invalid_argument("config: unknown solver '" + value + "'");
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

inline void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
    for (const auto& [k, v] : read_config_file(path)) apply_config_entry(cfg, k, v);
}

} // namespace qlatt
