#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qlatt {

/// 12 significant digits; infinities as +inf/-inf. NaN is never a legal
/// serialized value.
inline std::string format_value(double v) {
    if (std::isnan(v)) throw std::invalid_argument("format_value: NaN is not serializable");
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline double parse_value(const std::string& s) {
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

/// CSV file with a header row and a `# units: ...` comment line.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
              const std::string& units, bool force) {
        if (std::filesystem::exists(path) && !force)
            throw std::runtime_error("refusing to overwrite " + path.string() +
                                     " (pass --force)");
        std::filesystem::create_directories(path.parent_path().empty() ? "."
                                                                       : path.parent_path());
        out_.open(path);
        if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out_ << "# units: " << units << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << format_value(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }

    void close() { out_.close(); }

private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::string units;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(',', start);
            parts.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# units:", 0) == 0) {
            t.units = line.substr(8);
            continue;
        }
        if (line[0] == '#') continue;
        if (t.columns.empty()) {
            t.columns = split(line);
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split(line)) row.push_back(parse_value(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Run provenance sidecar: flat key/value pairs written as JSON text.
class MetadataSidecar {
public:
    void set(const std::string& key, const std::string& value) { items_[key] = value; }
    void set(const std::string& key, double value) { items_[key] = format_value(value); }
    void set(const std::string& key, std::uint64_t value) { items_[key] = std::to_string(value); }
    void set(const std::string& key, int value) { items_[key] = std::to_string(value); }

    void write(const std::filesystem::path& path, bool force) const {
        if (std::filesystem::exists(path) && !force)
            throw std::runtime_error("refusing to overwrite " + path.string() +
                                     " (pass --force)");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << "{\n";
        std::size_t i = 0;
        for (const auto& [k, v] : items_) {
            out << "  \"" << k << "\": \"" << v << "\"";
            out << (++i < items_.size() ? ",\n" : "\n");
        }
        out << "}\n";
    }

private:
    std::map<std::string, std::string> items_;
};

} // namespace qlatt
