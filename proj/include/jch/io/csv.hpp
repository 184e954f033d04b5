// Numeric CSV tables written at round-trip precision

#pragma once

#include "jch/entanglement.hpp"
#include "jch/experiments.hpp"
#include "jch/spectral.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jch::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 17 significant digits: parsing the text gives back the same double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw IoError("csv: cannot parse number '" + text + "'");
    }
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw std::out_of_range("csv: no column '" + name + "'");
    }
};

inline void write_csv(const CsvTable& table, std::ostream& os) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) os << ',';
        os << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw IoError("csv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
}

inline void write_csv(const CsvTable& table, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("csv: cannot open '" + path.string() + "' for writing");
    write_csv(table, os);
    if (!os) throw IoError("csv: write to '" + path.string() + "' failed");
}

inline CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    if (!std::getline(is, line)) throw IoError("csv: missing header");
    table.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) throw IoError("csv: ragged row");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c));
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("csv: cannot open '" + path.string() + "'");
    return read_csv(is);
}

// ------------------------------ domain tables --------------------------------

// t_J, entropy, pi_a, then C_i_j per requested pair (1-based labels).
inline CsvTable series_table(const ObservableSeries& series) {
    CsvTable t;
    t.header = {"t_J", "entropy", "pi_a"};
    for (const auto& [i, j] : series.pairs) t.header.push_back("C_" + std::to_string(i) + "_" + std::to_string(j));
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::vector<double> row{series.times[s], series.entropy[s], series.pi_a[s]};
        for (const auto& channel : series.concurrence) row.push_back(channel[s]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline void write_series_csv(const ObservableSeries& series, const std::filesystem::path& path) {
    if (series.empty()) throw IoError("write_series_csv: empty series");
    write_csv(series_table(series), path);
}

// Header "i,1,2,...,N"; each row starts with its 1-based site index.
inline CsvTable map_table(const ConcurrenceMap& map) {
    CsvTable t;
    const int n = map.size();
    t.header.push_back("i");
    for (int j = 1; j <= n; ++j) t.header.push_back(std::to_string(j));
    for (int i = 1; i <= n; ++i) {
        std::vector<double> row{static_cast<double>(i)};
        for (int j = 1; j <= n; ++j) row.push_back(map(i, j));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline ConcurrenceMap map_from_table(const CsvTable& t) {
    const auto n = static_cast<Eigen::Index>(t.rows.size());
    if (static_cast<Eigen::Index>(t.header.size()) != n + 1) throw IoError("map csv: not square");
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 1)];
    }
    return ConcurrenceMap(std::move(m));
}

inline void write_map_csv(const ConcurrenceMap& map, const std::filesystem::path& path) {
    write_csv(map_table(map), path);
}

inline CsvTable modes_table(const ModeTable& modes) {
    CsvTable t;
    t.header = {"m", "k", "omega_k", "delta_k", "rabi_k", "eps_plus", "eps_minus"};
    for (const auto& mode : modes.modes) {
        t.rows.push_back({static_cast<double>(mode.m), mode.momentum, mode.freq, mode.detuning, mode.rabi,
                          mode.eps_plus, mode.eps_minus});
    }
    return t;
}

} // namespace jch::io
