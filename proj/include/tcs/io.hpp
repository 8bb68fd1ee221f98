#pragma once

// CSV and manifest emission. Doubles are written with 17 significant digits,
// which round-trips exactly; identical inputs therefore produce byte-identical
// files. One writer per output file.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcs/grid.hpp"
#include "tcs/verify.hpp"

namespace tcs {

inline constexpr const char* k_version = "0.1.0";

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// FNV-1a 64-bit, used for the manifest checksums.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string snapshot_csv(const GridSolution& s) {
    std::string out;
    if (s.grid.dim == 1) {
        out += "x,u\n";
        for (int i = 0; i < s.grid.n[0]; ++i) {
            out += format_double(s.grid.center(0, i));
            out += ',';
            out += format_double(s.values[static_cast<std::size_t>(i)]);
            out += '\n';
        }
    } else {
        out += "x,y,u\n";
        for (int j = 0; j < s.grid.n[1]; ++j)
            for (int i = 0; i < s.grid.n[0]; ++i) {
                out += format_double(s.grid.center(0, i));
                out += ',';
                out += format_double(s.grid.center(1, j));
                out += ',';
                out += format_double(s.values[static_cast<std::size_t>(s.grid.index(i, j))]);
                out += '\n';
            }
    }
    return out;
}

// Gnuplot-friendly two-column variant.
inline std::string snapshot_dat(const GridSolution& s) {
    std::string out = "# x u\n";
    for (int i = 0; i < s.grid.n[0]; ++i) {
        out += format_double(s.grid.center(0, i));
        out += ' ';
        out += format_double(s.values[static_cast<std::size_t>(i)]);
        out += '\n';
    }
    return out;
}

inline std::string report_csv(const EntropyReport& rep) {
    std::string out = "inequality,phi_id,k,residual\n";
    for (const auto& r : rep.rows) {
        out += r.inequality;
        out += ',';
        out += std::to_string(r.phi_id);
        out += ',';
        out += format_double(r.k);
        out += ',';
        out += format_double(r.residual);
        out += '\n';
    }
    return out;
}

inline std::string report_summary(const EntropyReport& rep) {
    std::string out;
    out += "check: " + rep.check + "\n";
    out += "rows: " + std::to_string(rep.rows.size()) + "\n";
    out += "min_residual: " + format_double(rep.min_residual()) + "\n";
    out += "tol: " + format_double(rep.tol) + "\n";
    out += "pass: " + std::string(rep.pass() ? "yes" : "no") + "\n";
    out += "note: " + rep.note + "\n";
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
    if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

// Run manifest: config echo, version, wall time, and every output file with
// its checksum.
struct Manifest {
    std::string config_echo;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, std::uint64_t>> files;

    void add(const std::string& name, const std::string& bytes) {
        files.emplace_back(name, fnv1a64(bytes));
    }

    std::string render() const {
        std::string out;
        out += "# run manifest\n";
        out += "version = ";
        out += k_version;
        out += "\n";
        out += "wall_time_s = " + format_double(wall_seconds) + "\n";
        out += "[files]\n";
        for (const auto& [name, sum] : files) {
            char buf[24];
            std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(sum));
            out += name + " fnv1a64=" + buf + "\n";
        }
        out += "[config]\n";
        out += config_echo;
        if (!config_echo.empty() && config_echo.back() != '\n') out += '\n';
        return out;
    }
};

} // namespace tcs
