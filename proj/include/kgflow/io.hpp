#pragma once

// Output files: CSV fields, errmap tables and sign-map PGMs, each with a '#' metadata header.
// Files are written to a temporary sibling and renamed into place, so readers never see a
// partial file.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <kgflow/conformal.hpp>
#include <kgflow/errors.hpp>
#include <kgflow/lattice.hpp>
#include <kgflow/version.hpp>

namespace kgflow {

inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "+inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct run_metadata {
    std::string hamiltonian;
    int order = 0;
    std::optional<int> grid;
    std::optional<double> t;
    std::optional<eval_mode> mode;
    std::optional<double> eps_blowup;
    unsigned threads = 0;
    std::vector<std::pair<std::string, std::string>> extra;
};

// Lines of the form "# key: value" (without the leading '#').
inline std::vector<std::string> metadata_lines(const run_metadata &m)
{
    std::vector<std::string> out;
    out.push_back(std::string("kgflow ") + version);
    out.push_back("hamiltonian: " + m.hamiltonian);
    out.push_back("order: " + std::to_string(m.order));
    if (m.grid) {
        out.push_back("grid: " + std::to_string(*m.grid));
        out.push_back("lattice: corners x_i = i/G, i = 0..G-1");
    }
    if (m.t) {
        out.push_back("t: " + format_double(*m.t));
    }
    if (m.mode) {
        out.push_back(std::string("mode: ") + to_string(*m.mode));
    }
    if (m.eps_blowup) {
        out.push_back("eps_blowup: " + format_double(*m.eps_blowup));
    }
    out.push_back("threads: " + std::to_string(m.threads));
    for (const auto &[k, v] : m.extra) {
        out.push_back(k + ": " + v);
    }
    return out;
}

inline std::string metadata_header(const run_metadata &m)
{
    std::string s;
    for (const auto &l : metadata_lines(m)) {
        s += "# " + l + "\n";
    }
    return s;
}

inline void write_file_atomic(const std::filesystem::path &path, const std::string &content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw error(error_kind::invalid_argument, "cannot open " + tmp.string() + " for writing");
        }
        os << content;
        os.flush();
        if (!os) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw error(error_kind::invalid_argument, "write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw error(error_kind::invalid_argument, "cannot rename into " + path.string());
    }
}

inline std::string field_csv(const field_grid &fg, const run_metadata &m)
{
    std::ostringstream os;
    os << metadata_header(m) << "x,y,re_h,im_residual,denom_abs,blowup\n";
    for (int i = 0; i < fg.grid; ++i) {
        for (int j = 0; j < fg.grid; ++j) {
            const auto &v = fg.at(i, j);
            os << format_double(fg.x(i)) << ',' << format_double(fg.y(j)) << ',' << format_double(v.h) << ','
               << format_double(v.im_residual) << ',' << format_double(v.denom_abs) << ',' << (v.blowup ? 1 : 0)
               << '\n';
        }
    }
    return os.str();
}

inline std::string errmap_csv(const std::vector<errmap_row> &rows, const run_metadata &m)
{
    std::ostringstream os;
    os << metadata_header(m) << "s,t,indicator\n";
    for (const auto &r : rows) {
        os << format_double(r.s) << ',' << format_double(r.t) << ',' << format_double(r.indicator) << '\n';
    }
    return os.str();
}

inline int pgm_level(sign_class c)
{
    switch (c) {
    case sign_class::negative: return 0;
    case sign_class::blowup: return 128;
    case sign_class::positive: return 255;
    }
    return 0;
}

// P2 must come first, so the metadata sits in comment lines after the magic.
// One raster row per y_j (j increasing downward), columns x_i.
inline std::string sign_map_pgm(const sign_map &sm, const run_metadata &m)
{
    std::ostringstream os;
    os << "P2\n" << metadata_header(m) << "# levels: negative=0 blowup=128 positive=255\n";
    os << sm.grid << ' ' << sm.grid << "\n255\n";
    for (int j = 0; j < sm.grid; ++j) {
        for (int i = 0; i < sm.grid; ++i) {
            os << (i ? " " : "") << pgm_level(sm.at(i, j));
        }
        os << '\n';
    }
    return os.str();
}

inline const char *to_string(sign_class c)
{
    switch (c) {
    case sign_class::negative: return "negative";
    case sign_class::blowup: return "blowup";
    case sign_class::positive: return "positive";
    }
    return "?";
}

inline std::string sign_map_csv(const sign_map &sm, const run_metadata &m)
{
    std::ostringstream os;
    os << metadata_header(m) << "x,y,class\n";
    for (int i = 0; i < sm.grid; ++i) {
        for (int j = 0; j < sm.grid; ++j) {
            os << format_double(field_grid::coordinate(i, sm.grid)) << ','
               << format_double(field_grid::coordinate(j, sm.grid)) << ',' << to_string(sm.at(i, j)) << '\n';
        }
    }
    return os.str();
}

} // namespace kgflow
