#pragma once

// Conformal factor fields on the G x G torus lattice x_i = i/G, y_j = j/G, i, j = 0..G-1.
// Storage is row-major with j (the y index) fastest.
//
// The series coefficients d_k(x, y) and a_k(x, y) are sampled once per lattice by separable
// Fourier summation; every time slice is then a Horner evaluation per point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <kgflow/conformal.hpp>
#include <kgflow/errors.hpp>
#include <kgflow/parallel.hpp>

namespace kgflow {

namespace detail {

// exp(i*pi*k/G) for k in [0, 2G).
inline std::vector<std::complex<double>> lattice_phase_table(int grid)
{
    std::vector<std::complex<double>> t(static_cast<std::size_t>(2 * grid));
    for (int k = 0; k < 2 * grid; ++k) {
        t[static_cast<std::size_t>(k)] = std::polar(1.0, std::numbers::pi * k / grid);
    }
    return t;
}

// Values of p at every lattice point, written to out[(i*G + j)*stride + offset].
inline void sample_on_lattice(const numeric_trig_poly &p, int grid, const std::vector<std::complex<double>> &phase,
                              unsigned threads, std::vector<std::complex<double>> &out, std::size_t stride,
                              std::size_t offset)
{
    const auto g = static_cast<std::size_t>(grid);
    const auto wrap = [grid](long long k) {
        const long long r = k % (2LL * grid);
        return static_cast<std::size_t>(r < 0 ? r + 2LL * grid : r);
    };
    // Rows of p grouped by x-frequency m (entries are sorted by (m, n)).
    std::vector<int> ms;
    std::vector<std::size_t> row_begin;
    for (std::size_t e = 0; e < p.entries.size(); ++e) {
        if (ms.empty() || ms.back() != p.entries[e].m) {
            ms.push_back(p.entries[e].m);
            row_begin.push_back(e);
        }
    }
    row_begin.push_back(p.entries.size());

    // inner[r][j] = sum_n c_{m_r, n} exp(i*pi*n*y_j)
    std::vector<std::complex<double>> inner(ms.size() * g);
    parallel_for(ms.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t j = 0; j < g; ++j) {
                std::complex<double> s{};
                for (std::size_t e = row_begin[r]; e < row_begin[r + 1]; ++e) {
                    s += p.entries[e].c * phase[wrap(static_cast<long long>(p.entries[e].n) * static_cast<long long>(j))];
                }
                inner[r * g + j] = s;
            }
        }
    });
    parallel_for(g, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < g; ++j) {
                std::complex<double> s{};
                for (std::size_t r = 0; r < ms.size(); ++r) {
                    s += phase[wrap(static_cast<long long>(ms[r]) * static_cast<long long>(i))] * inner[r * g + j];
                }
                out[(i * g + j) * stride + offset] = s;
            }
        }
    });
}

} // namespace detail

// d_k and a_k sampled on one lattice.
struct lattice_coefficients {
    int grid = 0;
    int order = 0;
    std::vector<std::complex<double>> d; // index (i*G + j)*(order+1) + k
    std::vector<std::complex<double>> a;
    double a_last_norm1 = 0.0; // 1-norm of a_N, for the indicator's zero test
    std::string hamiltonian_digest;

    std::size_t point(int i, int j) const { return static_cast<std::size_t>(i) * grid + static_cast<std::size_t>(j); }

    std::span<const std::complex<double>> coefficients_at(std::size_t pt, eval_mode mode) const
    {
        const auto stride = static_cast<std::size_t>(order) + 1;
        const auto &src = mode == eval_mode::rational ? d : a;
        return std::span<const std::complex<double>>(src).subspan(pt * stride, stride);
    }
};

inline lattice_coefficients sample_coefficients(const conformal_series &cs, int grid, unsigned threads = 0)
{
    if (grid < 2) {
        throw error(error_kind::invalid_argument, "grid size must be >= 2");
    }
    lattice_coefficients lc;
    lc.grid = grid;
    lc.order = cs.order;
    lc.hamiltonian_digest = cs.hamiltonian_digest;
    const auto stride = static_cast<std::size_t>(cs.order) + 1;
    const auto points = static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
    lc.d.assign(points * stride, {});
    lc.a.assign(points * stride, {});
    const auto phase = detail::lattice_phase_table(grid);
    for (std::size_t k = 0; k < stride; ++k) {
        detail::sample_on_lattice(cs.d_numeric[k], grid, phase, threads, lc.d, stride, k);
        detail::sample_on_lattice(cs.a_numeric[k], grid, phase, threads, lc.a, stride, k);
    }
    lc.a_last_norm1 = cs.a_numeric.back().norm1();
    return lc;
}

struct field_meta {
    std::string hamiltonian;
    int order = 0;
    unsigned threads = 0;
    double eps_blowup = default_eps_blowup;
};

struct field_grid {
    int grid = 0;
    double t = 0.0;
    eval_mode mode = eval_mode::rational;
    std::vector<conformal_value> values;
    field_meta meta;

    static double coordinate(int i, int grid) { return static_cast<double>(i) / grid; }
    double x(int i) const { return coordinate(i, grid); }
    double y(int j) const { return coordinate(j, grid); }
    const conformal_value &at(int i, int j) const
    {
        return values[static_cast<std::size_t>(i) * grid + static_cast<std::size_t>(j)];
    }
};

inline field_grid evaluate_field(const lattice_coefficients &lc, double t, eval_mode mode, unsigned threads = 0,
                                 double eps_blowup = default_eps_blowup)
{
    field_grid fg;
    fg.grid = lc.grid;
    fg.t = t;
    fg.mode = mode;
    fg.meta = {lc.hamiltonian_digest, lc.order, resolve_threads(threads), eps_blowup};
    const auto points = static_cast<std::size_t>(lc.grid) * static_cast<std::size_t>(lc.grid);
    fg.values.resize(points);
    parallel_for(points, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t pt = begin; pt < end; ++pt) {
            fg.values[pt] = conformal_from_coefficients(lc.coefficients_at(pt, mode), t, mode, eps_blowup);
        }
    });
    return fg;
}

inline field_grid evaluate_field(const conformal_series &cs, int grid, double t, eval_mode mode,
                                 unsigned threads = 0, double eps_blowup = default_eps_blowup)
{
    return evaluate_field(sample_coefficients(cs, grid, threads), t, mode, threads, eps_blowup);
}

enum class sign_class : std::uint8_t { negative, blowup, positive };

struct sign_map {
    int grid = 0;
    std::vector<sign_class> classes;

    sign_class at(int i, int j) const { return classes[static_cast<std::size_t>(i) * grid + static_cast<std::size_t>(j)]; }
    bool contains(sign_class c) const { return std::find(classes.begin(), classes.end(), c) != classes.end(); }
};

inline sign_map classify_signs(const field_grid &fg)
{
    sign_map sm{fg.grid, {}};
    sm.classes.reserve(fg.values.size());
    for (const auto &v : fg.values) {
        sm.classes.push_back(v.blowup ? sign_class::blowup : (v.h > 0 ? sign_class::positive : sign_class::negative));
    }
    return sm;
}

// Some lattice point has h <= 0 or a blow-up at time t (rational mode).
inline bool is_degenerate(const lattice_coefficients &lc, double t, unsigned threads = 0,
                          double eps_blowup = default_eps_blowup)
{
    const auto fg = evaluate_field(lc, t, eval_mode::rational, threads, eps_blowup);
    return std::any_of(fg.values.begin(), fg.values.end(),
                       [](const conformal_value &v) { return v.blowup || v.h <= 0.0; });
}

enum class time_direction { positive, negative };

struct critical_time_options {
    int grid = 200;
    double t_max = 0.5;
    double coarse_step = 0.005;
    double tol = 1e-4;
    unsigned threads = 0;
    double eps_blowup = default_eps_blowup;
};

// Earliest |t| (signed by direction) in (0, t_max] at which the lattice field degenerates:
// coarse scan, then bisection down to tol. std::nullopt when nothing degenerates.
inline std::optional<double> critical_time(const lattice_coefficients &lc, time_direction dir,
                                           const critical_time_options &opt = {})
{
    if (!(opt.coarse_step > 0.0) || !(opt.tol > 0.0) || !(opt.t_max > 0.0)) {
        throw error(error_kind::invalid_argument, "critical time scan needs positive step, tolerance and t_max");
    }
    const double sign = dir == time_direction::positive ? 1.0 : -1.0;
    auto degenerate = [&](double mag) { return is_degenerate(lc, sign * mag, opt.threads, opt.eps_blowup); };

    double lo = 0.0;
    std::optional<double> hi;
    const auto steps = static_cast<long>(std::ceil(opt.t_max / opt.coarse_step - 1e-9));
    for (long s = 1; s <= steps; ++s) {
        const double mag = std::min(opt.t_max, static_cast<double>(s) * opt.coarse_step);
        if (degenerate(mag)) {
            hi = mag;
            break;
        }
        lo = mag;
    }
    if (!hi) {
        return std::nullopt;
    }
    while (*hi - lo > opt.tol) {
        const double mid = 0.5 * (lo + *hi);
        if (degenerate(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return sign * *hi;
}

inline std::optional<double> critical_time(const conformal_series &cs, time_direction dir,
                                           const critical_time_options &opt = {})
{
    return critical_time(sample_coefficients(cs, opt.grid, opt.threads), dir, opt);
}

struct errmap_row {
    double s;
    double t;
    double indicator;
};

inline std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v;
    if (n == 1) {
        v.push_back(a);
        return v;
    }
    for (int i = 0; i < n; ++i) {
        v.push_back(a + (b - a) * i / (n - 1));
    }
    return v;
}

// Error indicator along the diagonal x = y = s, s = linspace(0, 0.5, samples_s) and
// t = linspace(t_min, t_max, samples_t). Rows ordered s-major.
inline std::vector<errmap_row> diagonal_errmap(const conformal_series &cs, int samples_s, double t_min, double t_max,
                                               int samples_t, double log_base = std::exp(1.0))
{
    if (cs.order < 2) {
        throw error(error_kind::invalid_argument, "error indicator needs order >= 2");
    }
    if (samples_s < 1 || samples_t < 1) {
        throw error(error_kind::invalid_argument, "sample counts must be positive");
    }
    const double norm_last = cs.a_numeric.back().norm1();
    std::vector<errmap_row> rows;
    for (double s : linspace(0.0, 0.5, samples_s)) {
        std::vector<std::complex<double>> a;
        for (const auto &p : cs.a_numeric) {
            a.push_back(p(s, s));
        }
        for (double t : linspace(t_min, t_max, samples_t)) {
            rows.push_back({s, t, error_indicator_from_coefficients(a, norm_last, t, log_base)});
        }
    }
    return rows;
}

} // namespace kgflow
