// Acceptance run: one PASS/FAIL line per criterion 1-9. Exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <kgflow/kgflow.hpp>

using namespace kgflow;

namespace {

const char *const reference_h = "(1/8)*(sin(pi*x)^2+sin(pi*y)^2)^2";
const char *const shear_h = "sin(2*pi*x)/(2*pi)";

// tolerances and windows
constexpr int order = 12;
constexpr int big_grid = 200;
constexpr double pos_lo = 0.113, pos_hi = 0.125;
constexpr double neg_lo = 0.115, neg_hi = 0.127;
constexpr double critical_budget_s = 600.0;
constexpr double saddle_radius = 0.15;
constexpr int diag_samples = 50;
constexpr double small_t = 0.4;
constexpr double large_t_lo = 0.8, large_t_hi = 1.0;
constexpr int large_t_samples = 21;
constexpr int oracle_order = 4;
constexpr int conv_order = 4;
constexpr double conv_slope_tol = 0.5;
constexpr double build_budget_s = 60.0;
constexpr double field_budget_s = 5.0;
constexpr int field_grid = 50;

int failures = 0;

void report(int id, bool ok, const std::string &detail)
{
    std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

void sub(const char *name, bool ok)
{
    std::printf("    [%s] %s\n", ok ? "ok" : "FAILED", name);
}

std::string fmt(const char *f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

class stopwatch
{
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double torus_dist(double a, double b)
{
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

// Runtimes include the series build, as a `kgflow critical` run would.
void critical_times(const conformal_series &cs, double build_s)
{
    critical_time_options opt;
    opt.grid = big_grid;
    stopwatch sw;
    const auto lc = sample_coefficients(cs, big_grid);
    const auto pos = critical_time(lc, time_direction::positive, opt);
    const double t_pos = build_s + sw.seconds();
    stopwatch sw2;
    const auto neg = critical_time(lc, time_direction::negative, opt);
    const double t_neg = build_s + sw2.seconds();

    // polynomial mode, for the record
    auto poly_time = [&](double sign) {
        for (double t = opt.coarse_step; t <= opt.t_max + 1e-12; t += opt.coarse_step) {
            const auto fg = evaluate_field(lc, sign * t, eval_mode::polynomial);
            for (const auto &v : fg.values) {
                if (v.h <= 0) {
                    return t;
                }
            }
        }
        return std::nan("");
    };
    std::printf("    rational mode: t+ = %.5f, t- = %.5f; polynomial mode (coarse): t+ ~ %.3f, t- ~ %.3f\n",
                pos ? *pos : std::nan(""), neg ? *neg : std::nan(""), poly_time(1), poly_time(-1));

    report(1, pos && *pos >= pos_lo && *pos <= pos_hi && t_pos <= critical_budget_s,
           pos ? fmt("t+ = %.5f, window [%.3f, %.3f], %.1f s", *pos, pos_lo, pos_hi, t_pos) : "no degeneration found");
    report(2, neg && -*neg >= neg_lo && -*neg <= neg_hi && t_neg <= critical_budget_s,
           neg ? fmt("|t-| = %.5f, window [%.3f, %.3f], %.1f s", -*neg, neg_lo, neg_hi, t_neg) : "no degeneration found");
}

void mixed_polarization(const conformal_series &cs)
{
    const auto lc = sample_coefficients(cs, big_grid);
    bool ok = true;
    std::string detail;
    for (double t : {0.5, -0.5}) {
        const auto sm = classify_signs(evaluate_field(lc, t, eval_mode::rational));
        std::size_t npos = 0, nneg = 0, nblow = 0;
        for (auto c : sm.classes) {
            npos += c == sign_class::positive;
            nneg += c == sign_class::negative;
            nblow += c == sign_class::blowup;
        }
        bool saddles = true;
        for (auto [sx, sy] : {std::pair{0.0, 0.5}, {0.5, 0.0}}) {
            bool p = false, n = false;
            for (int i = 0; i < big_grid; ++i) {
                for (int j = 0; j < big_grid; ++j) {
                    const double dx = torus_dist(field_grid::coordinate(i, big_grid), sx);
                    const double dy = torus_dist(field_grid::coordinate(j, big_grid), sy);
                    if (dx * dx + dy * dy <= saddle_radius * saddle_radius) {
                        p = p || sm.at(i, j) == sign_class::positive;
                        n = n || sm.at(i, j) == sign_class::negative;
                    }
                }
            }
            saddles = saddles && p && n;
        }
        ok = ok && npos > 0 && nneg > 0 && saddles;
        detail += fmt("t=%+.1f: %g positive, %g negative, ", t, static_cast<double>(npos), static_cast<double>(nneg)) +
                  fmt("%g blow-up, saddle disks mixed: ", static_cast<double>(nblow)) + (saddles ? "yes" : "no") + "; ";
    }
    report(3, ok, detail);
}

void error_indicator_check(const conformal_series &cs)
{
    const auto s = linspace(0.0, 0.5, diag_samples);
    int bad_small = 0;
    double worst_small = -INFINITY;
    for (double t : {small_t, -small_t}) {
        for (double x : s) {
            const double v = error_indicator(cs, x, x, t);
            worst_small = std::max(worst_small, v);
            bad_small += v >= 0;
        }
    }
    int good_large = 0;
    for (double a : linspace(large_t_lo, large_t_hi, large_t_samples)) {
        for (double t : {a, -a}) {
            for (double x : s) {
                good_large += error_indicator(cs, x, x, t) > 0;
            }
        }
    }
    sub("indicator < 0 at every sample, t = +-0.4", bad_small == 0);
    sub("indicator > 0 somewhere, |t| in [0.8, 1]", good_large > 0);
    report(4, bad_small == 0 && good_large > 0,
           fmt("t=+-0.4: %g of %g samples >= 0 (max %.3f); |t| in [0.8,1]: %g positive samples", bad_small,
               2.0 * diag_samples, worst_small, good_large));
}

void exact_invariants(const trig_poly &h, const conformal_series &cs)
{
    const trig_poly one = trig_poly::constant(pi_rational(1));
    const auto zs = build_lie_series(h, coordinate::z, order);
    const auto zbs = build_lie_series(h, coordinate::zbar, order);

    const bool a0 = cs.a[0] == one;
    const bool a1 = cs.a[1].is_zero();
    bool im = true;
    for (int k = 0; k <= order; ++k) {
        im = im && cs.a[k].is_real();
    }
    const bool cons = apply_xh(h, h).is_zero();
    const auto rt = real_time_jacobian_series(zs, zbs);
    bool sympl = true;
    for (int k = 1; k <= order; ++k) {
        sympl = sympl && rt[k].is_zero();
    }
    bool conj = true;
    for (int k = 1; k <= order; ++k) {
        conj = conj && zbs.term(k) == conjugate(zs.term(k));
    }
    const auto shear = build_conformal_series(parse_hamiltonian(shear_h), order);
    bool shear_d = shear.denominator[0] == one, shear_h1 = shear.a[0] == one;
    for (int k = 1; k <= order; ++k) {
        shear_d = shear_d && shear.denominator[k].is_zero();
        shear_h1 = shear_h1 && shear.a[k].is_zero();
    }

    sub("a_0 == 1", a0);
    sub("a_1 == 0", a1);
    sub("Im(a_k) == 0 for k <= 12", im);
    sub("X_H H == 0", cons);
    sub("real-time Jacobian d_1..d_N == 0", sympl);
    sub("zbar series == conjugate of z series", conj);
    sub("shear: D == 1 and h == 1", shear_d && shear_h1);
    if (!a1) {
        const auto lap = diff(diff(h, direction::x), direction::x) + diff(diff(h, direction::y), direction::y);
        std::printf("    note: a_1 == -Laplacian(H) exactly: %s\n", cs.a[1] == -lap ? "yes" : "no");
    }
    if (!shear_d) {
        std::printf("    note: shear d_1 has %zu terms, d_2..d_N all zero: %s\n", shear.denominator[1].size(), [&] {
            for (int k = 2; k <= order; ++k) {
                if (!shear.denominator[k].is_zero()) {
                    return "no";
                }
            }
            return "yes";
        }());
    }
    const int passed = a0 + a1 + im + cons + sympl + conj + (shear_d && shear_h1);
    report(5, passed == 7, fmt("%g of 7 exact identities hold", passed));
}

void oracle_equivalence(const trig_poly &h)
{
    bool ok = true;
    for (int n = 1; n <= oracle_order; ++n) {
        for (auto which : {coordinate::z, coordinate::zbar}) {
            ok = ok && naive_lie_series_oracle(reference_h, which, n).w == build_lie_series(h, which, n).w;
        }
        ok = ok && naive_conformal_oracle(reference_h, n) == build_conformal_series(h, n).a;
    }
    report(6, ok, "w_k (z, zbar) and a_k coefficient-identical for N = 1..4");
}

void convergence(const trig_poly &h)
{
    const double x0 = 0.25, y0 = 0.25;
    const hamiltonian_flow flow(h);
    flow_options opt;
    opt.wrap = false;
    opt.abs_tol = opt.rel_tol = 1e-14;
    const auto zs = build_lie_series(h, coordinate::z, conv_order);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::string detail;
    const int pts = 4;
    for (int j = 0; j < pts; ++j) {
        const double t = 0.02 * std::pow(2.0, -j);
        const auto p = flow(x0, y0, t, opt);
        const auto z = std::complex<double>(x0, y0) + eval_series_increment(zs, x0, y0, t);
        const double e = std::abs(z - std::complex<double>(p.x, p.y));
        detail += fmt("t=%.5f err=%.3e; ", t, e);
        sx += std::log(t);
        sy += std::log(e);
        sxx += std::log(t) * std::log(t);
        sxy += std::log(t) * std::log(e);
    }
    const double slope = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
    report(7, std::abs(slope - (conv_order + 1)) <= conv_slope_tol,
           fmt("fitted slope %.3f, target %g +- %.1f; ", slope, conv_order + 1, conv_slope_tol) + detail);
}

conformal_series timed_build(const trig_poly &h, double &seconds)
{
    stopwatch sw;
    auto cs = build_conformal_series(h, order, reference_h);
    seconds = sw.seconds();
    return cs;
}

void performance(const conformal_series &cs, double build_s)
{
    stopwatch sw;
    const auto fg = evaluate_field(cs, field_grid, 0.1, eval_mode::rational, 1);
    const double field_s = sw.seconds();
    report(8, build_s <= build_budget_s && field_s <= field_budget_s && !fg.values.empty(),
           fmt("N = 12 build %.2f s (budget %.0f s, single thread); G = 50 field %.3f s (budget %.0f s, 1 thread)",
               build_s, build_budget_s, field_s, field_budget_s));
}

void determinism(const conformal_series &cs)
{
    bool ok = true;
    for (auto mode : {eval_mode::rational, eval_mode::polynomial}) {
        for (double t : {0.05, 0.12, -0.3}) {
            const auto base = evaluate_field(cs, field_grid, t, mode, 1);
            run_metadata m;
            m.hamiltonian = reference_h;
            m.order = order;
            m.grid = field_grid;
            m.t = t;
            m.mode = mode;
            const auto ref = field_csv(base, m);
            for (unsigned th : {2U, 8U}) {
                const auto other = evaluate_field(cs, field_grid, t, mode, th);
                for (std::size_t i = 0; i < base.values.size(); ++i) {
                    ok = ok && std::memcmp(&base.values[i].h, &other.values[i].h, sizeof(double)) == 0 &&
                         std::memcmp(&base.values[i].im_residual, &other.values[i].im_residual, sizeof(double)) == 0 &&
                         std::memcmp(&base.values[i].denom_abs, &other.values[i].denom_abs, sizeof(double)) == 0 &&
                         base.values[i].blowup == other.values[i].blowup;
                }
                ok = ok && field_csv(other, m) == ref;
            }
        }
    }
    report(9, ok, "G = 50 fields at t in {0.05, 0.12, -0.3}, both modes, threads {1, 2, 8}");
}

} // namespace

int main()
{
    std::printf("kgflow %s acceptance, H = %s, N = %d\n", version, reference_h, order);
    const auto h = parse_hamiltonian(reference_h);
    double build_s = 0;
    const auto cs = timed_build(h, build_s);

    critical_times(cs, build_s);
    mixed_polarization(cs);
    error_indicator_check(cs);
    exact_invariants(h, cs);
    oracle_equivalence(h);
    convergence(h);
    performance(cs, build_s);
    determinism(cs);

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
