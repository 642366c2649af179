#pragma once

// Conformal factor of the approximate geodesic on the torus.
//
// With Z = z(it; N) the truncated imaginary-time Lie series of z, the Moser map pulls the
// evolving Kahler form back to dx^dy. The metric coefficient is h = h0 / D with
//     D = |dZ/dz|^2 - |dZ/dzbar|^2,
// the Jacobian of the real map (x, y) -> Z. Written with the Lie series of zbar,
// conj(Z)(t) = zbar(-it), so D(t) = A(t) E(-t) - B(t) C(-t) where
//     A = dz z(it), B = dzbar z(it), C = dz zbar(it), E = dzbar zbar(it).
// D is expanded in t and truncated at order N; h = sum a_k t^k is its Cauchy inverse.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <kgflow/errors.hpp>
#include <kgflow/lie_series.hpp>
#include <kgflow/trig_poly.hpp>

namespace kgflow {

// sum_{k=0..N} t^k c_k
struct trig_poly_series {
    std::vector<trig_poly> c;

    int order() const { return static_cast<int>(c.size()) - 1; }
    const trig_poly &operator[](int k) const { return c.at(static_cast<std::size_t>(k)); }

    friend bool operator==(const trig_poly_series &, const trig_poly_series &) = default;
};

inline trig_poly_series truncated_product(const trig_poly_series &a, const trig_poly_series &b, int order)
{
    trig_poly_series r;
    r.c.resize(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) {
        trig_poly s;
        for (int j = 0; j <= k; ++j) {
            if (j > a.order() || k - j > b.order()) {
                continue;
            }
            const auto &x = a[j];
            const auto &y = b[k - j];
            if (!x.is_zero() && !y.is_zero()) {
                s += x * y;
            }
        }
        r.c[static_cast<std::size_t>(k)] = std::move(s);
    }
    return r;
}

inline trig_poly_series operator-(const trig_poly_series &a, const trig_poly_series &b)
{
    trig_poly_series r;
    const auto n = std::max(a.c.size(), b.c.size());
    r.c.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.c[k] = (k < a.c.size() ? a.c[k] : trig_poly{}) - (k < b.c.size() ? b.c[k] : trig_poly{});
    }
    return r;
}

// f(t) -> f(-t)
inline trig_poly_series reversed_time(trig_poly_series s)
{
    for (std::size_t k = 1; k < s.c.size(); k += 2) {
        s.c[k] = -s.c[k];
    }
    return s;
}

enum class time_kind { imaginary, real };

// Series in t of d/d(dir) applied to the Lie series of the coordinate at tau = i t
// (or tau = t). The affine part contributes dz/dz = dzbar/dzbar = 1.
inline trig_poly_series derivative_series(const coord_lie_series &s, direction dir, time_kind kind)
{
    trig_poly_series r;
    r.c.resize(static_cast<std::size_t>(s.order) + 1);
    const bool diagonal = (s.which == coordinate::z && dir == direction::z) ||
                          (s.which == coordinate::zbar && dir == direction::zbar);
    if (diagonal) {
        r.c[0] = trig_poly::constant(pi_rational(1));
    }
    rational inv_fact(1);
    for (int k = 1; k <= s.order; ++k) {
        inv_fact /= k;
        const int ipow = kind == time_kind::imaginary ? k : 0;
        const pi_rational scale(gaussian_rational(inv_fact).times_i_power(ipow));
        r.c[static_cast<std::size_t>(k)] = scale * diff(s.term(k), dir);
    }
    return r;
}

namespace detail {

inline void require_matching(const coord_lie_series &zs, const coord_lie_series &zbs)
{
    if (zs.which != coordinate::z || zbs.which != coordinate::zbar) {
        throw error(error_kind::mismatched_series, "expected a z series and a zbar series");
    }
    if (zs.order != zbs.order) {
        throw error(error_kind::mismatched_series, "series orders differ");
    }
    if (!(zs.hamiltonian == zbs.hamiltonian)) {
        throw error(error_kind::mismatched_series, "series were built from different Hamiltonians");
    }
}

} // namespace detail

// Jacobian D(t) of the real map (x, y) -> z(it; N), truncated at order N.
inline trig_poly_series jacobian_series(const coord_lie_series &zs, const coord_lie_series &zbs)
{
    detail::require_matching(zs, zbs);
    const int n = zs.order;
    auto a = derivative_series(zs, direction::z, time_kind::imaginary);
    auto b = derivative_series(zs, direction::zbar, time_kind::imaginary);
    auto c = reversed_time(derivative_series(zbs, direction::z, time_kind::imaginary));
    auto e = reversed_time(derivative_series(zbs, direction::zbar, time_kind::imaginary));
    return truncated_product(a, e, n) - truncated_product(b, c, n);
}

// A(t)E(t) - B(t)C(t) with both coordinates continued to tau = it. This is the Jacobian of
// the complexified flow; it equals 1 through order N for every H.
inline trig_poly_series complexified_jacobian_series(const coord_lie_series &zs, const coord_lie_series &zbs)
{
    detail::require_matching(zs, zbs);
    const int n = zs.order;
    auto a = derivative_series(zs, direction::z, time_kind::imaginary);
    auto b = derivative_series(zs, direction::zbar, time_kind::imaginary);
    auto c = derivative_series(zbs, direction::z, time_kind::imaginary);
    auto e = derivative_series(zbs, direction::zbar, time_kind::imaginary);
    return truncated_product(a, e, n) - truncated_product(b, c, n);
}

// Jacobian of the real-time flow map; the flow is symplectic, so this is 1 through order N.
inline trig_poly_series real_time_jacobian_series(const coord_lie_series &zs, const coord_lie_series &zbs)
{
    detail::require_matching(zs, zbs);
    const int n = zs.order;
    auto a = derivative_series(zs, direction::z, time_kind::real);
    auto b = derivative_series(zs, direction::zbar, time_kind::real);
    auto c = derivative_series(zbs, direction::z, time_kind::real);
    auto e = derivative_series(zbs, direction::zbar, time_kind::real);
    return truncated_product(a, e, n) - truncated_product(b, c, n);
}

// 1/D as a truncated power series: a_0 = 1, a_k = -sum_{j=1..k} d_j a_{k-j}.
inline std::vector<trig_poly> invert_series(const trig_poly_series &d)
{
    if (d.c.empty() || !(d[0] == trig_poly::constant(pi_rational(1)))) {
        throw error(error_kind::bad_constant_term, "denominator series must start with the constant 1");
    }
    const int n = d.order();
    std::vector<trig_poly> a(static_cast<std::size_t>(n) + 1);
    a[0] = d[0];
    for (int k = 1; k <= n; ++k) {
        trig_poly s;
        for (int j = 1; j <= k; ++j) {
            if (!d[j].is_zero() && !a[static_cast<std::size_t>(k - j)].is_zero()) {
                s += d[j] * a[static_cast<std::size_t>(k - j)];
            }
        }
        a[static_cast<std::size_t>(k)] = -s;
    }
    return a;
}

enum class eval_mode { rational, polynomial };

inline const char *to_string(eval_mode m) { return m == eval_mode::rational ? "rational" : "polynomial"; }

inline constexpr double default_eps_blowup = 1e-3;

struct conformal_series {
    int order = 0;
    std::vector<trig_poly> a;
    trig_poly_series denominator;
    std::string hamiltonian_digest;

    // Double-precision images of a and denominator for pointwise evaluation.
    std::vector<numeric_trig_poly> a_numeric;
    std::vector<numeric_trig_poly> d_numeric;
};

inline conformal_series make_conformal_series(trig_poly_series d, std::string digest = {})
{
    conformal_series cs;
    cs.a = invert_series(d);
    cs.order = d.order();
    cs.denominator = std::move(d);
    cs.hamiltonian_digest = std::move(digest);
    for (const auto &p : cs.a) {
        cs.a_numeric.emplace_back(p);
    }
    for (const auto &p : cs.denominator.c) {
        cs.d_numeric.emplace_back(p);
    }
    return cs;
}

// Full pipeline: Lie series of z and zbar, Jacobian, inversion.
inline conformal_series build_conformal_series(const trig_poly &h, int order, std::string digest = {})
{
    auto zs = build_lie_series(h, coordinate::z, order);
    auto zbs = build_lie_series(h, coordinate::zbar, order);
    return make_conformal_series(jacobian_series(zs, zbs), std::move(digest));
}

struct conformal_value {
    double h = 1.0;
    double im_residual = 0.0;
    double denom_abs = 1.0;
    bool blowup = false;
};

namespace detail {

inline std::complex<double> horner(std::span<const std::complex<double>> c, double t)
{
    std::complex<double> s{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        s = s * t + *it;
    }
    return s;
}

} // namespace detail

// Evaluates h from coefficient values at one point: a_k(x,y) for polynomial mode, d_k(x,y)
// for rational mode.
inline conformal_value conformal_from_coefficients(std::span<const std::complex<double>> coeffs, double t,
                                                   eval_mode mode, double eps_blowup = default_eps_blowup)
{
    conformal_value v;
    if (mode == eval_mode::polynomial) {
        const auto h = detail::horner(coeffs, t);
        v.h = h.real();
        v.im_residual = std::abs(h.imag());
        v.denom_abs = 1.0;
        return v;
    }
    const auto d = detail::horner(coeffs, t);
    const auto h = 1.0 / d;
    v.h = h.real();
    v.im_residual = std::abs(h.imag());
    v.denom_abs = std::abs(d);
    v.blowup = v.denom_abs < eps_blowup;
    return v;
}

inline conformal_value eval_conformal(const conformal_series &cs, double x, double y, double t, eval_mode mode,
                                      double eps_blowup = default_eps_blowup)
{
    const auto &src = mode == eval_mode::polynomial ? cs.a_numeric : cs.d_numeric;
    std::vector<std::complex<double>> coeffs;
    coeffs.reserve(src.size());
    for (const auto &p : src) {
        coeffs.push_back(p(x, y));
    }
    return conformal_from_coefficients(coeffs, t, mode, eps_blowup);
}

// log(|a_N t^N| / |sum_{k<N} a_k t^k|) from coefficient values a_k(x,y).
// -inf when the last term vanishes, +inf when the partial sum does.
inline double error_indicator_from_coefficients(std::span<const std::complex<double>> a, double a_last_norm1,
                                                double t, double log_base = std::exp(1.0))
{
    const auto n = a.size() - 1;
    const double tn = std::pow(std::abs(t), static_cast<double>(n));
    const double num = std::abs(a[n]) * tn;
    if (num == 0.0 || num <= 64 * std::numeric_limits<double>::epsilon() * a_last_norm1 * tn) {
        return -std::numeric_limits<double>::infinity();
    }
    std::complex<double> partial{};
    for (std::size_t k = n; k-- > 0;) {
        partial = partial * t + a[k];
    }
    const double den = std::abs(partial);
    if (den < 1e-30) {
        return std::numeric_limits<double>::infinity();
    }
    return std::log(num / den) / std::log(log_base);
}

inline double error_indicator(const conformal_series &cs, double x, double y, double t,
                              double log_base = std::exp(1.0))
{
    if (cs.order < 2) {
        throw error(error_kind::invalid_argument, "error indicator needs order >= 2");
    }
    std::vector<std::complex<double>> a;
    a.reserve(cs.a_numeric.size());
    for (const auto &p : cs.a_numeric) {
        a.push_back(p(x, y));
    }
    return error_indicator_from_coefficients(a, cs.a_numeric.back().norm1(), t, log_base);
}

} // namespace kgflow
