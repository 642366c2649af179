#pragma once

// Truncated Lie series  e^{tau X_H} z = z + sum_{k=1..N} tau^k/k! X_H^k z  of the complex
// coordinate z = x + iy (and of zbar) for a Hamiltonian H on the flat torus.
//
// Convention: omega = dx^dy and i_{X_H} omega = dH, so X_H = H_y d/dx - H_x d/dy and
// X_H z = H_y - i H_x = -2i dH/dzbar.

#include <string>
#include <vector>

#include <kgflow/errors.hpp>
#include <kgflow/trig_poly.hpp>

namespace kgflow {

enum class coordinate { z, zbar };

inline const char *to_string(coordinate c) { return c == coordinate::z ? "z" : "zbar"; }

inline void require_admissible_hamiltonian(const trig_poly &h)
{
    if (!h.is_real()) {
        throw error(error_kind::not_real, "Hamiltonian is not real-valued");
    }
    if (!h.is_periodic()) {
        throw error(error_kind::not_periodic, "Hamiltonian is not 1-periodic on the torus");
    }
}

// X_H acting on functions, with H_x and H_y computed once.
class hamiltonian_field
{
public:
    explicit hamiltonian_field(const trig_poly &h) : h_(h)
    {
        require_admissible_hamiltonian(h);
        hx_ = diff(h, direction::x);
        hy_ = diff(h, direction::y);
    }

    const trig_poly &hamiltonian() const { return h_; }
    const trig_poly &hx() const { return hx_; }
    const trig_poly &hy() const { return hy_; }

    trig_poly operator()(const trig_poly &f) const
    {
        return hy_ * diff(f, direction::x) - hx_ * diff(f, direction::y);
    }

    // The affine seeds: dz/dx = 1, dz/dy = i; dzbar/dx = 1, dzbar/dy = -i.
    trig_poly operator()(coordinate seed) const
    {
        const int sign = seed == coordinate::z ? -1 : 1;
        return hy_ + pi_rational(gaussian_rational(0, sign)) * hx_;
    }

private:
    trig_poly h_, hx_, hy_;
};

inline trig_poly apply_xh(const trig_poly &h, const trig_poly &f) { return hamiltonian_field(h)(f); }
inline trig_poly apply_xh(const trig_poly &h, coordinate seed) { return hamiltonian_field(h)(seed); }

struct coord_lie_series {
    coordinate which = coordinate::z;
    int order = 0;
    // w[k-1] = X_H^k applied to the coordinate, k = 1..order. The k = 0 term is the
    // (non-periodic) coordinate itself and is implicit.
    std::vector<trig_poly> w;
    trig_poly hamiltonian;

    const trig_poly &term(int k) const { return w.at(static_cast<std::size_t>(k - 1)); }
};

inline coord_lie_series build_lie_series(const trig_poly &h, coordinate which, int order)
{
    if (order < 1) {
        throw error(error_kind::invalid_argument, "Lie series order must be >= 1");
    }
    const hamiltonian_field xh(h);
    coord_lie_series s{which, order, {}, h};
    s.w.reserve(static_cast<std::size_t>(order));
    s.w.push_back(xh(which));
    for (int k = 2; k <= order; ++k) {
        s.w.push_back(xh(s.w.back()));
    }
    return s;
}

// Real-time value of the truncated series for z or zbar at a point, without the affine part
// (returns sum_{k=1..N} t^k/k! w_k(x, y)).
inline std::complex<double> eval_series_increment(const coord_lie_series &s, double x, double y, double t)
{
    std::complex<double> sum{};
    double coef = 1.0;
    for (int k = 1; k <= s.order; ++k) {
        coef *= t / k;
        sum += coef * eval(s.term(k), x, y);
    }
    return sum;
}

} // namespace kgflow
