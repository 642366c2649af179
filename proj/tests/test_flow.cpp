#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "support.hpp"

using namespace kgflow;

namespace {

// distance on the unit circle
double circ(double a, double b)
{
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

// least squares slope of log(err) vs log(t)
double fitted_slope(const std::vector<double> &t, const std::vector<double> &err)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = std::log(t[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_CASE("shear flow is exact", "[flow]")
{
    const auto h = parse_hamiltonian(testing_support::shear_h);
    for (double t : {-0.9, -0.3, 0.1, 0.7, 1.0}) {
        for (double x0 : {0.0, 0.13, 0.4, 0.77}) {
            const double y0 = 0.31;
            const auto p = real_flow_oracle(h, x0, y0, t);
            CHECK(circ(p.x, x0) < 1e-10);
            const double ye = y0 - t * std::cos(2 * std::numbers::pi * x0);
            CHECK(circ(p.y, ye - std::floor(ye)) < 1e-10);
        }
    }
}

TEST_CASE("critical point is fixed and energy is conserved", "[flow]")
{
    const auto h = parse_hamiltonian(testing_support::reference_h);
    const auto p = real_flow_oracle(h, 0.5, 0.5, 1.0);
    CHECK(std::abs(p.x - 0.5) < 1e-14);
    CHECK(std::abs(p.y - 0.5) < 1e-14);

    const hamiltonian_flow flow(h);
    for (auto [x0, y0] : {std::pair{0.25, 0.25}, {0.1, 0.37}, {0.45, 0.05}, {0.9, 0.6}}) {
        const double e0 = flow.energy(x0, y0);
        for (double t : {-1.0, -0.5, 0.25, 0.75, 1.0}) {
            const auto q = flow(x0, y0, t);
            CHECK(std::abs(flow.energy(q.x, q.y) - e0) <= 1e-8);
        }
    }
    CHECK_THROWS_AS(flow(0.25, 0.25, 1.0, flow_options{1e-12, 1e-12, 1e-3, 3, true}), error);
}

namespace {

double series_slope(const trig_poly &h, int n, double x0, double y0)
{
    const hamiltonian_flow flow(h);
    flow_options opt;
    opt.wrap = false;
    opt.abs_tol = opt.rel_tol = 1e-14;
    const auto zs = build_lie_series(h, coordinate::z, n);
    std::vector<double> ts, errs;
    for (int j = 0; j <= 4; ++j) {
        const double t = 0.04 * std::pow(2.0, -j);
        const auto p = flow(x0, y0, t, opt);
        const auto z = std::complex<double>(x0, y0) + eval_series_increment(zs, x0, y0, t);
        ts.push_back(t);
        errs.push_back(std::abs(z - std::complex<double>(p.x, p.y)));
    }
    return fitted_slope(ts, errs);
}

} // namespace

TEST_CASE("real-time Lie series converges at order N+1 to the flow", "[flow][hamflow]")
{
    const auto h = parse_hamiltonian(testing_support::reference_h);
    for (int n : {1, 2, 3, 4}) {
        const double slope = series_slope(h, n, 0.1, 0.37);
        INFO("N = " << n << " slope " << slope);
        CHECK(std::abs(slope - (n + 1)) <= 0.5);
    }
}

TEST_CASE("on the diagonal point (1/4, 1/4) even-order terms vanish", "[flow][hamflow]")
{
    // The orbit through (1/4, 1/4) is symmetric under reflection in the diagonal, which
    // forces w_{2k}(1/4, 1/4) = 0; odd N therefore gain one order there.
    const auto h = parse_hamiltonian(testing_support::reference_h);
    const auto zs = build_lie_series(h, coordinate::z, 7);
    for (int k = 2; k <= 6; k += 2) {
        CHECK(std::abs(eval(zs.term(k), 0.25, 0.25)) < 1e-9 * std::abs(eval(zs.term(k + 1), 0.25, 0.25)));
    }
    CHECK(std::abs(series_slope(h, 4, 0.25, 0.25) - 5) <= 0.5);
    CHECK(std::abs(series_slope(h, 3, 0.25, 0.25) - 5) <= 0.5);
}
