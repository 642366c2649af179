#pragma once

// Real-time Hamiltonian flow  x' = H_y, y' = -H_x  integrated numerically, as an independent
// check on the real-time Lie series.

#include <array>
#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include <kgflow/errors.hpp>
#include <kgflow/lie_series.hpp>
#include <kgflow/trig_poly.hpp>

namespace kgflow {

struct flow_options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double initial_step = 1e-3;
    std::size_t max_steps = 1'000'000;
    bool wrap = true; // reduce the end point to [0, 1)^2
};

struct flow_point {
    double x;
    double y;
};

class hamiltonian_flow
{
public:
    explicit hamiltonian_flow(const trig_poly &h)
        : h_(h), hx_(diff(h, direction::x)), hy_(diff(h, direction::y))
    {
        require_admissible_hamiltonian(h);
    }

    double energy(double x, double y) const { return h_(x, y).real(); }

    // Position at time t starting from (x0, y0). Negative t runs the reversed field.
    flow_point operator()(double x0, double y0, double t, const flow_options &opt = {}) const
    {
        using state = std::array<double, 2>;
        namespace odeint = boost::numeric::odeint;

        state s{x0, y0};
        if (t != 0.0) {
            const double sign = t < 0 ? -1.0 : 1.0;
            auto rhs = [this, sign](const state &q, state &dq, double) {
                dq[0] = sign * hy_(q[0], q[1]).real();
                dq[1] = -sign * hx_(q[0], q[1]).real();
            };
            auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_fehlberg78<state>());
            std::size_t seen = 0;
            auto watch = [&seen, &opt](const state &, double) {
                if (++seen > opt.max_steps) {
                    throw error(error_kind::step_failure, "too many integration steps");
                }
            };
            try {
                odeint::integrate_adaptive(stepper, rhs, s, 0.0, std::abs(t), std::min(opt.initial_step, std::abs(t)),
                                           watch);
            } catch (const error &) {
                throw;
            } catch (const std::exception &e) {
                throw error(error_kind::step_failure, e.what());
            }
            if (!std::isfinite(s[0]) || !std::isfinite(s[1])) {
                throw error(error_kind::step_failure, "integration produced a non-finite state");
            }
        }
        if (opt.wrap) {
            s[0] -= std::floor(s[0]);
            s[1] -= std::floor(s[1]);
        }
        return {s[0], s[1]};
    }

private:
    numeric_trig_poly h_, hx_, hy_;
};

inline flow_point real_flow_oracle(const trig_poly &h, double x0, double y0, double t, const flow_options &opt = {})
{
    return hamiltonian_flow(h)(x0, y0, t, opt);
}

} // namespace kgflow
