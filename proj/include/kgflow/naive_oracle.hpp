#pragma once

// Reference pipeline that differentiates unexpanded expression trees with the chain and
// Leibniz rules and only maps to Fourier form at the end. Tree size grows exponentially
// with the order, so it is meant for order <= 4 cross-checks of the sparse pipeline.

#include <stdexcept>
#include <string_view>
#include <vector>

#include <kgflow/errors.hpp>
#include <kgflow/expr.hpp>
#include <kgflow/lie_series.hpp>
#include <kgflow/parser.hpp>

namespace kgflow {

namespace naive {

// nullptr stands for an identically zero derivative.
inline expr_ptr differentiate(const expr_ptr &e, expr_kind var)
{
    auto sum = [](std::vector<expr_ptr> parts) -> expr_ptr {
        std::erase(parts, nullptr);
        if (parts.empty()) {
            return nullptr;
        }
        return parts.size() == 1 ? parts.front() : make_node(expr_kind::add, std::move(parts));
    };

    switch (e->kind) {
    case expr_kind::constant: return nullptr;
    case expr_kind::var_x:
    case expr_kind::var_y: return e->kind == var ? make_constant(pi_rational(1)) : nullptr;
    case expr_kind::sin: {
        auto du = differentiate(e->args[0], var);
        return du ? make_node(expr_kind::mul, {make_node(expr_kind::cos, {e->args[0]}), du}) : nullptr;
    }
    case expr_kind::cos: {
        auto du = differentiate(e->args[0], var);
        return du ? make_node(expr_kind::neg, {make_node(expr_kind::mul, {make_node(expr_kind::sin, {e->args[0]}), du})})
                  : nullptr;
    }
    case expr_kind::add: {
        std::vector<expr_ptr> parts;
        for (const auto &a : e->args) {
            parts.push_back(differentiate(a, var));
        }
        return sum(std::move(parts));
    }
    case expr_kind::sub: {
        auto da = differentiate(e->args[0], var);
        auto db = differentiate(e->args[1], var);
        if (!db) {
            return da;
        }
        return da ? make_node(expr_kind::sub, {da, db}) : make_node(expr_kind::neg, {db});
    }
    case expr_kind::neg: {
        auto d = differentiate(e->args[0], var);
        return d ? make_node(expr_kind::neg, {d}) : nullptr;
    }
    case expr_kind::mul: {
        std::vector<expr_ptr> parts;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            auto di = differentiate(e->args[i], var);
            if (!di) {
                continue;
            }
            std::vector<expr_ptr> factors;
            for (std::size_t j = 0; j < e->args.size(); ++j) {
                factors.push_back(j == i ? di : e->args[j]);
            }
            parts.push_back(make_node(expr_kind::mul, std::move(factors)));
        }
        return sum(std::move(parts));
    }
    case expr_kind::div: {
        if (differentiate(e->args[1], var)) {
            throw error(error_kind::invalid_argument, "naive differentiation needs a constant divisor");
        }
        auto da = differentiate(e->args[0], var);
        return da ? make_node(expr_kind::div, {da, e->args[1]}) : nullptr;
    }
    case expr_kind::pow: {
        if (e->exponent == 0) {
            return nullptr;
        }
        auto db = differentiate(e->args[0], var);
        if (!db) {
            return nullptr;
        }
        return make_node(expr_kind::mul, {make_constant(pi_rational(static_cast<long>(e->exponent))),
                                          make_pow(e->args[0], e->exponent - 1), db});
    }
    }
    return nullptr;
}

inline expr_ptr or_zero(expr_ptr e) { return e ? e : make_constant(pi_rational()); }

// X_H f = H_y f_x - H_x f_y on trees.
inline expr_ptr apply_xh(const expr_ptr &hx, const expr_ptr &hy, const expr_ptr &f)
{
    auto fx = differentiate(f, expr_kind::var_x);
    auto fy = differentiate(f, expr_kind::var_y);
    std::vector<expr_ptr> parts;
    if (hy && fx) {
        parts.push_back(make_node(expr_kind::mul, {hy, fx}));
    }
    if (hx && fy) {
        parts.push_back(make_node(expr_kind::neg, {make_node(expr_kind::mul, {hx, fy})}));
    }
    if (parts.empty()) {
        return nullptr;
    }
    return parts.size() == 1 ? parts.front() : make_node(expr_kind::add, std::move(parts));
}

// Wirtinger derivative (1/2)(d/dx -+ i d/dy) on trees; sign = -1 for d/dz, +1 for d/dzbar.
inline expr_ptr wirtinger(const expr_ptr &f, int sign)
{
    auto fx = differentiate(f, expr_kind::var_x);
    auto fy = differentiate(f, expr_kind::var_y);
    std::vector<expr_ptr> parts;
    if (fx) {
        parts.push_back(make_node(expr_kind::mul, {make_constant(pi_rational(rational(1, 2))), fx}));
    }
    if (fy) {
        parts.push_back(
            make_node(expr_kind::mul, {make_constant(pi_rational(gaussian_rational(0, rational(sign, 2)))), fy}));
    }
    if (parts.empty()) {
        return nullptr;
    }
    return parts.size() == 1 ? parts.front() : make_node(expr_kind::add, std::move(parts));
}

} // namespace naive

inline constexpr int naive_max_order = 4;

// Trees for X_H^k(coordinate), k = 1..order (nullptr entries are identically zero).
inline std::vector<expr_ptr> naive_lie_trees(std::string_view h_text, coordinate which, int order)
{
    if (order < 1 || order > naive_max_order) {
        throw error(error_kind::invalid_argument, "naive oracle supports orders 1..4");
    }
    parse_hamiltonian(h_text); // validation only; errors as the main parser
    auto h = parse_expression(h_text);
    auto hx = naive::differentiate(h, expr_kind::var_x);
    auto hy = naive::differentiate(h, expr_kind::var_y);

    // X_H z = H_y - i H_x, X_H zbar = H_y + i H_x.
    std::vector<expr_ptr> parts;
    if (hy) {
        parts.push_back(hy);
    }
    if (hx) {
        const int sign = which == coordinate::z ? -1 : 1;
        parts.push_back(make_node(expr_kind::mul, {make_constant(pi_rational(gaussian_rational(0, sign))), hx}));
    }
    std::vector<expr_ptr> trees;
    trees.push_back(parts.empty() ? nullptr
                                  : (parts.size() == 1 ? parts.front() : make_node(expr_kind::add, std::move(parts))));
    for (int k = 2; k <= order; ++k) {
        trees.push_back(trees.back() ? naive::apply_xh(hx, hy, trees.back()) : nullptr);
    }
    return trees;
}

inline coord_lie_series naive_lie_series_oracle(std::string_view h_text, coordinate which, int order)
{
    auto trees = naive_lie_trees(h_text, which, order);
    coord_lie_series s{which, order, {}, parse_hamiltonian(h_text)};
    trig_poly_builder to_fourier;
    for (const auto &t : trees) {
        s.w.push_back(t ? to_fourier(t) : trig_poly{});
    }
    return s;
}

// Conformal coefficients a_0..a_order along an independent route: Wirtinger derivatives
// taken on trees of the z series only, the zbar side obtained by pointwise conjugation,
// then schoolbook series product and inversion.
inline std::vector<trig_poly> naive_conformal_oracle(std::string_view h_text, int order)
{
    auto trees = naive_lie_trees(h_text, coordinate::z, order);
    trig_poly_builder to_fourier;
    const trig_poly one = trig_poly::constant(pi_rational(1));

    // P = dZ/dz, Q = dZ/dzbar with Z = z + sum (it)^k/k! w_k.
    std::vector<trig_poly> p{one}, q{trig_poly{}};
    rational inv_fact(1);
    for (int k = 1; k <= order; ++k) {
        inv_fact /= k;
        const pi_rational scale(gaussian_rational(inv_fact).times_i_power(k));
        const auto &t = trees[static_cast<std::size_t>(k - 1)];
        auto dz = t ? naive::wirtinger(t, -1) : nullptr;
        auto dzb = t ? naive::wirtinger(t, +1) : nullptr;
        p.push_back(scale * (dz ? to_fourier(dz) : trig_poly{}));
        q.push_back(scale * (dzb ? to_fourier(dzb) : trig_poly{}));
    }

    // D = P conj(P) - Q conj(Q), truncated.
    std::vector<trig_poly> d;
    for (int k = 0; k <= order; ++k) {
        trig_poly s;
        for (int j = 0; j <= k; ++j) {
            s += p[j] * conjugate(p[k - j]);
            s -= q[j] * conjugate(q[k - j]);
        }
        d.push_back(s);
    }

    std::vector<trig_poly> a{one};
    for (int k = 1; k <= order; ++k) {
        trig_poly s;
        for (int j = 1; j <= k; ++j) {
            s -= d[j] * a[k - j];
        }
        a.push_back(s);
    }
    return a;
}

} // namespace kgflow
