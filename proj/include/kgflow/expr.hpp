#pragma once

// Expression trees for Hamiltonians: constants, x, y, sin, cos, + - * / unary minus and
// integer powers. Nodes are immutable and shared, so derived trees form a DAG.

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <kgflow/errors.hpp>
#include <kgflow/pi_rational.hpp>
#include <kgflow/trig_poly.hpp>

namespace kgflow {

enum class expr_kind { constant, var_x, var_y, sin, cos, add, sub, mul, div, neg, pow };

struct expr_node;
using expr_ptr = std::shared_ptr<const expr_node>;

struct expr_node {
    expr_kind kind = expr_kind::constant;
    pi_rational value;     // constant
    unsigned exponent = 0; // pow
    std::vector<expr_ptr> args;
    std::size_t pos = 0; // source offset, 0 for synthesized nodes
};

inline expr_ptr make_constant(pi_rational v, std::size_t pos = 0)
{
    return std::make_shared<const expr_node>(expr_node{expr_kind::constant, std::move(v), 0, {}, pos});
}

inline expr_ptr make_variable(expr_kind k, std::size_t pos = 0)
{
    return std::make_shared<const expr_node>(expr_node{k, {}, 0, {}, pos});
}

inline expr_ptr make_node(expr_kind k, std::vector<expr_ptr> args, std::size_t pos = 0)
{
    return std::make_shared<const expr_node>(expr_node{k, {}, 0, std::move(args), pos});
}

inline expr_ptr make_pow(expr_ptr base, unsigned k, std::size_t pos = 0)
{
    return std::make_shared<const expr_node>(expr_node{expr_kind::pow, {}, k, {std::move(base)}, pos});
}

inline std::complex<double> evaluate(const expr_node &e, double x, double y)
{
    switch (e.kind) {
    case expr_kind::constant: return e.value.to_complex();
    case expr_kind::var_x: return x;
    case expr_kind::var_y: return y;
    case expr_kind::sin: return std::sin(evaluate(*e.args[0], x, y));
    case expr_kind::cos: return std::cos(evaluate(*e.args[0], x, y));
    case expr_kind::add: {
        std::complex<double> s{};
        for (const auto &a : e.args) {
            s += evaluate(*a, x, y);
        }
        return s;
    }
    case expr_kind::sub: return evaluate(*e.args[0], x, y) - evaluate(*e.args[1], x, y);
    case expr_kind::mul: {
        std::complex<double> s{1.0};
        for (const auto &a : e.args) {
            s *= evaluate(*a, x, y);
        }
        return s;
    }
    case expr_kind::div: return evaluate(*e.args[0], x, y) / evaluate(*e.args[1], x, y);
    case expr_kind::neg: return -evaluate(*e.args[0], x, y);
    case expr_kind::pow: {
        std::complex<double> s{1.0}, b = evaluate(*e.args[0], x, y);
        for (unsigned i = 0; i < e.exponent; ++i) {
            s *= b;
        }
        return s;
    }
    }
    return {};
}

// Number of distinct nodes reachable from e.
inline std::size_t count_unique_nodes(const expr_ptr &e)
{
    std::unordered_set<const expr_node *> seen;
    std::vector<const expr_node *> stack{e.get()};
    while (!stack.empty()) {
        auto *n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) {
            continue;
        }
        for (const auto &a : n->args) {
            stack.push_back(a.get());
        }
    }
    return seen.size();
}

// Node count of the fully expanded tree (shared subtrees counted once per use).
inline double count_tree_nodes(const expr_ptr &e)
{
    std::unordered_map<const expr_node *, double> memo;
    auto rec = [&memo](auto &self, const expr_node *n) -> double {
        if (auto it = memo.find(n); it != memo.end()) {
            return it->second;
        }
        double s = 1.0;
        for (const auto &a : n->args) {
            s += self(self, a.get());
        }
        memo.emplace(n, s);
        return s;
    };
    return rec(rec, e.get());
}

// pi*(m*x + n*y + c) read off a trig argument.
struct linear_form {
    pi_rational cx, cy, c0;
};

inline linear_form to_linear_form(const expr_node &e)
{
    auto fail = [&e](const std::string &why) -> parse_error {
        return parse_error(error_kind::non_linear_trig_argument, e.pos, why);
    };
    auto is_const = [](const linear_form &f) { return f.cx.is_zero() && f.cy.is_zero(); };
    auto scale = [](const pi_rational &s, const linear_form &f) { return linear_form{s * f.cx, s * f.cy, s * f.c0}; };

    switch (e.kind) {
    case expr_kind::constant: return {{}, {}, e.value};
    case expr_kind::var_x: return {pi_rational(1), {}, {}};
    case expr_kind::var_y: return {{}, pi_rational(1), {}};
    case expr_kind::sin:
    case expr_kind::cos: throw fail("nested trigonometric function in argument");
    case expr_kind::add: {
        linear_form s;
        for (const auto &a : e.args) {
            auto f = to_linear_form(*a);
            s.cx += f.cx;
            s.cy += f.cy;
            s.c0 += f.c0;
        }
        return s;
    }
    case expr_kind::sub: {
        auto a = to_linear_form(*e.args[0]);
        auto b = to_linear_form(*e.args[1]);
        return {a.cx - b.cx, a.cy - b.cy, a.c0 - b.c0};
    }
    case expr_kind::neg: return scale(pi_rational(-1), to_linear_form(*e.args[0]));
    case expr_kind::mul: {
        linear_form acc{{}, {}, pi_rational(1)};
        for (const auto &a : e.args) {
            auto f = to_linear_form(*a);
            if (is_const(f)) {
                acc = scale(f.c0, acc);
            } else if (is_const(acc)) {
                acc = scale(acc.c0, f);
            } else {
                throw fail("product of two variable terms");
            }
        }
        return acc;
    }
    case expr_kind::div: {
        auto a = to_linear_form(*e.args[0]);
        auto b = to_linear_form(*e.args[1]);
        if (!is_const(b) || !b.c0.is_monomial()) {
            throw fail("division by a non-constant or non-monomial");
        }
        return scale(b.c0.monomial_inverse(), a);
    }
    case expr_kind::pow: {
        auto b = to_linear_form(*e.args[0]);
        if (e.exponent == 0) {
            return {{}, {}, pi_rational(1)};
        }
        if (is_const(b)) {
            pi_rational r(1);
            for (unsigned i = 0; i < e.exponent; ++i) {
                r = r * b.c0;
            }
            return {{}, {}, r};
        }
        if (e.exponent == 1) {
            return b;
        }
        throw fail("power of a variable term");
    }
    }
    throw fail("unsupported node");
}

// exp(i*theta) for a trig argument theta = pi*(m*x + n*y + c), c in (1/2)Z:
// returns the key (m, n) and the phase exp(i*pi*c) in {1, i, -1, -i}.
struct trig_phase {
    freq_key key;
    gaussian_rational phase;
};

inline trig_phase to_trig_phase(const expr_node &arg)
{
    auto f = to_linear_form(arg);
    auto fail = [&arg](const std::string &why) {
        return parse_error(error_kind::non_linear_trig_argument, arg.pos, why);
    };
    auto slope = [&](const pi_rational &c) -> int {
        if (c.is_zero()) {
            return 0;
        }
        const auto &t = c.terms();
        if (t.size() != 1 || t[0].power != 1 || !t[0].value.is_real() || t[0].value.re.get_den() != 1 ||
            !t[0].value.re.get_num().fits_sint_p()) {
            throw fail("coefficient of x or y must be an integer multiple of pi");
        }
        return static_cast<int>(t[0].value.re.get_num().get_si());
    };
    trig_phase r{{slope(f.cx), slope(f.cy)}, gaussian_rational(1)};
    if (f.c0.is_zero()) {
        return r;
    }
    const auto &t = f.c0.terms();
    if (t.size() != 1 || t[0].power != 1 || !t[0].value.is_real()) {
        throw fail("constant phase must be a rational multiple of pi");
    }
    const rational c = t[0].value.re;
    if (c.get_den() != 1 && c.get_den() != 2) {
        throw fail("constant phase must be a multiple of pi/2");
    }
    // 2c mod 4 selects exp(i*pi*c) among 1, i, -1, -i.
    mpz_class twice = c.get_den() == 1 ? mpz_class(2 * c.get_num()) : mpz_class(c.get_num());
    mpz_class q = twice % 4;
    if (q < 0) {
        q += 4;
    }
    r.phase = gaussian_rational(1).times_i_power(static_cast<int>(q.get_si()));
    return r;
}

// Maps an expression into the trig_poly algebra. Memoized per node, so shared
// subtrees of derived expressions are expanded once.
class trig_poly_builder
{
public:
    // Roots are retained: the memo is keyed by node address, which must not be reused by a
    // later tree while the builder lives.
    trig_poly operator()(const expr_ptr &e)
    {
        roots_.push_back(e);
        return build(*e);
    }

private:
    const trig_poly &build(const expr_node &e)
    {
        if (auto it = memo_.find(&e); it != memo_.end()) {
            return it->second;
        }
        auto r = compute(e);
        return memo_.emplace(&e, std::move(r)).first->second;
    }

    trig_poly compute(const expr_node &e)
    {
        switch (e.kind) {
        case expr_kind::constant: return trig_poly::constant(e.value);
        case expr_kind::var_x:
        case expr_kind::var_y:
            throw parse_error(error_kind::non_trig_term, e.pos, "variable outside a trigonometric argument");
        case expr_kind::sin:
        case expr_kind::cos: {
            const auto tp = to_trig_phase(*e.args[0]);
            const freq_key k = tp.key;
            // sin t = (-i/2) e^{it} + (i/2) e^{-it};  cos t = (1/2) e^{it} + (1/2) e^{-it}
            const gaussian_rational half(rational(1, 2));
            const gaussian_rational plus =
                e.kind == expr_kind::sin ? gaussian_rational(0, rational(-1, 2)) : half;
            const gaussian_rational minus = e.kind == expr_kind::sin ? gaussian_rational(0, rational(1, 2)) : half;
            std::vector<trig_poly::value_type> terms;
            terms.emplace_back(k, pi_rational(plus * tp.phase));
            terms.emplace_back(-k, pi_rational(minus * tp.phase.conj()));
            return trig_poly::from_terms(std::move(terms));
        }
        case expr_kind::add: {
            trig_poly s;
            for (const auto &a : e.args) {
                s += build(*a);
            }
            return s;
        }
        case expr_kind::sub: return build(*e.args[0]) - build(*e.args[1]);
        case expr_kind::neg: return -build(*e.args[0]);
        case expr_kind::mul: {
            trig_poly s = trig_poly::constant(pi_rational(1));
            for (const auto &a : e.args) {
                s = s * build(*a);
            }
            return s;
        }
        case expr_kind::div: {
            const trig_poly &d = build(*e.args[1]);
            if (d.size() != 1 || d.terms()[0].first != freq_key{0, 0} || !d.terms()[0].second.is_monomial()) {
                throw parse_error(error_kind::syntax, e.args[1]->pos,
                                  "divisor must be a non-zero constant of the form q*pi^p");
            }
            return d.terms()[0].second.monomial_inverse() * build(*e.args[0]);
        }
        case expr_kind::pow: {
            trig_poly base = build(*e.args[0]);
            trig_poly r = trig_poly::constant(pi_rational(1));
            for (unsigned k = e.exponent; k > 0; k >>= 1) {
                if (k & 1U) {
                    r = r * base;
                }
                if (k > 1) {
                    base = base * base;
                }
            }
            return r;
        }
        }
        return {};
    }

    std::vector<expr_ptr> roots_;
    std::unordered_map<const expr_node *, trig_poly> memo_;
};

} // namespace kgflow
