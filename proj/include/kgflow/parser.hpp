#pragma once

// Recursive-descent parser for Hamiltonian expressions.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | factor
//   factor := base ('^' UINT)?
//   base   := NUMBER | 'pi' | 'x' | 'y' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
//
// NUMBER is an integer or a decimal literal, taken exactly. Divisors must reduce to a
// non-zero constant q*pi^p. Trig arguments must reduce to pi*(m*x + n*y + c) with integer
// m, n and c a multiple of 1/2.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <kgflow/errors.hpp>
#include <kgflow/expr.hpp>
#include <kgflow/trig_poly.hpp>

namespace kgflow {

namespace detail {

class expr_parser
{
public:
    explicit expr_parser(std::string_view text) : text_(text) {}

    expr_ptr parse()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw parse_error(error_kind::syntax, pos_, "empty expression");
        }
        auto e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) {
            throw parse_error(error_kind::syntax, pos_, std::string("unexpected character '") + text_[pos_] + "'");
        }
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            throw parse_error(error_kind::syntax, pos_, std::string("expected '") + c + "'");
        }
    }

    expr_ptr parse_expr()
    {
        skip_ws();
        const auto start = pos_;
        std::vector<expr_ptr> terms{parse_term()};
        for (;;) {
            skip_ws();
            const auto op_pos = pos_;
            if (accept('+')) {
                terms.push_back(parse_term());
            } else if (accept('-')) {
                auto rhs = parse_term();
                auto lhs = terms.size() == 1 ? terms.front() : make_node(expr_kind::add, std::move(terms), start);
                terms = {make_node(expr_kind::sub, {std::move(lhs), std::move(rhs)}, op_pos)};
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms.front() : make_node(expr_kind::add, std::move(terms), start);
    }

    expr_ptr parse_term()
    {
        skip_ws();
        const auto start = pos_;
        std::vector<expr_ptr> factors{parse_unary()};
        for (;;) {
            skip_ws();
            const auto op_pos = pos_;
            if (accept('*')) {
                factors.push_back(parse_unary());
            } else if (accept('/')) {
                auto rhs = parse_unary();
                auto lhs = factors.size() == 1 ? factors.front() : make_node(expr_kind::mul, std::move(factors), start);
                factors = {make_node(expr_kind::div, {std::move(lhs), std::move(rhs)}, op_pos)};
            } else {
                break;
            }
        }
        return factors.size() == 1 ? factors.front() : make_node(expr_kind::mul, std::move(factors), start);
    }

    expr_ptr parse_unary()
    {
        skip_ws();
        const auto start = pos_;
        if (accept('-')) {
            return make_node(expr_kind::neg, {parse_unary()}, start);
        }
        return parse_factor();
    }

    expr_ptr parse_factor()
    {
        auto base = parse_base();
        skip_ws();
        const auto start = pos_;
        if (accept('^')) {
            skip_ws();
            const auto digits_at = pos_;
            std::string digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits += text_[pos_++];
            }
            if (digits.empty() || digits.size() > 4) {
                throw parse_error(error_kind::syntax, digits_at, "exponent must be an unsigned integer below 10000");
            }
            return make_pow(std::move(base), static_cast<unsigned>(std::stoul(digits)), start);
        }
        return base;
    }

    expr_ptr parse_base()
    {
        skip_ws();
        const auto start = pos_;
        if (pos_ >= text_.size()) {
            throw parse_error(error_kind::syntax, pos_, "unexpected end of input");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return make_constant(pi_rational(parse_number()), start);
        }
        if (accept('(')) {
            auto e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
                word += text_[pos_++];
            }
            if (word == "pi") {
                return make_constant(pi_rational::pi(), start);
            }
            if (word == "x") {
                return make_variable(expr_kind::var_x, start);
            }
            if (word == "y") {
                return make_variable(expr_kind::var_y, start);
            }
            if (word == "sin" || word == "cos") {
                expect('(');
                auto arg = parse_expr();
                expect(')');
                return make_node(word == "sin" ? expr_kind::sin : expr_kind::cos, {std::move(arg)}, start);
            }
            throw parse_error(error_kind::syntax, start, "unknown identifier '" + word + "'");
        }
        throw parse_error(error_kind::syntax, start, std::string("unexpected character '") + c + "'");
    }

    rational parse_number()
    {
        const auto start = pos_;
        std::string int_part, frac_part;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            int_part += text_[pos_++];
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                frac_part += text_[pos_++];
            }
        }
        if (int_part.empty() && frac_part.empty()) {
            throw parse_error(error_kind::syntax, start, "malformed number");
        }
        mpz_class num(int_part + frac_part, 10);
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) {
            den *= 10;
        }
        rational q(num, den);
        q.canonicalize();
        return q;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline expr_ptr parse_expression(std::string_view text) { return detail::expr_parser(text).parse(); }

// Parses and expands a Hamiltonian; the result is a real, torus-periodic trig_poly.
inline trig_poly parse_hamiltonian(std::string_view text)
{
    auto e = parse_expression(text);
    auto p = trig_poly_builder{}(e);
    if (!p.is_periodic()) {
        throw parse_error(error_kind::not_periodic, 0, "expanded Hamiltonian has an odd frequency (not 1-periodic)");
    }
    if (!p.is_real()) {
        throw parse_error(error_kind::not_real, 0, "expanded Hamiltonian is not real-valued");
    }
    return p;
}

namespace detail {

inline std::string format_scalar_times(const pi_rational &c, const std::string &fn)
{
    // c is real here: a sum of rational*pi^p terms.
    std::string s;
    for (const auto &t : c.terms()) {
        const rational &q = t.value.re;
        std::string term = sgn(q) < 0 ? " - " : " + ";
        const rational aq = abs(q);
        term += aq.get_den() == 1 ? aq.get_num().get_str() : "(" + aq.get_str() + ")";
        if (t.power > 0) {
            term += "*pi^" + std::to_string(t.power);
        } else if (t.power < 0) {
            term += "/pi^" + std::to_string(-t.power);
        }
        if (!fn.empty()) {
            term += "*" + fn;
        }
        s += term;
    }
    return s;
}

} // namespace detail

// Writes a real trig_poly as a sum of rational * pi^p * cos/sin(pi*(m*x + n*y)) terms that
// parse_hamiltonian maps back to the same trig_poly. Throws std::invalid_argument for
// non-real input.
inline std::string format_real_trig_poly(const trig_poly &p)
{
    if (!p.is_real()) {
        throw std::invalid_argument("format_real_trig_poly: input is not real");
    }
    std::string out;
    for (const auto &[k, c] : p.terms()) {
        if (k < freq_key{0, 0}) {
            continue;
        }
        if (k == freq_key{0, 0}) {
            out += detail::format_scalar_times(c.real_part(), "");
            continue;
        }
        // c e^{it} + conj(c) e^{-it} = 2 Re(c) cos t - 2 Im(c) sin t
        const std::string arg = "pi*(" + std::to_string(k.m) + "*x + " + std::to_string(k.n) + "*y)";
        out += detail::format_scalar_times(pi_rational(2) * c.real_part(), "cos(" + arg + ")");
        out += detail::format_scalar_times(pi_rational(-2) * c.imag_part(), "sin(" + arg + ")");
    }
    if (out.empty()) {
        return "0";
    }
    // Drop the leading " + " / turn a leading " - " into "-".
    return out.starts_with(" + ") ? out.substr(3) : "-" + out.substr(3);
}

} // namespace kgflow
