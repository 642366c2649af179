#pragma once

// Exact scalars: Gaussian rationals and finite Laurent sums  sum_p q_p * pi^p  with
// Gaussian-rational q_p. Since pi is transcendental, equality is decided termwise.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kgflow {

using rational = mpq_class;

struct gaussian_rational {
    rational re;
    rational im;

    gaussian_rational() = default;
    // Inputs may come from mpq_class(n, d), which does not reduce.
    gaussian_rational(rational r) : re(std::move(r)) { re.canonicalize(); }
    gaussian_rational(rational r, rational i) : re(std::move(r)), im(std::move(i))
    {
        re.canonicalize();
        im.canonicalize();
    }
    gaussian_rational(long r) : re(r) {}

    static gaussian_rational i_unit() { return {rational(0), rational(1)}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    gaussian_rational conj() const { return {re, -im}; }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

    gaussian_rational &operator+=(const gaussian_rational &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    gaussian_rational &operator-=(const gaussian_rational &o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend gaussian_rational operator+(gaussian_rational a, const gaussian_rational &b) { return a += b; }
    friend gaussian_rational operator-(gaussian_rational a, const gaussian_rational &b) { return a -= b; }
    friend gaussian_rational operator-(const gaussian_rational &a) { return {-a.re, -a.im}; }
    friend gaussian_rational operator*(const gaussian_rational &a, const gaussian_rational &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const gaussian_rational &a, const gaussian_rational &b)
    {
        return a.re == b.re && a.im == b.im;
    }

    // this += a * b, skipping zero components; the hot loop of every series product.
    void add_product(const gaussian_rational &a, const gaussian_rational &b)
    {
        thread_local rational tmp;
        const bool ar = sgn(a.re) != 0, ai = sgn(a.im) != 0;
        const bool br = sgn(b.re) != 0, bi = sgn(b.im) != 0;
        if (ar && br) {
            mpq_mul(tmp.get_mpq_t(), a.re.get_mpq_t(), b.re.get_mpq_t());
            re += tmp;
        }
        if (ai && bi) {
            mpq_mul(tmp.get_mpq_t(), a.im.get_mpq_t(), b.im.get_mpq_t());
            re -= tmp;
        }
        if (ar && bi) {
            mpq_mul(tmp.get_mpq_t(), a.re.get_mpq_t(), b.im.get_mpq_t());
            im += tmp;
        }
        if (ai && br) {
            mpq_mul(tmp.get_mpq_t(), a.im.get_mpq_t(), b.re.get_mpq_t());
            im += tmp;
        }
    }

    // Multiplies by i^k.
    gaussian_rational times_i_power(int k) const
    {
        switch (((k % 4) + 4) % 4) {
        case 0: return *this;
        case 1: return {-im, re};
        case 2: return {-re, -im};
        default: return {im, -re};
        }
    }
};

inline std::string to_fraction_string(const rational &q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

class pi_rational
{
public:
    struct term {
        int power;
        gaussian_rational value;
        friend bool operator==(const term &, const term &) = default;
    };

    pi_rational() = default;
    pi_rational(long v) : pi_rational(gaussian_rational(v)) {}
    pi_rational(const rational &v) : pi_rational(gaussian_rational(v)) {}
    pi_rational(gaussian_rational v, int power = 0)
    {
        if (!v.is_zero()) {
            terms_.push_back({power, std::move(v)});
        }
    }

    static pi_rational pi(int power = 1) { return pi_rational(gaussian_rational(1), power); }
    static pi_rational i_unit() { return pi_rational(gaussian_rational::i_unit()); }

    const std::vector<term> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Single term q*pi^p.
    bool is_monomial() const { return terms_.size() == 1; }

    bool is_real() const
    {
        return std::all_of(terms_.begin(), terms_.end(), [](const term &t) { return t.value.is_real(); });
    }

    // Component-wise real / imaginary parts (both are pi_rationals with rational values).
    pi_rational real_part() const
    {
        pi_rational r;
        for (const auto &t : terms_) {
            if (sgn(t.value.re) != 0) {
                r.terms_.push_back({t.power, gaussian_rational(t.value.re)});
            }
        }
        return r;
    }
    pi_rational imag_part() const
    {
        pi_rational r;
        for (const auto &t : terms_) {
            if (sgn(t.value.im) != 0) {
                r.terms_.push_back({t.power, gaussian_rational(t.value.im)});
            }
        }
        return r;
    }

    pi_rational conj() const
    {
        pi_rational r = *this;
        for (auto &t : r.terms_) {
            t.value.im = -t.value.im;
        }
        return r;
    }

    pi_rational times_i_power(int k) const
    {
        pi_rational r = *this;
        for (auto &t : r.terms_) {
            t.value = t.value.times_i_power(k);
        }
        return r;
    }

    pi_rational times_pi_power(int p) const
    {
        pi_rational r = *this;
        for (auto &t : r.terms_) {
            t.power += p;
        }
        return r;
    }

    std::complex<double> to_complex() const
    {
        std::complex<double> s{};
        for (const auto &t : terms_) {
            s += t.value.to_complex() * std::pow(std::numbers::pi, t.power);
        }
        return s;
    }

    // Sum of |re|+|im| of each term times pi^p; a magnitude bound used for tolerances.
    double abs_bound() const
    {
        double s = 0.0;
        for (const auto &t : terms_) {
            s += (std::abs(t.value.re.get_d()) + std::abs(t.value.im.get_d())) * std::pow(std::numbers::pi, t.power);
        }
        return s;
    }

    pi_rational &operator+=(const pi_rational &o)
    {
        for (const auto &t : o.terms_) {
            slot(t.power) += t.value;
        }
        prune();
        return *this;
    }
    pi_rational &operator-=(const pi_rational &o)
    {
        for (const auto &t : o.terms_) {
            slot(t.power) -= t.value;
        }
        prune();
        return *this;
    }

    // this += a * b. Leaves possible zero terms behind; call prune() when done accumulating.
    void add_product(const pi_rational &a, const pi_rational &b)
    {
        for (const auto &ta : a.terms_) {
            for (const auto &tb : b.terms_) {
                slot(ta.power + tb.power).add_product(ta.value, tb.value);
            }
        }
    }

    void prune()
    {
        std::erase_if(terms_, [](const term &t) { return t.value.is_zero(); });
    }

    friend pi_rational operator+(pi_rational a, const pi_rational &b) { return a += b; }
    friend pi_rational operator-(pi_rational a, const pi_rational &b) { return a -= b; }
    friend pi_rational operator-(pi_rational a)
    {
        for (auto &t : a.terms_) {
            t.value = -t.value;
        }
        return a;
    }
    friend pi_rational operator*(const pi_rational &a, const pi_rational &b)
    {
        pi_rational r;
        r.add_product(a, b);
        r.prune();
        return r;
    }
    friend bool operator==(const pi_rational &a, const pi_rational &b) = default;

    // Inverse of a monomial q*pi^p; throws std::domain_error otherwise.
    pi_rational monomial_inverse() const
    {
        if (!is_monomial()) {
            throw std::domain_error("pi_rational: only monomials are invertible");
        }
        const auto &v = terms_.front().value;
        const rational norm = v.re * v.re + v.im * v.im;
        return pi_rational(gaussian_rational(v.re / norm, -v.im / norm), -terms_.front().power);
    }

    std::string to_string() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string s;
        for (const auto &t : terms_) {
            if (!s.empty()) {
                s += " + ";
            }
            s += "(" + t.value.re.get_str() + (sgn(t.value.im) < 0 ? "" : "+") + t.value.im.get_str() + "i)";
            if (t.power != 0) {
                s += "*pi^" + std::to_string(t.power);
            }
        }
        return s;
    }

private:
    gaussian_rational &slot(int power)
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), power,
                                   [](const term &t, int p) { return t.power < p; });
        if (it == terms_.end() || it->power != power) {
            it = terms_.insert(it, term{power, gaussian_rational()});
        }
        return it->value;
    }

    // Sorted by power, no zero values (outside of an add_product accumulation).
    std::vector<term> terms_;
};

} // namespace kgflow
