#pragma once

// Sparse bivariate Fourier series  sum c_{m,n} exp(i*pi*(m*x + n*y))  with exact
// pi_rational coefficients. Frequencies are in units of pi, so keys with both m and n
// even are the 1-periodic functions on the unit torus.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <kgflow/pi_rational.hpp>

namespace kgflow {

struct freq_key {
    int m = 0;
    int n = 0;

    freq_key operator-() const { return {-m, -n}; }
    friend freq_key operator+(freq_key a, freq_key b) { return {a.m + b.m, a.n + b.n}; }
    friend auto operator<=>(const freq_key &, const freq_key &) = default;
};

enum class direction { x, y, z, zbar };

class trig_poly
{
public:
    using value_type = std::pair<freq_key, pi_rational>;

    trig_poly() = default;

    static trig_poly constant(pi_rational c) { return monomial({0, 0}, std::move(c)); }

    static trig_poly monomial(freq_key k, pi_rational c)
    {
        trig_poly p;
        if (!c.is_zero()) {
            p.terms_.emplace_back(k, std::move(c));
        }
        return p;
    }

    // Sorts, merges duplicate keys and drops zeros.
    static trig_poly from_terms(std::vector<value_type> terms)
    {
        std::stable_sort(terms.begin(), terms.end(),
                         [](const value_type &a, const value_type &b) { return a.first < b.first; });
        trig_poly p;
        for (auto &t : terms) {
            if (!p.terms_.empty() && p.terms_.back().first == t.first) {
                p.terms_.back().second += t.second;
            } else {
                p.terms_.push_back(std::move(t));
            }
        }
        p.drop_zeros();
        return p;
    }

    const std::vector<value_type> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    pi_rational coeff(freq_key k) const
    {
        auto it = find(k);
        return it == terms_.end() ? pi_rational() : it->second;
    }

    // coeff(-k) == conj(coeff(k)) for every key: the function is real-valued.
    bool is_real() const
    {
        return std::all_of(terms_.begin(), terms_.end(), [this](const value_type &t) {
            auto it = find(-t.first);
            return it != terms_.end() && it->second == t.second.conj();
        });
    }

    // Every key even in both slots: 1-periodic in x and y.
    bool is_periodic() const
    {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const value_type &t) { return t.first.m % 2 == 0 && t.first.n % 2 == 0; });
    }

    int max_abs_freq() const
    {
        int r = 0;
        for (const auto &t : terms_) {
            r = std::max({r, std::abs(t.first.m), std::abs(t.first.n)});
        }
        return r;
    }

    // Sum of coefficient magnitude bounds.
    double norm1() const
    {
        double s = 0.0;
        for (const auto &t : terms_) {
            s += t.second.abs_bound();
        }
        return s;
    }

    trig_poly &operator+=(const trig_poly &o) { return *this = merge(*this, o, false); }
    trig_poly &operator-=(const trig_poly &o) { return *this = merge(*this, o, true); }

    friend trig_poly operator+(const trig_poly &a, const trig_poly &b) { return merge(a, b, false); }
    friend trig_poly operator-(const trig_poly &a, const trig_poly &b) { return merge(a, b, true); }
    friend trig_poly operator-(trig_poly a)
    {
        for (auto &t : a.terms_) {
            t.second = -t.second;
        }
        return a;
    }
    friend trig_poly operator*(const pi_rational &s, const trig_poly &p)
    {
        trig_poly r;
        if (s.is_zero()) {
            return r;
        }
        r.terms_.reserve(p.terms_.size());
        for (const auto &t : p.terms_) {
            auto c = s * t.second;
            if (!c.is_zero()) {
                r.terms_.emplace_back(t.first, std::move(c));
            }
        }
        return r;
    }
    friend trig_poly operator*(const trig_poly &a, const trig_poly &b);

    friend bool operator==(const trig_poly &a, const trig_poly &b) = default;

private:
    std::vector<value_type>::const_iterator find(freq_key k) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                                   [](const value_type &t, freq_key key) { return t.first < key; });
        return (it != terms_.end() && it->first == k) ? it : terms_.end();
    }

    void drop_zeros()
    {
        std::erase_if(terms_, [](const value_type &t) { return t.second.is_zero(); });
    }

    static trig_poly merge(const trig_poly &a, const trig_poly &b, bool subtract)
    {
        trig_poly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
                r.terms_.push_back(*ia++);
            } else if (ia == a.terms_.end() || ib->first < ia->first) {
                r.terms_.emplace_back(ib->first, subtract ? -ib->second : ib->second);
                ++ib;
            } else {
                auto c = subtract ? ia->second - ib->second : ia->second + ib->second;
                if (!c.is_zero()) {
                    r.terms_.emplace_back(ia->first, std::move(c));
                }
                ++ia;
                ++ib;
            }
        }
        return r;
    }

    // Sorted by key, no zero coefficients.
    std::vector<value_type> terms_;
};

namespace detail {

// Accumulates products a_k*b_l into key k+l. Uses a dense box when the Minkowski-sum
// bounding box is small compared to the number of products, a std::map otherwise.
class product_accumulator
{
public:
    product_accumulator(const trig_poly &a, const trig_poly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return;
        }
        auto [amin_m, amax_m, amin_n, amax_n] = bounds(a);
        auto [bmin_m, bmax_m, bmin_n, bmax_n] = bounds(b);
        min_m_ = amin_m + bmin_m;
        min_n_ = amin_n + bmin_n;
        width_m_ = amax_m + bmax_m - min_m_ + 1;
        width_n_ = amax_n + bmax_n - min_n_ + 1;
        const auto cells = static_cast<std::int64_t>(width_m_) * width_n_;
        const auto products = static_cast<std::int64_t>(a.size()) * static_cast<std::int64_t>(b.size());
        dense_ = cells <= 4 * static_cast<std::size_t>(products) + 4096;
        if (dense_) {
            box_.resize(static_cast<std::size_t>(cells));
            used_.assign(static_cast<std::size_t>(cells), 0);
        }
    }

    void add_product(freq_key k, const pi_rational &x, const pi_rational &y)
    {
        if (dense_) {
            const auto idx = static_cast<std::size_t>(k.m - min_m_) * width_n_ + static_cast<std::size_t>(k.n - min_n_);
            box_[idx].add_product(x, y);
            used_[idx] = 1;
        } else {
            sparse_[k].add_product(x, y);
        }
    }

    trig_poly finish()
    {
        std::vector<trig_poly::value_type> out;
        if (dense_) {
            for (std::size_t idx = 0; idx < box_.size(); ++idx) {
                if (!used_[idx]) {
                    continue;
                }
                box_[idx].prune();
                if (!box_[idx].is_zero()) {
                    const freq_key k{static_cast<int>(idx / width_n_) + min_m_, static_cast<int>(idx % width_n_) + min_n_};
                    out.emplace_back(k, std::move(box_[idx]));
                }
            }
        } else {
            for (auto &[k, v] : sparse_) {
                v.prune();
                if (!v.is_zero()) {
                    out.emplace_back(k, std::move(v));
                }
            }
        }
        // Both traversals are already in lexicographic key order.
        return trig_poly::from_terms(std::move(out));
    }

private:
    static std::array<int, 4> bounds(const trig_poly &p)
    {
        std::array<int, 4> r{p.terms().front().first.m, p.terms().back().first.m, p.terms().front().first.n,
                             p.terms().front().first.n};
        for (const auto &t : p.terms()) {
            r[2] = std::min(r[2], t.first.n);
            r[3] = std::max(r[3], t.first.n);
        }
        return r;
    }

    bool dense_ = false;
    int min_m_ = 0, min_n_ = 0;
    std::size_t width_m_ = 0, width_n_ = 0;
    std::vector<pi_rational> box_;
    std::vector<char> used_;
    std::map<freq_key, pi_rational> sparse_;
};

} // namespace detail

inline trig_poly operator*(const trig_poly &a, const trig_poly &b)
{
    detail::product_accumulator acc(a, b);
    for (const auto &ta : a.terms_) {
        for (const auto &tb : b.terms_) {
            acc.add_product(ta.first + tb.first, ta.second, tb.second);
        }
    }
    return acc.finish();
}

inline trig_poly mul(const trig_poly &a, const trig_poly &b) { return a * b; }

// sum of scalar_i * p_i in canonical form.
inline trig_poly linear_combine(std::span<const std::pair<pi_rational, trig_poly>> pairs)
{
    std::vector<trig_poly::value_type> all;
    for (const auto &[s, p] : pairs) {
        for (const auto &[k, c] : p.terms()) {
            all.emplace_back(k, s * c);
        }
    }
    return trig_poly::from_terms(std::move(all));
}

// Multiplier of exp(i*pi*(m*x+n*y)) under each derivative:
//   d/dx -> i*pi*m,  d/dy -> i*pi*n,  d/dz -> (pi/2)(n + i*m),  d/dzbar -> (pi/2)(-n + i*m).
inline pi_rational diff_multiplier(freq_key k, direction dir)
{
    switch (dir) {
    case direction::x: return pi_rational(gaussian_rational(0, k.m), 1);
    case direction::y: return pi_rational(gaussian_rational(0, k.n), 1);
    case direction::z: return pi_rational(gaussian_rational(rational(k.n, 2), rational(k.m, 2)), 1);
    case direction::zbar: return pi_rational(gaussian_rational(rational(-k.n, 2), rational(k.m, 2)), 1);
    }
    return {};
}

inline trig_poly diff(const trig_poly &p, direction dir)
{
    std::vector<trig_poly::value_type> out;
    out.reserve(p.size());
    for (const auto &[k, c] : p.terms()) {
        auto d = diff_multiplier(k, dir) * c;
        if (!d.is_zero()) {
            out.emplace_back(k, std::move(d));
        }
    }
    // diff preserves key order and never merges.
    return trig_poly::from_terms(std::move(out));
}

inline trig_poly conjugate(const trig_poly &p)
{
    std::vector<trig_poly::value_type> out;
    out.reserve(p.size());
    for (const auto &[k, c] : p.terms()) {
        out.emplace_back(-k, c.conj());
    }
    return trig_poly::from_terms(std::move(out));
}

// p multiplied by i^k.
inline trig_poly times_i_power(const trig_poly &p, int k)
{
    return pi_rational(gaussian_rational(1).times_i_power(k)) * p;
}

inline std::complex<double> eval(const trig_poly &p, double x, double y)
{
    std::complex<double> s{};
    for (const auto &[k, c] : p.terms()) {
        s += c.to_complex() * std::polar(1.0, std::numbers::pi * (k.m * x + k.n * y));
    }
    return s;
}

// Double-precision image of a trig_poly for repeated evaluation.
struct numeric_trig_poly {
    struct entry {
        int m, n;
        std::complex<double> c;
    };
    std::vector<entry> entries;

    numeric_trig_poly() = default;
    explicit numeric_trig_poly(const trig_poly &p)
    {
        entries.reserve(p.size());
        for (const auto &[k, c] : p.terms()) {
            entries.push_back({k.m, k.n, c.to_complex()});
        }
    }

    std::complex<double> operator()(double x, double y) const
    {
        std::complex<double> s{};
        for (const auto &e : entries) {
            s += e.c * std::polar(1.0, std::numbers::pi * (e.m * x + e.n * y));
        }
        return s;
    }

    double norm1() const
    {
        double s = 0.0;
        for (const auto &e : entries) {
            s += std::abs(e.c);
        }
        return s;
    }
};

// One line per (key, pi-power) term: "m n re_num/re_den im_num/im_den pi_power".
inline std::string to_debug_text(const trig_poly &p)
{
    std::string out;
    for (const auto &[k, c] : p.terms()) {
        for (const auto &t : c.terms()) {
            out += std::to_string(k.m) + ' ' + std::to_string(k.n) + ' ' + to_fraction_string(t.value.re) + ' ' +
                   to_fraction_string(t.value.im) + ' ' + std::to_string(t.power) + '\n';
        }
    }
    return out;
}

// Inverse of to_debug_text. Blank lines and '#' comments are skipped.
inline trig_poly from_debug_text(std::string_view text)
{
    std::vector<trig_poly::value_type> terms;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        int m = 0, n = 0, power = 0;
        std::string re, im;
        if (!(ls >> m >> n >> re >> im >> power)) {
            throw std::invalid_argument("malformed trig_poly debug line: " + line);
        }
        rational qr(re), qi(im);
        qr.canonicalize();
        qi.canonicalize();
        terms.emplace_back(freq_key{m, n}, pi_rational(gaussian_rational(qr, qi), power));
    }
    return trig_poly::from_terms(std::move(terms));
}

} // namespace kgflow
