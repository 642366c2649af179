#pragma once

#include <random>
#include <string>

#include <kgflow/kgflow.hpp>

namespace testing_support {

inline const char *const reference_h = "(1/8)*(sin(pi*x)^2+sin(pi*y)^2)^2";
inline const char *const shear_h = "sin(2*pi*x)/(2*pi)";

// Canonical n/d (the two-argument mpq constructor does not reduce).
inline kgflow::rational q(long n, long d = 1)
{
    kgflow::rational r(n, d);
    r.canonicalize();
    return r;
}

inline kgflow::trig_poly cos_2pi_x()
{
    using namespace kgflow;
    return trig_poly::monomial({2, 0}, rational(1, 2)) + trig_poly::monomial({-2, 0}, rational(1, 2));
}

inline kgflow::trig_poly sin_2pi_x()
{
    using namespace kgflow;
    return trig_poly::monomial({2, 0}, pi_rational(gaussian_rational(0, rational(-1, 2)))) +
           trig_poly::monomial({-2, 0}, pi_rational(gaussian_rational(0, rational(1, 2))));
}

// Small random polynomial: keys in [-span, span]^2, Gaussian-rational coefficients times pi^p.
inline kgflow::trig_poly random_poly(std::mt19937 &rng, int terms = 4, int span = 3, int max_pi = 2)
{
    using namespace kgflow;
    std::uniform_int_distribution<int> key(-span, span), num(-5, 5), den(1, 4), pw(0, max_pi);
    std::vector<trig_poly::value_type> t;
    for (int i = 0; i < terms; ++i) {
        gaussian_rational g(q(num(rng), den(rng)), q(num(rng), den(rng)));
        t.emplace_back(freq_key{key(rng), key(rng)}, pi_rational(g, pw(rng)));
    }
    return trig_poly::from_terms(std::move(t));
}

// Random real, even-keyed (admissible) Hamiltonian with rational coefficients.
inline kgflow::trig_poly random_hamiltonian(std::mt19937 &rng, int terms = 3, int span = 2)
{
    using namespace kgflow;
    std::uniform_int_distribution<int> key(-span, span), num(-4, 4), den(1, 3);
    std::vector<trig_poly::value_type> t;
    for (int i = 0; i < terms; ++i) {
        const freq_key k{2 * key(rng), 2 * key(rng)};
        const gaussian_rational g(q(num(rng), den(rng)), k == freq_key{0, 0} ? rational(0) : q(num(rng), den(rng)));
        t.emplace_back(k, pi_rational(g));
        t.emplace_back(-k, pi_rational(g.conj()));
    }
    return trig_poly::from_terms(std::move(t));
}

} // namespace testing_support
