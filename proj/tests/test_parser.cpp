#include <catch_amalgamated.hpp>

#include <random>
#include <string>

#include "support.hpp"

using namespace kgflow;
using testing_support::reference_h;
using testing_support::q;

namespace {

error_kind kind_of(const std::string &text)
{
    try {
        parse_hamiltonian(text);
    } catch (const error &e) {
        return e.kind();
    }
    FAIL("expected a diagnostic for " << text);
    return error_kind::invalid_argument;
}

} // namespace

TEST_CASE("reference Hamiltonian expands to the hand-derived coefficients", "[hparse]")
{
    const auto h = parse_hamiltonian(reference_h);
    CHECK(h.size() == 13);
    CHECK(h.coeff({0, 0}) == pi_rational(q(5, 32)));
    for (freq_key k : {freq_key{2, 0}, freq_key{-2, 0}, freq_key{0, 2}, freq_key{0, -2}}) {
        CHECK(h.coeff(k) == pi_rational(q(-1, 16)));
    }
    for (freq_key k : {freq_key{4, 0}, freq_key{-4, 0}, freq_key{0, 4}, freq_key{0, -4}}) {
        CHECK(h.coeff(k) == pi_rational(q(1, 128)));
    }
    for (freq_key k : {freq_key{2, 2}, freq_key{2, -2}, freq_key{-2, 2}, freq_key{-2, -2}}) {
        CHECK(h.coeff(k) == pi_rational(q(1, 64)));
    }

    // cross-check with mul on separately parsed factors
    const auto sx = parse_expression("sin(pi*x)^2");
    const auto sy = parse_expression("sin(pi*y)^2");
    trig_poly_builder b;
    const auto s = b(sx) + b(sy);
    CHECK(h == pi_rational(q(1, 8)) * (s * s));
}

TEST_CASE("hparse diagnostics", "[hparse]")
{
    CHECK(kind_of("sin(pi*x)") == error_kind::not_periodic);
    CHECK(kind_of("x + y") == error_kind::non_trig_term);
    CHECK(kind_of("sin(x*y)") == error_kind::non_linear_trig_argument);
    CHECK(kind_of("sin(pi*x/3)") == error_kind::non_linear_trig_argument);
    CHECK(kind_of("cos(2*pi*x + 1/3)") == error_kind::non_linear_trig_argument);
    CHECK(kind_of("cos(pi*x)^2/x") == error_kind::non_trig_term);
    CHECK(kind_of("cos(2*pi*x)/cos(2*pi*y)") == error_kind::syntax);
    CHECK(kind_of("cos(2*pi*x)/0") == error_kind::syntax);
    CHECK(kind_of("cos(2*pi*x") == error_kind::syntax);
    CHECK(kind_of("") == error_kind::syntax);
    CHECK(kind_of("2 $ 3") == error_kind::syntax);
    CHECK(kind_of("tan(x)") == error_kind::syntax);
    CHECK(kind_of("sin(2*pi*x)*1i") == error_kind::syntax);

    try {
        parse_hamiltonian("1 + x");
        FAIL();
    } catch (const parse_error &e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("hparse accepts phases, decimals, division by constants", "[hparse]")
{
    // cos(2 pi x + pi/2) = -sin(2 pi x)
    CHECK(parse_hamiltonian("cos(2*pi*x + pi/2)") == parse_hamiltonian("-sin(2*pi*x)"));
    CHECK(parse_hamiltonian("0.25*cos(2*pi*y)") == parse_hamiltonian("(1/4)*cos(2*pi*y)"));
    CHECK(parse_hamiltonian("0.08 + 09") == parse_hamiltonian("2/25 + 9"));
    const auto shear = parse_hamiltonian(testing_support::shear_h);
    CHECK(shear.coeff({2, 0}) == pi_rational(gaussian_rational(0, q(-1, 4)), -1));
    CHECK(parse_hamiltonian("0").is_zero());
}

TEST_CASE("print and reparse round trip", "[hparse]")
{
    std::mt19937 rng(31);
    std::vector<trig_poly> cases{parse_hamiltonian(reference_h), parse_hamiltonian(testing_support::shear_h),
                                 parse_hamiltonian("3 + pi^2*cos(2*pi*(x - y)) - sin(4*pi*y)/7")};
    for (int i = 0; i < 10; ++i) {
        cases.push_back(testing_support::random_hamiltonian(rng, 4, 3));
    }
    for (const auto &h : cases) {
        const auto text = format_real_trig_poly(h);
        CHECK(parse_hamiltonian(text) == h);
    }
}

TEST_CASE("expanded form agrees with direct evaluation", "[hparse]")
{
    const std::vector<std::string> texts{reference_h, testing_support::shear_h,
                                         "cos(2*pi*x)^3*sin(2*pi*(x+y)) + 0.5*cos(pi*x + pi*y)^2",
                                         "-(sin(2*pi*x)*sin(4*pi*y) - 2)^2/pi"};
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto &t : texts) {
        const auto p = parse_hamiltonian(t);
        const auto e = parse_expression(t);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng), y = u(rng);
            CHECK(std::abs(eval(p, x, y) - evaluate(*e, x, y)) < 1e-10);
        }
    }
}

TEST_CASE("parser is total on random token strings", "[hparse][property]")
{
    const std::vector<std::string> tokens{"x", "y", "pi", "sin(", "cos(", "(", ")", "+", "-", "*",
                                          "/", "^2", "^3", "2", "1/2", "0.5", " ", "#", "sin", "^"};
    std::mt19937 rng(123);
    std::uniform_int_distribution<std::size_t> pick(0, tokens.size() - 1), len(0, 14);
    int accepted = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text;
        const auto n = len(rng);
        for (std::size_t i = 0; i < n; ++i) {
            text += tokens[pick(rng)];
        }
        try {
            parse_hamiltonian(text);
            ++accepted;
        } catch (const parse_error &e) {
            CHECK(e.position() <= text.size());
        }
    }
    CHECK(accepted > 0);
}
