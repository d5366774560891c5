#include <doctest.h>

#include <cmath>

#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/quadrature.hpp"

using namespace censmed;

TEST_CASE("polynomials up to degree 22 are exact on one panel") {
    const auto r = integrate_adaptive([](double x) { return std::pow(x, 20) - 3 * x * x; }, -1.0, 2.0, 1e-10);
    const double exact = (std::pow(2.0, 21) + 1.0) / 21.0 - (8.0 + 1.0);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("normal density integrates to the cdf") {
    const auto r = integrate_adaptive([](double x) { return norm_pdf(x); }, -12.0, 0.7, 1e-12);
    CHECK(std::abs(r.value - norm_cdf(0.7)) < 1e-12);
}

TEST_CASE("peaked integrand triggers refinement") {
    const auto r = integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-8);
    CHECK(r.n_intervals > 1);
    CHECK(r.value == doctest::Approx(2.0 * std::atan(1.0 / 1e-2) / 1e-2).epsilon(1e-9));
}

TEST_CASE("budget exhaustion is reported") {
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, 1e-14, 5),
                    Error);
}
