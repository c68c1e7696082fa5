#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "irrspec/errors.hpp"
#include "irrspec/quadrature.hpp"

using namespace irrspec;
using std::numbers::pi;

TEST_CASE("trapezoid is exact for linear functions") {
  CHECK(quad::trapezoid([](double x) { return 3.0 * x + 1.0; }, 0.0, 2.0, 7) ==
        doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("checked trapezoid on a Gaussian") {
  const double v = quad::checked_even_trapezoid([](double x) { return std::exp(-x * x); }, 10.0,
                                                64, 1e-10, 0.0, "gauss");
  CHECK(v == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("checked trapezoid reports non-convergence") {
  CHECK_THROWS_AS(quad::checked_even_trapezoid([](double x) { return std::cos(40.0 * x); }, 1.0,
                                               8, 1e-8, 0.0, "oscillatory"),
                  NumericalError);
}

TEST_CASE("Gauss-Legendre panels integrate polynomials exactly") {
  const auto rule = quad::gauss_legendre_panels({-1.0, 0.5, 3.0}, 3);
  const double v = rule.integrate([](double x) { return std::pow(x, 9) - 2.0 * x * x; });
  const auto antiderivative = [](double x) { return std::pow(x, 10) / 10.0 - 2.0 * x * x * x / 3.0; };
  CHECK(v == doctest::Approx(antiderivative(3.0) - antiderivative(-1.0)).epsilon(1e-13));
}

TEST_CASE("sine integral against a direct quadrature") {
  for (double x : {0.3, 1.0, 5.0, 40.0}) {
    const auto rule = quad::gauss_legendre_panels({0.0, x}, 64);
    const double oracle = rule.integrate([](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; });
    CHECK(quad::sine_integral(x) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("cos(c x)/x^2 tail against panels plus remainder") {
  // Integrate numerically to a far limit and add the asymptotic remainder
  // sin(cM)/(cM^2) of the last piece.
  for (auto [c, lower] : {std::pair{0.0, 2.0}, {1.0, 3.0}, {2.5, 10.0}, {0.4, 64.0}}) {
    const double far = 4000.0;
    const auto rule = quad::gauss_legendre_panels({lower, far}, 4000);
    double numeric = rule.integrate([c = c](double x) { return std::cos(c * x) / (x * x); });
    if (c == 0.0) {
      numeric += 1.0 / far;
    } else {
      numeric += -std::sin(c * far) / (c * far * far);
    }
    CHECK(quad::cos_over_square_tail(c, lower) == doctest::Approx(numeric).epsilon(1e-7));
  }
}
