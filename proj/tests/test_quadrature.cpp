#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pxdg/quadrature.hpp"

using namespace pxdg;

namespace {

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.points[i]);
  return s;
}

}  // namespace

TEST_CASE("gauss_legendre is exact to degree 2n-1") {
  for (int n = 1; n <= 12; ++n) {
    const QuadratureRule rule = gauss_legendre(n);
    CHECK(rule.size() == static_cast<std::size_t>(n));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(integrate(rule, [d](double x) { return std::pow(x, d); }) == doctest::Approx(exact).epsilon(1e-14));
    }
  }
}

TEST_CASE("gauss_lobatto includes the end points and is exact to degree 2n-3") {
  for (int n = 2; n <= 10; ++n) {
    const QuadratureRule rule = gauss_lobatto(n);
    CHECK(rule.points.front() == -1.0);
    CHECK(rule.points.back() == 1.0);
    for (int d = 0; d <= 2 * n - 3; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(integrate(rule, [d](double x) { return std::pow(x, d); }) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("mapped and composite rules integrate smooth functions") {
  const auto f = [](double x) { return std::exp(x) * std::sin(3.0 * x); };
  const double exact = oracle::adaptive_simpson(f, 0.2, 1.7);
  CHECK(integrate(map_rule(gauss_legendre(10), 0.2, 1.7), f) == doctest::Approx(exact).epsilon(1e-13));
  CHECK(integrate(composite_gauss(0.2, 1.7, 8, 6), f) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("composite trapezoid has order two") {
  const auto f = [](double x) { return std::cos(x); };
  const double exact = std::sin(2.0);
  const double e1 = std::abs(integrate(composite_trapezoid(0.0, 2.0, 16), f) - exact);
  const double e2 = std::abs(integrate(composite_trapezoid(0.0, 2.0, 32), f) - exact);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.01));
  const QuadratureRule one = composite_trapezoid(-1.0, 1.0, 1);
  REQUIRE(one.size() == 2);
  CHECK(one.weights[0] == 1.0);
  CHECK(one.weights[1] == 1.0);
}

TEST_CASE("QuadratureSpec parses and places points") {
  CHECK(QuadratureSpec::parse("trapezoid", 3).to_string() == "trapezoid");
  CHECK(QuadratureSpec::parse("gauss5").points == 5);
  CHECK(QuadratureSpec::parse("gauss5", 2).on(0.0, 1.0).size() == 10);
  CHECK_THROWS(QuadratureSpec::parse("simpson"));
  CHECK_THROWS(QuadratureSpec::parse("gauss3", 0));
  const QuadratureRule trap = QuadratureSpec::trapezoid(2).on(0.0, 1.0);
  CHECK(integrate(trap, [](double) { return 1.0; }) == doctest::Approx(1.0));
}
