#include "pxdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pxdg {

namespace {

// Legendre P_n and its derivative at x by the three-term recurrence.
void legendre(int n, double x, double& value, double& derivative) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    value = 1.0;
    derivative = 0.0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  value = p1;
  derivative = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double value = 0.0, derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(n, x, value, derivative);
      const double dx = value / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, value, derivative);
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: n must be >= 2");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const int m = n - 1;  // interior nodes are the roots of P'_m
  rule.points.front() = -1.0;
  rule.points.back() = 1.0;
  rule.weights.front() = rule.weights.back() = 2.0 / (m * (m + 1.0));
  for (int i = 1; i < m; ++i) {
    // Chebyshev-Gauss-Lobatto initial guess, then Newton on (1-x^2) P'_m.
    double x = -std::cos(std::numbers::pi * i / m);
    for (int iter = 0; iter < 100; ++iter) {
      double value = 0.0, derivative = 0.0;
      legendre(m, x, value, derivative);
      // d/dx[(1-x^2)P'] = -m(m+1) P
      const double f = (1.0 - x * x) * derivative;
      const double df = -m * (m + 1.0) * value;
      const double dx = f / df;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double value = 0.0, derivative = 0.0;
    legendre(m, x, value, derivative);
    rule.points[i] = x;
    rule.weights[i] = 2.0 / (m * (m + 1.0) * value * value);
  }
  // enforce exact symmetry
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.points[n - 1 - i] - rule.points[i]);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

QuadratureRule map_rule(const QuadratureRule& reference, double a, double b) {
  QuadratureRule rule;
  rule.points.reserve(reference.size());
  rule.weights.reserve(reference.size());
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double t = reference.points[i];
    // exact endpoints when the reference rule contains +-1
    double x = mid + half * t;
    if (t == -1.0) x = a;
    if (t == 1.0) x = b;
    rule.points.push_back(x);
    rule.weights.push_back(half * reference.weights[i]);
  }
  return rule;
}

QuadratureRule composite_trapezoid(double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("composite_trapezoid: panels must be >= 1");
  QuadratureRule rule;
  const double width = (b - a) / panels;
  for (int i = 0; i <= panels; ++i) {
    const double x = (i == panels) ? b : a + i * width;
    const double w = (i == 0 || i == panels) ? 0.5 * width : width;
    rule.points.push_back(x);
    rule.weights.push_back(w);
  }
  return rule;
}

QuadratureRule composite_gauss(double a, double b, int panels, int points) {
  if (panels < 1) throw std::invalid_argument("composite_gauss: panels must be >= 1");
  const QuadratureRule reference = gauss_legendre(points);
  QuadratureRule rule;
  const double width = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == panels) ? b : lo + width;
    const QuadratureRule piece = map_rule(reference, lo, hi);
    rule.points.insert(rule.points.end(), piece.points.begin(), piece.points.end());
    rule.weights.insert(rule.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return rule;
}

QuadratureRule QuadratureSpec::on(double a, double b) const {
  if (kind == Kind::trapezoid) return composite_trapezoid(a, b, panels);
  return composite_gauss(a, b, panels, points);
}

std::string QuadratureSpec::to_string() const {
  if (kind == Kind::trapezoid) return "trapezoid";
  return "gauss" + std::to_string(points);
}

QuadratureSpec QuadratureSpec::parse(const std::string& text, int panels) {
  if (panels < 1) throw std::invalid_argument("quadrature panels must be >= 1");
  if (text == "trapezoid" || text == "trap") return trapezoid(panels);
  if (text.rfind("gauss", 0) == 0) {
    const std::string digits = text.substr(5);
    const int n = digits.empty() ? 4 : std::stoi(digits);
    if (n < 1) throw std::invalid_argument("gauss rule needs at least one point");
    return gauss(n, panels);
  }
  throw std::invalid_argument("unknown quadrature '" + text + "'");
}

}  // namespace pxdg
