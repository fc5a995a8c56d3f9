#pragma once

#include <string>
#include <vector>

namespace pxdg {

/// Points and weights of a one-dimensional rule.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Lobatto rule on [-1, 1] (endpoints included), n >= 2.
QuadratureRule gauss_lobatto(int n);

/// Affine image of a rule given on [-1, 1].
QuadratureRule map_rule(const QuadratureRule& reference, double a, double b);

/// Composite trapezoid on [a, b] with `panels` equal panels.
QuadratureRule composite_trapezoid(double a, double b, int panels);

/// Composite Gauss-Legendre on [a, b]: `panels` equal panels, `points` each.
QuadratureRule composite_gauss(double a, double b, int panels, int points);

/// Element-level quadrature selection used by the functionals.
struct QuadratureSpec {
  enum class Kind { trapezoid, gauss };
  Kind kind = Kind::trapezoid;
  int panels = 1;
  int points = 2;  // Gauss points per panel; ignored for trapezoid

  static QuadratureSpec trapezoid(int panels = 1) { return {Kind::trapezoid, panels, 2}; }
  static QuadratureSpec gauss(int points, int panels = 1) { return {Kind::gauss, panels, points}; }

  QuadratureRule on(double a, double b) const;

  /// "trapezoid" or "gaussN"; panels are carried separately.
  std::string to_string() const;
  static QuadratureSpec parse(const std::string& text, int panels = 1);
};

}  // namespace pxdg
