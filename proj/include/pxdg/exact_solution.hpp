#pragma once

#include <utility>
#include <vector>

#include "pxdg/exponent.hpp"

namespace pxdg {

/// Solution of (|u'|^{p-2} u')' = 0 on (-1, 1) for the hat exponent with
/// flux constant C:  u' = C^{1/(p(x)-1)}, u odd, u(+-1) = +-B.
///
/// On [0, a] the derivative spans many orders of magnitude (C^{1/eps} at 0),
/// so u is tabulated at the break points of an adaptive Gauss-Legendre panel
/// partition and completed inside a panel with a 20-point rule. Outside
/// [-a, a] u is linear with slope C.
class ExactSolution {
 public:
  static ExactSolution build(double epsilon, double a, double C, double rel_tol = 1e-13);

  double epsilon() const { return epsilon_; }
  double a() const { return a_; }
  double C() const { return c_; }
  double B() const { return b_; }
  const ExponentField& exponent() const { return p_; }

  double value(double x) const;
  double derivative(double x) const;
  std::pair<double, double> eval(double x) const { return {value(x), derivative(x)}; }

  /// int_{-1}^{1} |u'|^p dx, divided pointwise by p when `normalized`.
  double energy(bool normalized) const;

  /// Panel break points in [-1, 1] (symmetric, sorted), useful for
  /// quadrature of quantities involving u.
  std::vector<double> breakpoints() const;

 private:
  ExactSolution(double epsilon, double a, double C);

  double integrand(double s) const;

  double epsilon_, a_, c_, b_ = 0.0;
  ExponentField p_;
  std::vector<double> panels_;      // 0 = s_0 < ... < s_m = a
  std::vector<double> cumulative_;  // int_0^{s_j} u'
};

/// Throws std::invalid_argument unless 0 < eps, a < 1 and C > 0.
ExactSolution build_exact(double epsilon, double a, double C);

/// (u(x), u'(x)); throws std::domain_error for |x| > 1.
std::pair<double, double> eval_exact(const ExactSolution& sol, double x);

}  // namespace pxdg
