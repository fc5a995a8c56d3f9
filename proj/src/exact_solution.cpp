#include "pxdg/exact_solution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "pxdg/quadrature.hpp"

namespace pxdg {

namespace {

double gauss_integral(const std::function<double(double)>& f, double a, double b, const QuadratureRule& ref) {
  const QuadratureRule rule = map_rule(ref, a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.points[i]);
  return sum;
}

}  // namespace

ExactSolution::ExactSolution(double epsilon, double a, double C)
    : epsilon_(epsilon), a_(a), c_(C), p_(ExponentField::hat(epsilon, a)) {}

// p - 1 formed directly, so that u'(0) = C^{1/eps} without cancellation
double ExactSolution::integrand(double s) const {
  const double t = std::abs(s);
  const double p_minus_one = t <= a_ ? (1.0 - epsilon_) / a_ * t + epsilon_ : 1.0;
  return std::pow(c_, 1.0 / p_minus_one);
}

ExactSolution ExactSolution::build(double epsilon, double a, double C, double rel_tol) {
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("exact solution needs C > 0");
  ExactSolution sol(epsilon, a, C);  // hat() validates eps and a
  static const QuadratureRule coarse = gauss_legendre(10);
  static const QuadratureRule fine = gauss_legendre(20);
  const auto f = [&sol](double s) { return sol.integrand(s); };

  // adaptive bisection: accept a panel once one 10-point rule agrees with
  // the two halves to rel_tol
  struct Panel {
    double lo, hi, value;
  };
  std::vector<Panel> accepted;
  std::vector<std::pair<Panel, int>> stack{{{0.0, a, gauss_integral(f, 0.0, a, coarse)}, 0}};
  while (!stack.empty()) {
    auto [panel, depth] = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (panel.lo + panel.hi);
    const Panel left{panel.lo, mid, gauss_integral(f, panel.lo, mid, coarse)};
    const Panel right{mid, panel.hi, gauss_integral(f, mid, panel.hi, coarse)};
    const double halves = left.value + right.value;
    if (std::abs(halves - panel.value) <= rel_tol * std::abs(halves) || depth >= 60) {
      accepted.push_back({panel.lo, panel.hi, gauss_integral(f, panel.lo, panel.hi, fine)});
    } else {
      stack.push_back({right, depth + 1});
      stack.push_back({left, depth + 1});
    }
  }
  std::sort(accepted.begin(), accepted.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  sol.panels_.push_back(0.0);
  sol.cumulative_.push_back(0.0);
  for (const Panel& p : accepted) {
    sol.panels_.push_back(p.hi);
    sol.cumulative_.push_back(sol.cumulative_.back() + p.value);
  }
  sol.panels_.back() = a;
  sol.b_ = sol.cumulative_.back() + C * (1.0 - a);
  return sol;
}

double ExactSolution::value(double x) const {
  if (!(std::abs(x) <= 1.0)) throw std::domain_error("exact solution is defined on [-1, 1]");
  if (x < 0.0) return -value(-x);
  if (x >= a_) {
    if (x == 1.0) return b_;
    return cumulative_.back() + c_ * (x - a_);
  }
  static const QuadratureRule fine = gauss_legendre(20);
  auto it = std::upper_bound(panels_.begin(), panels_.end(), x);
  const auto j = static_cast<std::size_t>(it - panels_.begin()) - 1;
  if (x == panels_[j]) return cumulative_[j];
  return cumulative_[j] + gauss_integral([this](double s) { return integrand(s); }, panels_[j], x, fine);
}

double ExactSolution::derivative(double x) const {
  if (!(std::abs(x) <= 1.0)) throw std::domain_error("exact solution is defined on [-1, 1]");
  return integrand(x);
}

double ExactSolution::energy(bool normalized) const {
  static const QuadratureRule fine = gauss_legendre(20);
  // |u'|^p = C^{p/(p-1)} = C u'
  const auto density = [&](double s) {
    const double p = p_(s);
    const double v = c_ * integrand(s);
    return normalized ? v / p : v;
  };
  double inner = 0.0;
  for (std::size_t j = 0; j + 1 < panels_.size(); ++j) inner += gauss_integral(density, panels_[j], panels_[j + 1], fine);
  const double outer = (normalized ? 0.5 : 1.0) * c_ * c_ * (1.0 - a_);
  return 2.0 * (inner + outer);
}

std::vector<double> ExactSolution::breakpoints() const {
  std::vector<double> out;
  out.push_back(-1.0);
  for (std::size_t j = panels_.size(); j-- > 1;) out.push_back(-panels_[j]);
  for (double s : panels_) out.push_back(s);
  out.push_back(1.0);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExactSolution build_exact(double epsilon, double a, double C) { return ExactSolution::build(epsilon, a, C); }

std::pair<double, double> eval_exact(const ExactSolution& sol, double x) { return sol.eval(x); }

}  // namespace pxdg
