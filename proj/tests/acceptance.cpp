// Acceptance checks: one PASS/FAIL line per criterion with the measured values.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pxdg/exact_solution.hpp"
#include "pxdg/experiments.hpp"
#include "pxdg/functional.hpp"
#include "pxdg/lifting.hpp"
#include "pxdg/problem.hpp"
#include "pxdg/properties.hpp"
#include "pxdg/reconstruction.hpp"
#include "pxdg/solve.hpp"

using namespace pxdg;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [failed]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + num(x);
  return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] < v[i])) return false;
  }
  return true;
}

MeshPtr uniform(double a, double b, std::size_t n) { return std::make_shared<const Mesh1D>(uniform_mesh(a, b, n)); }

const int workers = resolve_workers(0);

Verdict exact_calibration() {
  Verdict v;
  const auto start = Clock::now();
  const ExactSolution sol = build_exact(0.01, 0.01, 1.3);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  v.require(sol.derivative(0.0) == std::pow(1.3, 100.0), "u'(0) = " + num(sol.derivative(0.0)) + " vs 1.3^100");
  v.require(std::abs(sol.B() - 1.03e6) <= 0.05 * 1.03e6, "B = " + num(sol.B()) + " vs 1.03e6");
  v.require(seconds < 1.0, "time " + num(seconds) + " s");
  return v;
}

Verdict dg_cg_ordering() {
  Verdict v;
  const auto start = Clock::now();
  const std::vector<CompareEntry> e = compare_methods(paper1d(), {41, 150, 200}, RunSettings{}, workers);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const ErrorMetrics &dg41 = e[0].dg_errors, &cg82 = e[0].cg_errors;
  v.require(dg41.max_nodal_error < cg82.max_nodal_error,
            "max nodal DG41 " + num(dg41.max_nodal_error) + " < CG82 " + num(cg82.max_nodal_error));
  v.require(dg41.l1_error < cg82.l1_error, "L1 DG41 " + num(dg41.l1_error) + " < CG82 " + num(cg82.l1_error));
  const ErrorMetrics &cg300 = e[1].cg_errors, &cg400 = e[2].cg_errors;
  v.require(cg300.max_nodal_error >= 3.0 * cg400.max_nodal_error,
            "max nodal CG300/CG400 " + num(cg300.max_nodal_error / cg400.max_nodal_error));
  v.require(cg300.l1_error >= 3.0 * cg400.l1_error, "L1 CG300/CG400 " + num(cg300.l1_error / cg400.l1_error));
  v.require(seconds < 300.0, "time " + num(seconds) + " s");
  return v;
}

Verdict energy_decay() {
  Verdict v;
  const auto start = Clock::now();
  const Problem pb = paper1d();
  const ConvergenceStudy s = convergence_study(pb, Method::dg, {10, 20, 40, 80, 160}, RunSettings{}, workers);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const double target = *s.exact_energy;
  std::vector<double> gap, penalty, lifting, gradient;
  for (const auto& r : s.rows) {
    gap.push_back(std::abs(r.energy - target));
    penalty.push_back(r.interior_penalty + r.dirichlet_penalty);
    lifting.push_back(r.lifting_norm);
    gradient.push_back(r.gradient_error);
  }
  v.require(strictly_decreasing(gap) && gap.back() <= 0.02 * target,
            "(a) |I_h - I| " + list(gap) + " vs I = " + num(target));
  v.require(strictly_decreasing(penalty) && penalty.back() <= 0.1 * penalty.front(), "(b) penalties " + list(penalty));
  v.require(strictly_decreasing(lifting), "(c) ||R_h|| " + list(lifting));
  v.require(strictly_decreasing(gradient), "(d) gradient error " + list(gradient));
  v.require(seconds < 600.0, "time " + num(seconds) + " s");
  return v;
}

FunctionalSpec gradient_problem(int which) {
  FunctionalSpec spec;
  if (which == 0) {
    spec.u_D = {-1.0, 1.0};
  } else if (which == 1) {
    spec.p = ExponentField::hat(0.01, 0.01);
    spec.u_D = {-2.0, 2.0};
    spec.normalize_by_exponent = true;
    spec.quadrature = QuadratureSpec::trapezoid(2);
  } else {
    spec.p = ExponentField::piecewise_linear({-1.0, -0.2, 1.0}, {1.5, 2.8, 1.9});
    spec.q = ExponentField::constant(2.0);
    spec.fidelity_on = true;
    spec.xi = [](double x) { return std::sin(3.0 * x) + 0.2; };
    spec.u_D = {0.3, -0.6};
    spec.quadrature = QuadratureSpec::gauss(3);
  }
  return spec;
}

Verdict gradient_check() {
  Verdict v;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int which = 0; which < 3; ++which) {
    const FunctionalSpec spec = gradient_problem(which);
    const MeshPtr mesh = uniform(-1.0, 1.0, 8);
    const int degree = 1 + which % 2;
    const DiscreteFunctional f(spec, mesh, degree);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(f.num_coefficients(), [&] { return coeff(rng); });
      Eigen::VectorXd g;
      f.evaluate(c, &g);
      const Eigen::VectorXd fd = oracle::fd_gradient([&](const Eigen::VectorXd& x) { return f.evaluate(x).total; }, c, 1e-6);
      worst = std::max(worst, (fd - g).lpNorm<Eigen::Infinity>() / g.lpNorm<Eigen::Infinity>());
    }
    v.require(worst <= 1e-6, "problem " + std::to_string(which) + " worst relative error " + num(worst));
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  v.require(seconds < 30.0, "time " + num(seconds) + " s");
  return v;
}

Verdict lifting_checks() {
  Verdict v;
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const MeshPtr mesh = uniform(-1.0, 1.0, 3 + t % 7);
    const int k = 1 + t % 3;
    const LiftingConfig cfg{t % 4};
    const BrokenFunction u = random_broken(mesh, k, rng);
    const double scale = 1.0 + u.coefficients().lpNorm<Eigen::Infinity>();
    worst = std::max(worst, verify_weak_identity(u, lift(u, cfg), cfg) / scale);
  }
  v.require(worst <= 1e-12, "(a) weak identity residual / (1 + |u|) " + num(worst));

  const MeshPtr two = std::make_shared<const Mesh1D>(std::vector<double>{0.0, 1.0, 2.0});
  const BrokenFunction step(two, 1, Eigen::Vector4d(0.0, 0.0, 1.0, 1.0));
  const BrokenFunction r = lift(step, LiftingConfig{1});
  double err = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 64.0;
    err = std::max(err, std::abs(evaluate(r, x, Side::left) - (3.0 * x - 1.0)));
    err = std::max(err, std::abs(evaluate(r, 1.0 + x, Side::right) - (5.0 - 3.0 * (1.0 + x))));
  }
  v.require(err <= 1e-13, "(b) two-element error " + num(err));

  double continuous_max = 0.0;
  for (int l = 0; l <= 3; ++l) {
    const BrokenFunction c =
        BrokenFunction::interpolate(uniform(-1.0, 1.0, 9), 2, [](double x) { return std::cosh(x); }, Continuity::continuous);
    continuous_max = std::max(continuous_max, lift(c, LiftingConfig{l}).coefficients().cwiseAbs().maxCoeff());
  }
  v.require(continuous_max == 0.0, "(c) max |R_h u| for continuous u " + num(continuous_max));

  const std::vector<double> sweep = lifting_ratio_sweep(11, 6, 20, ExponentField::hat(0.01, 0.01));
  v.require(spread(sweep) <= 2.0, "(d) ratio per level " + list(sweep) + ", max/min " + num(spread(sweep)));
  return v;
}

Verdict modular_checks() {
  Verdict v;
  PropertyOptions o;
  o.suites = {"modular"};
  for (const auto& r : run_properties(o)) v.require(r.passed, r.name + " (" + r.detail + ")");
  return v;
}

Verdict reconstruction_checks() {
  Verdict v;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  bool exact = true;
  for (int t = 0; t < 20; ++t) {
    const double c = d(rng);
    const BrokenFunction u = BrokenFunction::interpolate(uniform(-1.0, 1.0, 4 + t), 1 + t % 3, [c](double) { return c; });
    const BrokenFunction q = reconstruct(u);
    for (double value : q.coefficients()) exact = exact && value == c;
  }
  v.require(exact, "constants reproduced exactly");

  const ReconstructionSweep sw = reconstruction_sweep(6, ExponentField::hat(0.01, 0.01));
  std::vector<double> orders;
  for (std::size_t j = 0; j + 1 < sw.h.size(); ++j) {
    // resolution floor: errors at rounding level carry no rate
    if (sw.l2_error[j + 1] <= 1e-12) break;
    orders.push_back(std::log(sw.l2_error[j] / sw.l2_error[j + 1]) / std::log(sw.h[j] / sw.h[j + 1]));
  }
  double min_order = 1e300;
  for (double o : orders) min_order = std::min(min_order, o);
  v.require(!orders.empty() && min_order >= 0.9, "L2 error orders " + list(orders));
  v.require(spread(sw.gradient_ratio) <= 2.0,
            "gradient ratio " + list(sw.gradient_ratio) + ", max/min " + num(spread(sw.gradient_ratio)));
  return v;
}

Verdict poincare_checks() {
  Verdict v;
  const std::vector<double> sweep = poincare_sweep(17, 4, 50, ExponentField::hat(0.01, 0.01));
  v.require(max_growth(sweep) <= 2.0, "max ratio per level " + list(sweep) + ", growth " + num(max_growth(sweep)));
  return v;
}

Verdict quadratic_sanity() {
  Verdict v;
  const double b = paper1d().exact->B();
  FunctionalSpec spec;
  spec.u_D = {-b, b};
  const MeshPtr mesh = uniform(-1.0, 1.0, 10);

  const SolveReport cg = solve_cg(spec, mesh, 1);
  const Eigen::VectorXd dofs = cg.solution.continuous_dofs();
  double cg_err = 0.0;
  for (Eigen::Index i = 0; i < dofs.size(); ++i) cg_err = std::max(cg_err, std::abs(dofs[i] - b * mesh->node(i)));
  v.require(cg.acceptable() && cg_err <= 1e-8 * b, "CG interpolant error / B " + num(cg_err / b));

  const SolveReport dg = solve_dg(spec, mesh, 1);
  v.require(dg.acceptable() && dg.terms.total <= 2.0 * b * b,
            "DG value / 2B^2 " + num(dg.terms.total / (2.0 * b * b)));
  double jumps = 0.0;
  for (std::size_t i = 1; i + 1 < mesh->num_nodes(); ++i) jumps = std::max(jumps, std::abs(jump(dg.solution, i)));
  v.require(jumps <= 1e-6 * b, "DG max jump / B " + num(jumps / b));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"exact solution calibration", exact_calibration},
      {"DG versus CG ordering", dg_cg_ordering},
      {"energy and penalty decay", energy_decay},
      {"gradient against finite differences", gradient_check},
      {"lifting correctness", lifting_checks},
      {"modular and Luxemburg relations", modular_checks},
      {"reconstruction", reconstruction_checks},
      {"broken Poincare stability", poincare_checks},
      {"p = 2 sanity", quadratic_sanity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu %s: %s  %s\n", i + 1, criteria[i].first, v.passed ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += v.passed ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
