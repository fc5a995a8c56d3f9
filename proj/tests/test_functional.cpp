#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "pxdg/functional.hpp"

using namespace pxdg;

namespace {

MeshPtr uniform(std::size_t n) { return std::make_shared<const Mesh1D>(uniform_mesh(-1.0, 1.0, n)); }

FunctionalSpec quadratic(double b) {
  FunctionalSpec spec;
  spec.u_D = {-b, b};
  return spec;
}

double relative_fd_error(const FunctionalSpec& spec, const BrokenFunction& v) {
  const Eigen::VectorXd g = grad_discrete(v, spec);
  const auto f = [&](const Eigen::VectorXd& c) { return eval_discrete(BrokenFunction(v.mesh_ptr(), v.degree(), c), spec).total; };
  const Eigen::VectorXd fd = oracle::fd_gradient(f, v.coefficients(), 1e-6);
  return (fd - g).lpNorm<Eigen::Infinity>() / g.lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("linear candidate Bx has energy 2 B^2") {
  const double b = 1.0372163548e6;
  for (std::size_t n : {2, 4, 9}) {
    const BrokenFunction v =
        BrokenFunction::interpolate(uniform(n), 1, [b](double x) { return b * x; }, Continuity::continuous);
    const TermBreakdown t = eval_discrete(v, quadratic(b));
    CHECK(t.total == doctest::Approx(2.0 * b * b).epsilon(1e-14));
    CHECK(t.dirichlet_penalty == 0.0);
    CHECK(t.interior_penalty == 0.0);
  }
}

TEST_CASE("zero function pays n B^2 in Dirichlet penalties") {
  const double b = 3.5;
  for (std::size_t n : {2, 5, 40}) {
    const TermBreakdown t = eval_discrete(BrokenFunction::zero(uniform(n), 1), quadratic(b));
    CHECK(t.dirichlet_penalty == doctest::Approx(n * b * b).epsilon(1e-14));
    CHECK(t.gradient_term == 0.0);
    CHECK(t.total == t.dirichlet_penalty);
  }
}

TEST_CASE("single unit jump with degree-0 lifting") {
  const std::size_t n = 6;
  const double h = 2.0 / n;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
  c.tail(n).setOnes();
  const BrokenFunction v(uniform(n), 1, c);
  FunctionalSpec spec;
  spec.u_D = {0.0, 1.0};
  spec.lifting = LiftingConfig{0};
  const TermBreakdown t = eval_discrete(v, spec);
  CHECK(t.interior_penalty == doctest::Approx(1.0 / h).epsilon(1e-14));
  CHECK(t.dirichlet_penalty == 0.0);
  // R = 1 / (2h) on the two elements at the face
  CHECK(t.gradient_term == doctest::Approx(2.0 * h / (4.0 * h * h)).epsilon(1e-14));
}

TEST_CASE("gradient at the linear candidate and at zero") {
  const double b = 2.0;
  const MeshPtr m = uniform(5);
  const BrokenFunction v = BrokenFunction::interpolate(m, 1, [b](double x) { return b * x; }, Continuity::continuous);
  const Eigen::VectorXd g = grad_discrete(v, quadratic(b));
  // continuous perturbations vanishing at the ends
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd dofs(6);
    for (auto& x : dofs) x = d(rng);
    dofs[0] = dofs[5] = 0.0;
    const BrokenFunction w = BrokenFunction::from_continuous(m, 1, dofs);
    CHECK(std::abs(g.dot(w.coefficients())) <= 1e-12 * g.norm());
  }
  CHECK(relative_fd_error(quadratic(b), v) <= 1e-6);

  const Eigen::VectorXd g0 = grad_discrete(BrokenFunction::zero(m, 1), quadratic(b));
  for (Eigen::Index i = 1; i + 1 < g0.size(); ++i) CHECK(g0[i] == 0.0);
  CHECK(g0[0] != 0.0);
  CHECK(g0[g0.size() - 1] != 0.0);
}

TEST_CASE("quadratic case: the gradient is affine") {
  const MeshPtr m = uniform(4);
  std::mt19937_64 rng(2);
  FunctionalSpec spec = quadratic(1.5);
  spec.lifting = LiftingConfig{2};
  const BrokenFunction v = BrokenFunction(m, 2, Eigen::VectorXd::NullaryExpr(12, [&] {
                                            return std::uniform_real_distribution<double>(-1, 1)(rng);
                                          }));
  const Eigen::VectorXd gv = grad_discrete(v, spec);
  const Eigen::VectorXd g0 = grad_discrete(BrokenFunction::zero(m, 2), spec);
  for (double alpha : {-2.0, 0.5, 3.0}) {
    const Eigen::VectorXd ga = grad_discrete(alpha * v, spec);
    CHECK((ga - (alpha * gv + (1.0 - alpha) * g0)).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + ga.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("finite-difference gradient for variable exponents and fidelity") {
  FunctionalSpec hat;
  hat.p = ExponentField::hat(0.01, 0.01);
  hat.u_D = {-3.0, 3.0};
  hat.normalize_by_exponent = true;
  hat.quadrature = QuadratureSpec::gauss(3, 2);

  FunctionalSpec fid;
  fid.p = ExponentField::piecewise_linear({-1.0, 0.0, 1.0}, {1.6, 3.0, 2.2});
  fid.fidelity_on = true;
  fid.xi = [](double x) { return std::sin(4.0 * x); };
  fid.u_D = {0.5, -0.25};
  fid.quadrature = QuadratureSpec::trapezoid(3);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (const FunctionalSpec* spec : {&hat, &fid}) {
    for (int t = 0; t < 5; ++t) {
      const BrokenFunction v(uniform(7), 2, Eigen::VectorXd::NullaryExpr(21, [&] { return d(rng); }));
      CHECK(relative_fd_error(*spec, v) <= 1e-6);
    }
  }
}

TEST_CASE("continuous energy") {
  const MeshPtr m = uniform(4);
  const BrokenFunction x = BrokenFunction::interpolate(m, 1, [](double t) { return t; }, Continuity::continuous);
  FunctionalSpec spec;
  CHECK(eval_continuous(x, spec).total == doctest::Approx(2.0));
  spec.normalize_by_exponent = true;
  CHECK(eval_continuous(x, spec).total == doctest::Approx(1.0));

  FunctionalSpec data;
  data.u_D = {0.3, -0.7};
  data.p = ExponentField::hat(0.3, 0.5);
  const BrokenFunction s =
      BrokenFunction::interpolate(m, 2, [](double t) { return std::cos(2.0 * t); }, Continuity::continuous);
  CHECK(eval_discrete(s, data).total ==
        doctest::Approx(eval_continuous(s, data).total + eval_discrete(s, data).dirichlet_penalty).epsilon(1e-14));

  FunctionalSpec fid;
  fid.fidelity_on = true;
  fid.xi = [](double t) { return 2.0 * t - 0.5; };
  const BrokenFunction xi =
      BrokenFunction::interpolate(m, 1, [](double t) { return 2.0 * t - 0.5; }, Continuity::continuous);
  CHECK(eval_continuous(xi, fid).fidelity_term == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("coercivity chain and validation") {
  FunctionalSpec spec;
  spec.p = ExponentField::hat(0.2, 0.5);
  spec.u_D = {-1.0, 1.0};
  const MeshPtr m = uniform(6);
  const DiscreteFunctional f(spec, m, 1);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const auto co = f.coercivity(Eigen::VectorXd::NullaryExpr(12, [&] { return d(rng); }));
    CHECK(co.lhs <= co.rhs * (1.0 + 1e-12));
  }
  FunctionalSpec bad;
  bad.p = ExponentField::constant(1.0);
  CHECK_THROWS(DiscreteFunctional(bad, m, 1));
  FunctionalSpec missing;
  missing.fidelity_on = true;
  CHECK_THROWS(DiscreteFunctional(missing, m, 1));
}
