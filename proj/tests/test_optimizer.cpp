#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "pxdg/bfgs.hpp"
#include "pxdg/exact_solution.hpp"
#include "pxdg/problem.hpp"
#include "pxdg/solve.hpp"

using namespace pxdg;

namespace {

MeshPtr uniform(std::size_t n) { return std::make_shared<const Mesh1D>(uniform_mesh(-1.0, 1.0, n)); }

Objective rosenbrock() {
  return [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g.resize(2);
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
}

}  // namespace

TEST_CASE("quadratic in five variables") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(5, 5, [&] { return d(rng); });
  const Eigen::MatrixXd q = a * a.transpose() + Eigen::MatrixXd::Identity(5, 5);
  const Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(5, [&] { return d(rng); });
  const Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = q * x - b;
    return 0.5 * x.dot(q * x) - b.dot(x);
  };
  // quadratic termination needs near-exact line searches
  BfgsConfig cfg;
  cfg.grad_tol = 1e-10;
  cfg.c2 = 1e-3;
  const BfgsResult r = bfgs_minimize(f, Eigen::VectorXd::Zero(5), cfg);
  CHECK(r.converged());
  CHECK(r.iterations <= 6);
  CHECK((r.x - q.ldlt().solve(b)).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("Rosenbrock from (-1.2, 1)") {
  BfgsConfig cfg;
  cfg.grad_tol = 1e-12;
  for (std::size_t dense_limit : {2000, 0}) {
    cfg.dense_limit = dense_limit;
    const BfgsResult r = bfgs_minimize(rosenbrock(), Eigen::Vector2d(-1.2, 1.0), cfg);
    CHECK(r.acceptable());
    CHECK(std::abs(r.x[0] - 1.0) <= 1e-6);
    CHECK(std::abs(r.x[1] - 1.0) <= 1e-6);
    for (std::size_t i = 0; i + 1 < r.value_history.size(); ++i) CHECK(r.value_history[i + 1] <= r.value_history[i]);
  }
}

TEST_CASE("convex objective: value history never increases") {
  const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g.resize(x.size());
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      s += std::exp(x[i]) + std::pow(std::abs(x[i] - 0.5 * i), 3.5);
      g[i] = std::exp(x[i]) + 3.5 * std::pow(std::abs(x[i] - 0.5 * i), 2.5) * (x[i] > 0.5 * i ? 1.0 : -1.0);
    }
    return s;
  };
  const BfgsResult r = bfgs_minimize(f, Eigen::VectorXd::Constant(8, 3.0), BfgsConfig{});
  CHECK(r.acceptable());
  for (std::size_t i = 0; i + 1 < r.value_history.size(); ++i) CHECK(r.value_history[i + 1] <= r.value_history[i]);
}

TEST_CASE("configuration checks and status names") {
  BfgsConfig cfg;
  cfg.c2 = cfg.c1 / 2;
  CHECK_THROWS(cfg.validate());
  cfg = BfgsConfig{};
  cfg.stall_grad_tol = cfg.grad_tol / 10;
  CHECK_THROWS(cfg.validate());
  CHECK(to_string(BfgsStatus::roundoff_stall) == "roundoff_stall");
  const Objective nan = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = x;
    return std::nan("");
  };
  CHECK(bfgs_minimize(nan, Eigen::VectorXd::Ones(2), BfgsConfig{}).status == BfgsStatus::diverged);
}

TEST_CASE("DG with p = 2 on four elements") {
  const double b = 1.0372163548e6;
  FunctionalSpec spec;
  spec.u_D = {-b, b};
  const SolveReport r = solve_dg(spec, uniform(4), 1);
  REQUIRE(r.acceptable());
  CHECK(r.terms.total <= 2.0 * b * b);
  const Eigen::VectorXd& c = r.solution.coefficients();
  for (Eigen::Index i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] + c[c.size() - 1 - i]) <= 1e-6 * b);

  BfgsConfig again;
  again.initial_guess = InitialGuess::supplied;
  again.supplied = c;
  const SolveReport restart = solve_dg(spec, uniform(4), 1, again);
  CHECK(restart.acceptable());
  CHECK(restart.iterations <= 2);
}

TEST_CASE("CG with p = 2 reproduces the linear solution") {
  const double b = 1.0372163548e6;
  FunctionalSpec spec;
  spec.u_D = {-b, b};
  for (int k : {1, 2}) {
    const SolveReport r = solve_cg(spec, uniform(6), k);
    REQUIRE(r.acceptable());
    const Eigen::VectorXd dofs = r.solution.continuous_dofs();
    for (Eigen::Index i = 0; i < dofs.size(); ++i) {
      CHECK(std::abs(dofs[i] - b * (-1.0 + 2.0 * i / (dofs.size() - 1))) <= 1e-8 * b);
    }
  }
}

TEST_CASE("hat problem with 41 elements: increasing and odd") {
  const Problem pb = paper1d();
  const SolveReport r = solve_dg(pb.spec, uniform(41), 1);
  REQUIRE(r.acceptable());
  const double b = pb.exact->B();
  std::vector<double> nodal;
  for (std::size_t e = 0; e < 41; ++e) {
    for (double v : r.solution.element_coefficients(e)) nodal.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < nodal.size(); ++i) CHECK(nodal[i + 1] >= nodal[i] - 1e-9 * b);
  for (std::size_t i = 0; i < nodal.size(); ++i) CHECK(std::abs(nodal[i] + nodal[nodal.size() - 1 - i]) <= 1e-3 * b);
  std::ostringstream os;
  write_history_csv(os, r);
  CHECK(os.str().rfind("iteration,value,grad_norm\n", 0) == 0);
}

TEST_CASE("hat problem with 41 elements: steep at the origin") {
  const Problem pb = paper1d();
  const SolveReport r = solve_dg(pb.spec, uniform(41), 1);
  REQUIRE(r.acceptable());
  // element 20 contains the origin; its slope should exceed every other element's
  const auto slope = [&](std::size_t e) {
    const auto c = r.solution.element_coefficients(e);
    return (c[1] - c[0]) / (2.0 / 41);
  };
  for (std::size_t e = 0; e < 41; ++e) {
    if (e != 20) CHECK(slope(20) > slope(e));
  }
}
