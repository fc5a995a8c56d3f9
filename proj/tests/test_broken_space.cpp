#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "pxdg/broken_space.hpp"

using namespace pxdg;

namespace {

MeshPtr mesh_of(std::vector<double> nodes) { return std::make_shared<const Mesh1D>(std::move(nodes)); }

BrokenFunction constants(MeshPtr m, std::vector<double> values) {
  return BrokenFunction(m, 0, Eigen::Map<Eigen::VectorXd>(values.data(), values.size()));
}

}  // namespace

TEST_CASE("evaluation") {
  const BrokenFunction lin(mesh_of({0.0, 1.0}), 1, Eigen::Vector2d(0.0, 1.0));
  CHECK(evaluate(lin, 0.5) == doctest::Approx(0.5));
  const BrokenFunction pc = constants(mesh_of({0.0, 0.5, 1.0}), {1.0, 3.0});
  CHECK(evaluate(pc, 0.5, Side::left) == 1.0);
  CHECK(evaluate(pc, 0.5, Side::right) == 3.0);
  const MeshPtr m = std::make_shared<const Mesh1D>(uniform_mesh(-1.0, 1.0, 4));
  const BrokenFunction hat =
      BrokenFunction::interpolate(m, 1, [](double x) { return 1.0 - std::abs(x); }, Continuity::continuous);
  CHECK(evaluate(hat, 0.0, Side::left) == evaluate(hat, 0.0, Side::right));
}

TEST_CASE("element-wise gradient") {
  const MeshPtr m = std::make_shared<const Mesh1D>(uniform_mesh(0.0, 1.0, 3));
  const BrokenFunction u = BrokenFunction::interpolate(m, 1, [](double x) { return 2.0 * x + 1.0; });
  const BrokenFunction g = elementwise_gradient(u);
  CHECK(g.degree() == 0);
  for (double c : g.coefficients()) CHECK(c == doctest::Approx(2.0));
  const BrokenFunction sq = BrokenFunction::interpolate(mesh_of({0.0, 1.0}), 2, [](double x) { return x * x; });
  const BrokenFunction dsq = elementwise_gradient(sq);
  for (double x : {0.0, 0.3, 0.8}) CHECK(evaluate(dsq, x) == doctest::Approx(2.0 * x));
  CHECK(elementwise_gradient(constants(m, {4.0, 4.0, 4.0})).coefficients().norm() == 0.0);
}

TEST_CASE("jumps") {
  CHECK(jump(constants(mesh_of({0.0, 0.5, 1.0}), {1.0, 3.0}), 1) == -2.0);
  CHECK(jump(constants(mesh_of({0.0, 0.5, 1.0}), {0.0, 1.0}), 1) == -1.0);
  const MeshPtr m = std::make_shared<const Mesh1D>(uniform_mesh(-1.0, 1.0, 5));
  const BrokenFunction c = BrokenFunction::interpolate(m, 2, [](double x) { return std::sin(x); });
  for (std::size_t i = 1; i < 5; ++i) CHECK(jump(c, i) == doctest::Approx(0.0).scale(1.0));
  const FaceValues fv = face_values(constants(mesh_of({0.0, 0.5, 1.0}), {1.0, 3.0}));
  REQUIRE(fv.node.size() == 1);
  CHECK(fv.average[0] == 2.0);
  CHECK(fv.boundary_left == 1.0);
  CHECK(fv.boundary_right == 3.0);
}

TEST_CASE("broken seminorm") {
  const ExponentField two = ExponentField::constant(2.0);
  const MeshPtr m = std::make_shared<const Mesh1D>(uniform_mesh(-1.0, 1.0, 4));
  const BrokenFunction x = BrokenFunction::interpolate(m, 1, [](double t) { return t; }, Continuity::continuous);
  CHECK(broken_seminorm(x, two) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // jump -1 at x = 0.5 with face size 0.5: |-1| * 0.5^{-1/2}
  const BrokenFunction step = constants(mesh_of({0.0, 0.5, 1.0}), {0.0, 1.0});
  CHECK(broken_seminorm(step, two) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(broken_seminorm(BrokenFunction::zero(m, 2), two) == 0.0);
  // Dirichlet part: u - u_D = 1 at each end of the slope-1 function, face size 0.5
  CHECK(broken_seminorm(x, two, DirichletData{-2.0, 2.0}) ==
        doctest::Approx(std::sqrt(2.0) + 2.0).epsilon(1e-12));
}

TEST_CASE("embedding into a refinement preserves the function") {
  const MeshPtr coarse = std::make_shared<const Mesh1D>(uniform_mesh(-1.0, 1.0, 3));
  const MeshPtr fine = std::make_shared<const Mesh1D>(coarse->refine().refine());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd c(9);
  for (auto& v : c) v = d(rng);
  const BrokenFunction u(coarse, 2, c);
  const BrokenFunction v = u.embed(fine);
  for (double x = -0.99; x < 1.0; x += 0.0173) CHECK(evaluate(v, x) == doctest::Approx(evaluate(u, x)).epsilon(1e-13));
  CHECK_THROWS(v.embed(coarse));
}

TEST_CASE("continuous layout") {
  const MeshPtr m = std::make_shared<const Mesh1D>(uniform_mesh(0.0, 1.0, 3));
  const Eigen::VectorXd dofs = Eigen::VectorXd::LinSpaced(7, 0.0, 6.0);
  const BrokenFunction u = BrokenFunction::from_continuous(m, 2, dofs);
  CHECK(u.num_coefficients() == 9);
  CHECK(u.continuous_dofs() == dofs);
  CHECK(u.trace_from_left(1) == u.trace_from_right(1));
}

TEST_CASE("total variation and inverse estimate") {
  const BrokenFunction step = constants(mesh_of({0.0, 0.5, 1.0}), {1.0, 3.0});
  CHECK(total_variation(step) == 2.0);
  const ExponentField two = ExponentField::constant(2.0);
  const MeshPtr m = std::make_shared<const Mesh1D>(uniform_mesh(0.0, 1.0, 4));
  const BrokenFunction u = BrokenFunction::interpolate(m, 3, [](double x) { return std::exp(x) - 1.5; });
  CHECK(inverse_estimate_check(u, two, two).max_ratio <= 1.0 + 1e-12);
  // p = 1, q = 2, u = x on [0, h]: ||x||_1 / (h^{1 - 1/2} ||x||_2) = sqrt(3)/2
  const ExponentField one = ExponentField::constant(1.0);
  for (int j = 1; j <= 10; ++j) {
    const double h = std::ldexp(1.0, -j);
    const BrokenFunction x = BrokenFunction::interpolate(mesh_of({0.0, h}), 1, [](double t) { return t; });
    CHECK(inverse_estimate_check(x, one, two).max_ratio == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("CSV output") {
  std::ostringstream os;
  write_csv(os, constants(mesh_of({0.0, 0.5, 1.0}), {0.1, 3.0}));
  CHECK(os.str() == "element,local_node,x,value\n0,0,0.25,0.10000000000000001\n1,0,0.75,3\n");
}
