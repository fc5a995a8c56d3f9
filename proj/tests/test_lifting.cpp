#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "pxdg/lifting.hpp"
#include "pxdg/properties.hpp"

using namespace pxdg;

namespace {

MeshPtr mesh_of(std::vector<double> nodes) { return std::make_shared<const Mesh1D>(std::move(nodes)); }

BrokenFunction step_on_two() {
  // 0 on [0, 1], 1 on [1, 2], degree 1
  return BrokenFunction(mesh_of({0.0, 1.0, 2.0}), 1, Eigen::Vector4d(0.0, 0.0, 1.0, 1.0));
}

}  // namespace

TEST_CASE("two-element example: R = 3x - 1 and 5 - 3x") {
  const BrokenFunction r = lift(step_on_two(), LiftingConfig{1});
  for (double x = 0.0; x <= 1.0; x += 0.125) CHECK(std::abs(evaluate(r, x, Side::left) - (3.0 * x - 1.0)) <= 1e-13);
  for (double x = 1.0; x <= 2.0; x += 0.125) CHECK(std::abs(evaluate(r, x, Side::right) - (5.0 - 3.0 * x)) <= 1e-13);
  CHECK(verify_weak_identity(step_on_two(), r, LiftingConfig{1}) <= 1e-13);
  // phi = 1 and phi = x against -[u]{phi} = {phi}
  const auto rx = [&](double x) { return evaluate(r, x, x < 1.0 ? Side::left : Side::right); };
  CHECK(oracle::adaptive_simpson(rx, 0.0, 1.0) + oracle::adaptive_simpson(rx, 1.0, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle::adaptive_simpson([&](double x) { return x * rx(x); }, 0.0, 1.0) +
            oracle::adaptive_simpson([&](double x) { return x * rx(x); }, 1.0, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-element example: bound ratio sqrt(2) for p = 2") {
  const ExponentField two = ExponentField::constant(2.0);
  const auto ratio = lifting_bound_ratio(step_on_two(), two, LiftingConfig{1});
  REQUIRE(ratio.has_value());
  CHECK(*ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const auto scaled = lifting_bound_ratio(7.5 * step_on_two(), two, LiftingConfig{1});
  CHECK(*scaled == doctest::Approx(*ratio).epsilon(1e-12));
}

TEST_CASE("degree-0 lifting closed form") {
  // R = -[v] / (2 h_K) on each element next to the face
  const BrokenFunction v(mesh_of({0.0, 0.4, 1.0}), 0, Eigen::Vector2d(0.0, 1.0));
  const BrokenFunction r = lift(v, LiftingConfig{0});
  CHECK(r.coefficients()[0] == doctest::Approx(1.0 / 0.8).epsilon(1e-14));
  CHECK(r.coefficients()[1] == doctest::Approx(1.0 / 1.2).epsilon(1e-14));
}

TEST_CASE("continuous functions lift to zero") {
  const MeshPtr m = std::make_shared<const Mesh1D>(uniform_mesh(-1.0, 1.0, 7));
  const BrokenFunction u =
      BrokenFunction::interpolate(m, 2, [](double x) { return std::exp(x); }, Continuity::continuous);
  for (int l = 0; l <= 3; ++l) {
    const BrokenFunction r = lift(u, LiftingConfig{l});
    CHECK(r.coefficients().cwiseAbs().maxCoeff() == 0.0);
    CHECK(verify_weak_identity(u, r, LiftingConfig{l}) == 0.0);
  }
  CHECK(!lifting_bound_ratio(u, ExponentField::constant(2.0)).has_value());
}

TEST_CASE("linearity and weak identity on random functions") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(0.2, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> nodes{0.0};
    for (int i = 0; i < 6; ++i) nodes.push_back(nodes.back() + len(rng));
    const MeshPtr m = mesh_of(nodes);
    const int k = 1 + trial % 3, l = trial % 4;
    const BrokenFunction u = random_broken(m, k, rng);
    const BrokenFunction r = lift(u, LiftingConfig{l});
    CHECK(verify_weak_identity(u, r, LiftingConfig{l}) <= 1e-12 * (1.0 + u.coefficients().lpNorm<Eigen::Infinity>()));
    const BrokenFunction r2 = lift(2.0 * u, LiftingConfig{l});
    CHECK((r2.coefficients() - 2.0 * r.coefficients()).cwiseAbs().maxCoeff() == 0.0);
    const BrokenFunction w = random_broken(m, k, rng);
    const BrokenFunction sum = lift(u + w, LiftingConfig{l});
    CHECK((sum.coefficients() - r.coefficients() - lift(w, LiftingConfig{l}).coefficients()).norm() <=
          1e-12 * (1.0 + sum.coefficients().norm()));
  }
}

TEST_CASE("bound ratio is stable under refinement") {
  const ExponentField p = ExponentField::hat(0.2, 0.5);
  const std::vector<double> sweep = lifting_ratio_sweep(3, 6, 20, p);
  CHECK(spread(sweep) <= 2.0);
  const std::vector<double> broken = lifting_ratio_sweep(3, 6, 20, p, LiftingConfig{1}, FaceSizeRule::squared_debug);
  CHECK(spread(broken) > 2.0);
}
