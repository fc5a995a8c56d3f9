#include <doctest.h>

#include <cmath>

#include "pxdg/mesh.hpp"

using namespace pxdg;

TEST_CASE("uniform mesh on four elements") {
  const Mesh1D m = uniform_mesh(-1.0, 1.0, 4);
  CHECK(m.nodes() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  for (std::size_t e = 0; e < 4; ++e) CHECK(m.element_size(e) == 0.5);
  CHECK(m.num_interior_faces() == 3);
  CHECK(!m.is_interior_node(0));
  CHECK(m.is_interior_node(1));
  CHECK(m.is_interior_node(3));
  CHECK(!m.is_interior_node(4));
  for (std::size_t i = 0; i < 5; ++i) CHECK(m.face_size(i) == 0.5);
}

TEST_CASE("uniform mesh with 41 elements") {
  const Mesh1D m = uniform_mesh(-1.0, 1.0, 41);
  CHECK(m.num_elements() == 41);
  CHECK(m.left() == -1.0);
  CHECK(m.right() == 1.0);
  CHECK(m.max_element_size() == doctest::Approx(2.0 / 41).epsilon(1e-14));
}

TEST_CASE("boundary tagging") {
  const Mesh1D m = uniform_mesh(0.0, 1.0, 2, DirichletSides::left_only());
  CHECK(m.left_kind() == BoundaryKind::dirichlet);
  CHECK(m.right_kind() == BoundaryKind::neumann);
  CHECK_THROWS(uniform_mesh(0.0, 1.0, 0));
  CHECK_THROWS(Mesh1D({0.0, 0.5, 0.5, 1.0}));
}

TEST_CASE("face size is the mean of the adjacent element lengths") {
  const Mesh1D m({0.0, 0.2, 0.5, 1.0});
  CHECK(m.face_size(0) == doctest::Approx(0.2));
  CHECK(m.face_size(1) == doctest::Approx(0.25));
  CHECK(m.face_size(2) == doctest::Approx(0.4));
  CHECK(m.face_size(3) == doctest::Approx(0.5));
  const Mesh1D debug({0.0, 0.2, 0.5, 1.0}, DirichletSides::both(), FaceSizeRule::squared_debug);
  CHECK(debug.face_size(1) == doctest::Approx(0.0625));
}

TEST_CASE("refinement") {
  CHECK(uniform_mesh(-1.0, 1.0, 4).refine().nodes() == uniform_mesh(-1.0, 1.0, 8).nodes());
  const Mesh1D r = Mesh1D({0.0, 0.3, 1.0}).refine();
  REQUIRE(r.num_nodes() == 5);
  const std::vector<double> expected{0.0, 0.15, 0.3, 0.65, 1.0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(r.node(i) == doctest::Approx(expected[i]).epsilon(1e-15));
  CHECK(uniform_mesh(0.0, 1.0, 10).refine().refine().num_elements() == 40);
  const Mesh1D tagged = uniform_mesh(0.0, 1.0, 3, DirichletSides::right_only());
  CHECK(tagged.refine().dirichlet().right);
  CHECK(!tagged.refine().dirichlet().left);
}

TEST_CASE("neighborhoods on four elements") {
  const Neighborhoods nb = face_neighborhoods(uniform_mesh(-1.0, 1.0, 4));
  CHECK(nb.node_patch[2] == std::vector<std::size_t>{1, 2});
  CHECK(nb.node_patch[0] == std::vector<std::size_t>{0});
  CHECK(nb.element_patch[2] == std::vector<std::size_t>{1, 2, 3});
  CHECK(nb.element_patch[0] == std::vector<std::size_t>{0, 1});
  CHECK(nb.face_patch[2] == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(nb.face_patch[0] == std::vector<std::size_t>{0, 1});
}

TEST_CASE("locate and text form") {
  const Mesh1D m = uniform_mesh(-1.0, 1.0, 4);
  CHECK(m.locate(-1.0) == 0);
  CHECK(m.locate(0.0) == 2);
  CHECK(m.locate(1.0) == 3);
  CHECK_THROWS(m.locate(1.5));
  const Mesh1D tagged({0.0, 0.3, 1.0}, DirichletSides::left_only());
  CHECK(Mesh1D::parse(tagged.to_string()) == tagged);
}
