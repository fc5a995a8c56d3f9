#include "pxdg/lifting.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "pxdg/quadrature.hpp"

namespace pxdg {

LiftingOperator::LiftingOperator(MeshPtr mesh, LiftingConfig cfg) : mesh_(std::move(mesh)), cfg_(cfg) {
  if (cfg_.degree < 0) throw std::invalid_argument("lifting degree must be >= 0");
  const LagrangeBasis& basis = lagrange_basis(cfg_.degree);
  const auto m = static_cast<Eigen::Index>(basis.size());
  const QuadratureRule rule = gauss_legendre(cfg_.degree + 1);

  Eigen::MatrixXd reference_mass = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        reference_mass(i, j) += rule.weights[q] * basis.value(static_cast<std::size_t>(i), rule.points[q]) *
                                basis.value(static_cast<std::size_t>(j), rule.points[q]);
      }
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> factor(reference_mass);
  assert(factor.info() == Eigen::Success);

  Eigen::VectorXd at_left(m), at_right(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    at_left[j] = basis.value(static_cast<std::size_t>(j), -1.0);
    at_right[j] = basis.value(static_cast<std::size_t>(j), 1.0);
  }
  // M_K = (h/2) M_ref, right-hand side -(1/2) psi(x_e) per unit jump
  const Eigen::VectorXd unit_left = factor.solve(-0.5 * at_left);
  const Eigen::VectorXd unit_right = factor.solve(-0.5 * at_right);

  const std::size_t ne = mesh_->num_elements();
  left_.resize(ne);
  right_.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const double scale = 2.0 / mesh_->element_size(e);
    left_[e] = mesh_->is_interior_node(e) ? Eigen::VectorXd(scale * unit_left) : Eigen::VectorXd::Zero(m);
    right_[e] = mesh_->is_interior_node(e + 1) ? Eigen::VectorXd(scale * unit_right) : Eigen::VectorXd::Zero(m);
  }
}

BrokenFunction LiftingOperator::apply(const BrokenFunction& u) const {
  if (!(u.mesh() == *mesh_)) throw std::invalid_argument("lifting: mesh mismatch");
  const std::size_t ne = mesh_->num_elements();
  const auto m = static_cast<Eigen::Index>(cfg_.degree + 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ne) * m);
  for (std::size_t e = 0; e < ne; ++e) {
    auto block = c.segment(static_cast<Eigen::Index>(e) * m, m);
    if (mesh_->is_interior_node(e)) block += jump(u, e) * left_[e];
    if (mesh_->is_interior_node(e + 1)) block += jump(u, e + 1) * right_[e];
  }
  return BrokenFunction(u.mesh_ptr(), cfg_.degree, std::move(c));
}

BrokenFunction lift(const BrokenFunction& u, LiftingConfig cfg) {
  if (u.mesh().num_interior_faces() == 0) throw std::invalid_argument("lifting needs an interior face");
  return LiftingOperator(u.mesh_ptr(), cfg).apply(u);
}

double verify_weak_identity(const BrokenFunction& u, const BrokenFunction& lifted, LiftingConfig cfg) {
  if (lifted.degree() != cfg.degree) throw std::invalid_argument("lifted function has the wrong degree");
  const Mesh1D& mesh = u.mesh();
  const LagrangeBasis& basis = lagrange_basis(cfg.degree);
  const QuadratureRule reference = gauss_legendre(cfg.degree + 1);
  double worst = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto [a, b] = mesh.element(e);
    const QuadratureRule rule = map_rule(reference, a, b);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double residual = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        residual += rule.weights[q] * lifted.value_in_element(e, rule.points[q]) *
                    basis.value(j, reference.points[q]);
      }
      // {phi} = phi/2 on the face: phi lives on one element only
      if (mesh.is_interior_node(e)) residual += jump(u, e) * 0.5 * basis.value(j, -1.0);
      if (mesh.is_interior_node(e + 1)) residual += jump(u, e + 1) * 0.5 * basis.value(j, 1.0);
      worst = std::max(worst, std::abs(residual));
    }
  }
  return worst;
}

std::optional<double> lifting_bound_ratio(const BrokenFunction& u, const ExponentField& p, LiftingConfig cfg) {
  const double denominator = luxemburg_norm(scaled_jump_samples(u, p), p);
  if (denominator == 0.0) return std::nullopt;
  const BrokenFunction r = lift(u, cfg);
  const double numerator = luxemburg_norm(volume_samples(r, cfg.degree + 2), p);
  return numerator / denominator;
}

}  // namespace pxdg
