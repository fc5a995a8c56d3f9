#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "pxdg/broken_space.hpp"

namespace pxdg {

struct LiftingConfig {
  int degree = 1;  // l >= 0, degree of the image space S^l
};

/// Element-local form of the lifting R_h.
///
/// R_h(u) is defined by  int R_h(u) phi = - sum_e [u](x_e) {phi}(x_e)  for all
/// phi in S^l. Testing with phi supported on one element reduces this to a
/// local mass solve per element: with M the element mass matrix and psi the
/// local basis,
///   R_h(u)|_K = sum over interior end-points x_e of K of
///               -(1/2) [u](x_e) M^{-1} psi(x_e).
/// The two unit responses (one per element end) are cached, so applying the
/// operator is a linear combination of jumps.
class LiftingOperator {
 public:
  LiftingOperator(MeshPtr mesh, LiftingConfig cfg);

  const Mesh1D& mesh() const { return *mesh_; }
  int degree() const { return cfg_.degree; }

  /// Coefficients of R_h on element e per unit jump at its left / right end;
  /// zero when that end is on the boundary.
  const Eigen::VectorXd& left_response(std::size_t e) const { return left_[e]; }
  const Eigen::VectorXd& right_response(std::size_t e) const { return right_[e]; }

  BrokenFunction apply(const BrokenFunction& u) const;

 private:
  MeshPtr mesh_;
  LiftingConfig cfg_;
  std::vector<Eigen::VectorXd> left_;
  std::vector<Eigen::VectorXd> right_;
};

BrokenFunction lift(const BrokenFunction& u, LiftingConfig cfg = {});

/// max over local basis functions phi of |int R phi + sum_e [u]{phi}|.
double verify_weak_identity(const BrokenFunction& u, const BrokenFunction& lifted, LiftingConfig cfg = {});

/// ||R_h(u)||_p / ||h^{-1/p'} [u]||_{p, Gamma_int}; nullopt when every jump
/// vanishes.
std::optional<double> lifting_bound_ratio(const BrokenFunction& u, const ExponentField& p,
                                          LiftingConfig cfg = {});

}  // namespace pxdg
