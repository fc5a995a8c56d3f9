#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pxdg/exponent.hpp"
#include "pxdg/mesh.hpp"

namespace pxdg {

/// Lagrange basis on [-1, 1] with Gauss-Lobatto nodes (endpoints included);
/// degree 0 is the constant with its node at the midpoint.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }

  double value(std::size_t i, double t) const;
  double derivative(std::size_t i, double t) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

/// Shared, lazily built basis of the given degree (0..16).
const LagrangeBasis& lagrange_basis(int degree);

enum class Continuity { broken, continuous };
enum class Side { left, right };

using MeshPtr = std::shared_ptr<const Mesh1D>;

/// Element-local polynomials of degree k: S^k, or the continuous subspace U^k.
///
/// Coefficients are nodal values at the element's Lagrange nodes, stored
/// element by element (k+1 per element). A continuous function keeps the same
/// layout with equal values on both sides of every interior node; its
/// independent DOFs are available through continuous_dofs().
class BrokenFunction {
 public:
  BrokenFunction(MeshPtr mesh, int degree, Eigen::VectorXd coefficients,
                 Continuity continuity = Continuity::broken);

  static BrokenFunction zero(MeshPtr mesh, int degree, Continuity continuity = Continuity::broken);
  static BrokenFunction interpolate(MeshPtr mesh, int degree, const std::function<double(double)>& f,
                                    Continuity continuity = Continuity::broken);
  /// Continuous function from its n*k+1 global nodal values (left to right).
  static BrokenFunction from_continuous(MeshPtr mesh, int degree, const Eigen::VectorXd& dofs);

  const Mesh1D& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  Continuity continuity() const { return continuity_; }
  std::size_t local_size() const { return static_cast<std::size_t>(degree_) + 1; }
  std::size_t num_coefficients() const { return static_cast<std::size_t>(coeffs_.size()); }

  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  std::span<const double> element_coefficients(std::size_t e) const;
  Eigen::VectorXd continuous_dofs() const;

  /// Physical position of local node j in element e.
  double node_position(std::size_t e, std::size_t j) const;

  double value_in_element(std::size_t e, double x) const;
  double derivative_in_element(std::size_t e, double x) const;

  /// Trace at node i from the element on its left / right.
  double trace_from_left(std::size_t node) const;
  double trace_from_right(std::size_t node) const;

  /// The same function on a refinement of this mesh.
  BrokenFunction embed(MeshPtr finer) const;

  BrokenFunction& operator+=(const BrokenFunction& other);
  BrokenFunction& operator*=(double factor);

 private:
  MeshPtr mesh_;
  int degree_;
  Eigen::VectorXd coeffs_;
  Continuity continuity_;
};

BrokenFunction operator+(BrokenFunction a, const BrokenFunction& b);
BrokenFunction operator-(BrokenFunction a, const BrokenFunction& b);
BrokenFunction operator*(double factor, BrokenFunction u);

bool same_mesh(const BrokenFunction& a, const BrokenFunction& b);

/// Value at x; at a node `side` picks the left or right element.
double evaluate(const BrokenFunction& u, double x, Side side = Side::right);

/// Element-wise derivative, degree k-1, no face contributions.
BrokenFunction elementwise_gradient(const BrokenFunction& u);

/// [u] = u^- - u^+ at interior node i (left trace minus right trace).
double jump(const BrokenFunction& u, std::size_t node);

struct FaceValues {
  std::vector<std::size_t> node;  // interior node indices
  std::vector<double> trace_left;
  std::vector<double> trace_right;
  std::vector<double> jump;
  std::vector<double> average;
  double boundary_left = 0.0;
  double boundary_right = 0.0;
};

FaceValues face_values(const BrokenFunction& u);

/// Composite Gauss samples of u over every element (points per element
/// default to degree+2, exact for polynomial integrands of degree 2k+2).
WeightedSampleSet volume_samples(const BrokenFunction& u, int points_per_element = 0,
                                 int panels_per_element = 1);
WeightedSampleSet volume_samples_on(const BrokenFunction& u, std::span<const std::size_t> elements,
                                    int points_per_element = 0);

/// Counting-measure samples [u](x_e) h(x_e)^{-1/p'(x_e)} over interior faces.
WeightedSampleSet scaled_jump_samples(const BrokenFunction& u, const ExponentField& p);

struct DirichletData {
  double left = 0.0;
  double right = 0.0;
};

/// |u|_{W^{1,p}(T_h)} = ||grad u||_p + ||h^{-1/p'} [u]||_{p, Gamma_int}; with
/// Dirichlet data the term ||h^{-1/p'} (u - u_D)||_{p, Gamma_D} is added.
double broken_seminorm(const BrokenFunction& u, const ExponentField& p,
                       const std::optional<DirichletData>& dirichlet = std::nullopt);

/// Local seminorm on the patch T_kappa: gradient norm over the patch plus
/// one face norm per interior face inside the patch.
double local_seminorm(const BrokenFunction& u, const ExponentField& p, std::size_t element);

/// |Du|(Omega) = int |grad u| + sum_e |[u](x_e)|.
double total_variation(const BrokenFunction& u);

struct InverseEstimateReport {
  double max_ratio = 0.0;
  std::size_t skipped = 0;  // elements where u vanishes
};

/// max over elements of ||u||_{p,K} / (h_K^{1/p_+ - 1/q_-} ||u||_{q,K}).
InverseEstimateReport inverse_estimate_check(const BrokenFunction& u, const ExponentField& p,
                                             const ExponentField& q);

/// CSV rows (element, local_node, x, value) with a header.
void write_csv(std::ostream& os, const BrokenFunction& u);

}  // namespace pxdg
