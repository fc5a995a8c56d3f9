#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <vector>

#include "pxdg/broken_space.hpp"
#include "pxdg/exponent.hpp"
#include "pxdg/lifting.hpp"
#include "pxdg/quadrature.hpp"

namespace pxdg {

/// Everything that defines the energy being minimized.
struct FunctionalSpec {
  ExponentField p = ExponentField::constant(2.0);
  ExponentField q = ExponentField::constant(2.0);  // fidelity exponent
  ExponentField r = ExponentField::constant(2.0);  // Neumann boundary exponent
  std::function<double(double)> xi;                // data for the fidelity term
  bool fidelity_on = false;
  DirichletData u_D;
  QuadratureSpec quadrature = QuadratureSpec::trapezoid(1);
  LiftingConfig lifting{1};
  /// Divide every integrand by its own exponent (|.|^p / p).
  bool normalize_by_exponent = false;

  /// Throws std::invalid_argument when an exponent reaches 1 where the
  /// energy must be differentiable, or when the data is incomplete.
  void validate(const Mesh1D& mesh) const;
};

struct TermBreakdown {
  double gradient_term = 0.0;
  double fidelity_term = 0.0;
  double dirichlet_penalty = 0.0;
  double interior_penalty = 0.0;
  double neumann_term = 0.0;
  double total = 0.0;
};

/// CSV row: grad_term,fidelity,dir_penalty,int_penalty,neumann,total
void write_csv_header(std::ostream& os, const TermBreakdown&);
void write_csv_row(std::ostream& os, const TermBreakdown& t);

enum class FunctionalForm {
  discontinuous,  // I_h: lifted gradient plus Dirichlet and interior penalties
  continuous      // I: plain gradient, Dirichlet data imposed by the caller
};

/// Quadrature-discretized energy over the broken coefficient vector of a
/// degree-k space, with its exact gradient.
///
/// All element tables (basis values and derivatives, lifting responses,
/// exponents and data at quadrature points) are built once; evaluation is a
/// single pass over quadrature points and faces.
class DiscreteFunctional {
 public:
  DiscreteFunctional(FunctionalSpec spec, MeshPtr mesh, int degree,
                     FunctionalForm form = FunctionalForm::discontinuous);

  const FunctionalSpec& spec() const { return spec_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  FunctionalForm form() const { return form_; }
  std::size_t num_coefficients() const { return mesh_->num_elements() * local_; }

  /// Terms at the given coefficients; fills `gradient` (same layout) if given.
  TermBreakdown evaluate(const Eigen::VectorXd& coeffs, Eigen::VectorXd* gradient = nullptr) const;

  /// Pieces of the coercivity chain at v:
  ///   2^{1-p2} int |grad v|^p + penalties  <=  I_h(v) + int |R_h v|^p
  struct Coercivity {
    double lhs = 0.0;
    double rhs = 0.0;
    double plain_gradient = 0.0;  // int |grad v|^p
    double lifting = 0.0;         // int |R_h v|^p
  };
  Coercivity coercivity(const Eigen::VectorXd& coeffs) const;

 private:
  struct Point {
    std::size_t element;
    double x, weight, p, q, xi;
    double lift_left, lift_right;  // R_h at x per unit jump at the element ends
  };

  double gradient_at(const Eigen::VectorXd& c, std::size_t qp) const;
  double value_at(const Eigen::VectorXd& c, std::size_t qp) const;
  double left_jump(const Eigen::VectorXd& c, std::size_t e) const;
  double right_jump(const Eigen::VectorXd& c, std::size_t e) const;

  FunctionalSpec spec_;
  MeshPtr mesh_;
  int degree_;
  std::size_t local_;
  FunctionalForm form_;
  std::vector<Point> points_;
  std::vector<double> phi_;   // points x local
  std::vector<double> dphi_;  // physical derivatives, points x local
};

/// I_h(v) term by term.
TermBreakdown eval_discrete(const BrokenFunction& v, const FunctionalSpec& spec);

/// Gradient of I_h with respect to the broken coefficients of v.
Eigen::VectorXd grad_discrete(const BrokenFunction& v, const FunctionalSpec& spec);

/// I(v) for a continuous v (no lifting, no penalties).
TermBreakdown eval_continuous(const BrokenFunction& v, const FunctionalSpec& spec);

}  // namespace pxdg
