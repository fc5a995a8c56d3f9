#include "pxdg/functional.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pxdg {

void FunctionalSpec::validate(const Mesh1D& mesh) const {
  for (double x : {mesh.left(), mesh.right()}) {
    if (!p.contains(x)) throw std::invalid_argument("exponent p is not defined on the whole mesh");
  }
  if (!(p.lower() > 1.0)) throw std::invalid_argument("the energy needs p > 1 everywhere");
  if (fidelity_on) {
    if (!xi) throw std::invalid_argument("fidelity term enabled without data");
    if (!(q.lower() > 1.0)) throw std::invalid_argument("the fidelity exponent must satisfy q > 1");
  }
  const bool has_neumann = !mesh.dirichlet().left || !mesh.dirichlet().right;
  if (has_neumann && !(r.lower() > 1.0))
    throw std::invalid_argument("the Neumann exponent must satisfy r > 1");
}

void write_csv_header(std::ostream& os, const TermBreakdown&) {
  os << "grad_term,fidelity,dir_penalty,int_penalty,neumann,total\n";
}

void write_csv_row(std::ostream& os, const TermBreakdown& t) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t.gradient_term, t.fidelity_term,
                t.dirichlet_penalty, t.interior_penalty, t.neumann_term, t.total);
  os << buf;
}

namespace {

// |t|^s (divided by s when normalized) and its derivative in t
struct PowerTerm {
  double value;
  double slope;
};

PowerTerm power_term(double t, double s, bool normalize) {
  const double scale = normalize ? 1.0 / s : 1.0;
  if (t == 0.0) return {0.0, 0.0};
  const double a = std::abs(t);
  const double m = std::pow(a, s - 1.0);
  return {scale * m * a, scale * s * (t > 0.0 ? m : -m)};
}

}  // namespace

DiscreteFunctional::DiscreteFunctional(FunctionalSpec spec, MeshPtr mesh, int degree, FunctionalForm form)
    : spec_(std::move(spec)), mesh_(std::move(mesh)), degree_(degree), form_(form) {
  if (degree_ < 1) throw std::invalid_argument("the energy needs polynomial degree k >= 1");
  spec_.validate(*mesh_);
  local_ = static_cast<std::size_t>(degree_) + 1;

  const LagrangeBasis& basis = lagrange_basis(degree_);
  const LiftingOperator lifting(mesh_, spec_.lifting);
  const LagrangeBasis& lift_basis = lagrange_basis(spec_.lifting.degree);

  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto [a, b] = mesh_->element(e);
    const QuadratureRule rule = spec_.quadrature.on(a, b);
    const Eigen::VectorXd& left = lifting.left_response(e);
    const Eigen::VectorXd& right = lifting.right_response(e);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double x = rule.points[i];
      const double t = (2.0 * x - a - b) / (b - a);
      Point pt{};
      pt.element = e;
      pt.x = x;
      pt.weight = rule.weights[i];
      pt.p = spec_.p(x);
      pt.q = spec_.fidelity_on ? spec_.q(x) : 2.0;
      pt.xi = spec_.fidelity_on ? spec_.xi(x) : 0.0;
      for (std::size_t j = 0; j < lift_basis.size(); ++j) {
        const double psi = lift_basis.value(j, t);
        pt.lift_left += left[static_cast<Eigen::Index>(j)] * psi;
        pt.lift_right += right[static_cast<Eigen::Index>(j)] * psi;
      }
      points_.push_back(pt);
      for (std::size_t j = 0; j < local_; ++j) {
        phi_.push_back(basis.value(j, t));
        dphi_.push_back(basis.derivative(j, t) * 2.0 / (b - a));
      }
    }
  }
}

double DiscreteFunctional::gradient_at(const Eigen::VectorXd& c, std::size_t qp) const {
  const std::size_t base = points_[qp].element * local_;
  const double* d = &dphi_[qp * local_];
  double g = 0.0;
  for (std::size_t j = 0; j < local_; ++j) g += c[static_cast<Eigen::Index>(base + j)] * d[j];
  return g;
}

double DiscreteFunctional::value_at(const Eigen::VectorXd& c, std::size_t qp) const {
  const std::size_t base = points_[qp].element * local_;
  const double* f = &phi_[qp * local_];
  double v = 0.0;
  for (std::size_t j = 0; j < local_; ++j) v += c[static_cast<Eigen::Index>(base + j)] * f[j];
  return v;
}

// jump at the left end of element e (node e); 0 on the boundary
double DiscreteFunctional::left_jump(const Eigen::VectorXd& c, std::size_t e) const {
  if (e == 0) return 0.0;
  return c[static_cast<Eigen::Index>(e * local_ - 1)] - c[static_cast<Eigen::Index>(e * local_)];
}

double DiscreteFunctional::right_jump(const Eigen::VectorXd& c, std::size_t e) const {
  if (e + 1 == mesh_->num_elements()) return 0.0;
  return c[static_cast<Eigen::Index>((e + 1) * local_ - 1)] - c[static_cast<Eigen::Index>((e + 1) * local_)];
}

TermBreakdown DiscreteFunctional::evaluate(const Eigen::VectorXd& c, Eigen::VectorXd* gradient) const {
  if (static_cast<std::size_t>(c.size()) != num_coefficients())
    throw std::invalid_argument("coefficient vector does not match the functional's space");
  const bool norm = spec_.normalize_by_exponent;
  const bool discontinuous = form_ == FunctionalForm::discontinuous;
  if (gradient) gradient->setZero(c.size());
  auto add = [gradient](std::size_t i, double v) {
    if (gradient) (*gradient)[static_cast<Eigen::Index>(i)] += v;
  };
  // d(jump at node i)/dc: +1 on the left trace, -1 on the right trace
  auto add_jump = [&](std::size_t node, double v) {
    add(node * local_ - 1, v);
    add(node * local_, -v);
  };

  TermBreakdown t;
  for (std::size_t qp = 0; qp < points_.size(); ++qp) {
    const Point& pt = points_[qp];
    const std::size_t e = pt.element;
    const std::size_t base = e * local_;
    double g = gradient_at(c, qp);
    double jl = 0.0, jr = 0.0;
    if (discontinuous) {
      jl = left_jump(c, e);
      jr = right_jump(c, e);
      g += pt.lift_left * jl + pt.lift_right * jr;
    }
    const PowerTerm grad_term = power_term(g, pt.p, norm);
    t.gradient_term += pt.weight * grad_term.value;
    if (gradient && grad_term.slope != 0.0) {
      const double s = pt.weight * grad_term.slope;
      const double* d = &dphi_[qp * local_];
      for (std::size_t j = 0; j < local_; ++j) add(base + j, s * d[j]);
      if (discontinuous) {
        if (e > 0) add_jump(e, s * pt.lift_left);
        if (e + 1 < mesh_->num_elements()) add_jump(e + 1, s * pt.lift_right);
      }
    }
    if (spec_.fidelity_on) {
      const PowerTerm fid = power_term(value_at(c, qp) - pt.xi, pt.q, norm);
      t.fidelity_term += pt.weight * fid.value;
      if (gradient && fid.slope != 0.0) {
        const double s = pt.weight * fid.slope;
        const double* f = &phi_[qp * local_];
        for (std::size_t j = 0; j < local_; ++j) add(base + j, s * f[j]);
      }
    }
  }

  const Mesh1D& mesh = *mesh_;
  const std::size_t last_node = mesh.num_nodes() - 1;
  const std::size_t last_coeff = num_coefficients() - 1;
  struct End {
    std::size_t node, coeff;
    bool dirichlet;
    double data;
  };
  const End ends[2] = {{0, 0, mesh.dirichlet().left, spec_.u_D.left},
                       {last_node, last_coeff, mesh.dirichlet().right, spec_.u_D.right}};
  for (const End& end : ends) {
    const double x = mesh.node(end.node);
    const double v = c[static_cast<Eigen::Index>(end.coeff)];
    if (end.dirichlet) {
      if (!discontinuous) continue;
      const double p = spec_.p(x);
      const double hw = std::pow(mesh.face_size(end.node), 1.0 - p);
      const PowerTerm pen = power_term(v - end.data, p, norm);
      t.dirichlet_penalty += hw * pen.value;
      add(end.coeff, hw * pen.slope);
    } else {
      const PowerTerm neu = power_term(v, spec_.r(x), norm);
      t.neumann_term += neu.value;
      add(end.coeff, neu.slope);
    }
  }

  if (discontinuous) {
    for (std::size_t i = 1; i < last_node; ++i) {
      const double x = mesh.node(i);
      const double p = spec_.p(x);
      const double hw = std::pow(mesh.face_size(i), 1.0 - p);
      const double j = c[static_cast<Eigen::Index>(i * local_ - 1)] - c[static_cast<Eigen::Index>(i * local_)];
      const PowerTerm pen = power_term(j, p, norm);
      t.interior_penalty += hw * pen.value;
      if (pen.slope != 0.0) add_jump(i, hw * pen.slope);
    }
  }

  t.total = t.gradient_term + t.fidelity_term + t.dirichlet_penalty + t.interior_penalty + t.neumann_term;
  return t;
}

DiscreteFunctional::Coercivity DiscreteFunctional::coercivity(const Eigen::VectorXd& c) const {
  const bool norm = spec_.normalize_by_exponent;
  const TermBreakdown t = evaluate(c);
  Coercivity out;
  const double factor = std::pow(2.0, 1.0 - spec_.p.upper());
  for (std::size_t qp = 0; qp < points_.size(); ++qp) {
    const Point& pt = points_[qp];
    const double g = gradient_at(c, qp);
    double r = 0.0;
    if (form_ == FunctionalForm::discontinuous) {
      r = pt.lift_left * left_jump(c, pt.element) + pt.lift_right * right_jump(c, pt.element);
    }
    out.plain_gradient += pt.weight * power_term(g, pt.p, norm).value;
    out.lifting += pt.weight * power_term(r, pt.p, norm).value;
  }
  out.lhs = factor * out.plain_gradient + t.dirichlet_penalty + t.interior_penalty;
  out.rhs = t.total + out.lifting;
  return out;
}

namespace {

void check_space(const BrokenFunction& v) {
  if (v.degree() < 1) throw std::invalid_argument("the energy needs polynomial degree k >= 1");
}

}  // namespace

TermBreakdown eval_discrete(const BrokenFunction& v, const FunctionalSpec& spec) {
  check_space(v);
  return DiscreteFunctional(spec, v.mesh_ptr(), v.degree()).evaluate(v.coefficients());
}

Eigen::VectorXd grad_discrete(const BrokenFunction& v, const FunctionalSpec& spec) {
  check_space(v);
  Eigen::VectorXd g;
  DiscreteFunctional(spec, v.mesh_ptr(), v.degree()).evaluate(v.coefficients(), &g);
  return g;
}

TermBreakdown eval_continuous(const BrokenFunction& v, const FunctionalSpec& spec) {
  check_space(v);
  for (std::size_t i = 1; i + 1 < v.mesh().num_nodes(); ++i) {
    if (jump(v, i) != 0.0) throw std::invalid_argument("eval_continuous: function has a jump");
  }
  return DiscreteFunctional(spec, v.mesh_ptr(), v.degree(), FunctionalForm::continuous).evaluate(v.coefficients());
}

}  // namespace pxdg
