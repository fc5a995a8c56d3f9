#include "pxdg/broken_space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "pxdg/quadrature.hpp"

namespace pxdg {

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("basis degree must be >= 0");
  if (degree == 0) nodes_ = {0.0};
  else nodes_ = gauss_lobatto(degree + 1).points;
  denominators_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double d = 1.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (j != i) d *= nodes_[i] - nodes_[j];
    }
    denominators_[i] = d;
  }
}

double LagrangeBasis::value(std::size_t i, double t) const {
  double v = 1.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (j != i) v *= t - nodes_[j];
  }
  return v / denominators_[i];
}

double LagrangeBasis::derivative(std::size_t i, double t) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < nodes_.size(); ++m) {
    if (m == i) continue;
    double prod = 1.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (j != i && j != m) prod *= t - nodes_[j];
    }
    sum += prod;
  }
  return sum / denominators_[i];
}

const LagrangeBasis& lagrange_basis(int degree) {
  constexpr int max_degree = 16;
  if (degree < 0 || degree > max_degree) throw std::invalid_argument("unsupported basis degree");
  static std::array<std::unique_ptr<LagrangeBasis>, max_degree + 1> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(degree)];
  if (!slot) slot = std::make_unique<LagrangeBasis>(degree);
  return *slot;
}

namespace {

double to_reference(const Mesh1D& mesh, std::size_t e, double x) {
  const auto [a, b] = mesh.element(e);
  return (2.0 * x - a - b) / (b - a);
}

}  // namespace

BrokenFunction::BrokenFunction(MeshPtr mesh, int degree, Eigen::VectorXd coefficients,
                               Continuity continuity)
    : mesh_(std::move(mesh)), degree_(degree), coeffs_(std::move(coefficients)), continuity_(continuity) {
  if (!mesh_) throw std::invalid_argument("BrokenFunction needs a mesh");
  if (degree_ < 0) throw std::invalid_argument("BrokenFunction degree must be >= 0");
  const auto expected = static_cast<Eigen::Index>(mesh_->num_elements() * local_size());
  if (coeffs_.size() != expected) throw std::invalid_argument("coefficient count does not match mesh and degree");
  if (continuity_ == Continuity::continuous) {
    if (degree_ < 1) throw std::invalid_argument("continuous functions need degree >= 1");
    for (std::size_t i = 1; i + 1 < mesh_->num_nodes(); ++i) {
      if (trace_from_left(i) != trace_from_right(i))
        throw std::invalid_argument("continuous function has a nonzero jump");
    }
  }
}

BrokenFunction BrokenFunction::zero(MeshPtr mesh, int degree, Continuity continuity) {
  const auto n = static_cast<Eigen::Index>(mesh->num_elements() * (static_cast<std::size_t>(degree) + 1));
  return BrokenFunction(std::move(mesh), degree, Eigen::VectorXd::Zero(n), continuity);
}

BrokenFunction BrokenFunction::interpolate(MeshPtr mesh, int degree,
                                           const std::function<double(double)>& f,
                                           Continuity continuity) {
  const LagrangeBasis& basis = lagrange_basis(degree);
  const std::size_t m = basis.size();
  Eigen::VectorXd c(static_cast<Eigen::Index>(mesh->num_elements() * m));
  for (std::size_t e = 0; e < mesh->num_elements(); ++e) {
    const auto [a, b] = mesh->element(e);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = basis.nodes()[j];
      double x = 0.5 * (a + b) + 0.5 * (b - a) * t;
      if (degree > 0 && j == 0) x = a;
      if (degree > 0 && j + 1 == m) x = b;
      c[static_cast<Eigen::Index>(e * m + j)] = f(x);
    }
  }
  return BrokenFunction(std::move(mesh), degree, std::move(c), continuity);
}

BrokenFunction BrokenFunction::from_continuous(MeshPtr mesh, int degree, const Eigen::VectorXd& dofs) {
  if (degree < 1) throw std::invalid_argument("continuous functions need degree >= 1");
  const std::size_t ne = mesh->num_elements();
  const auto k = static_cast<std::size_t>(degree);
  if (static_cast<std::size_t>(dofs.size()) != ne * k + 1)
    throw std::invalid_argument("continuous DOF count must be n*k+1");
  Eigen::VectorXd c(static_cast<Eigen::Index>(ne * (k + 1)));
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t j = 0; j <= k; ++j) {
      c[static_cast<Eigen::Index>(e * (k + 1) + j)] = dofs[static_cast<Eigen::Index>(e * k + j)];
    }
  }
  return BrokenFunction(std::move(mesh), degree, std::move(c), Continuity::continuous);
}

std::span<const double> BrokenFunction::element_coefficients(std::size_t e) const {
  return {coeffs_.data() + e * local_size(), local_size()};
}

Eigen::VectorXd BrokenFunction::continuous_dofs() const {
  if (continuity_ != Continuity::continuous) throw std::logic_error("function is not continuous");
  const std::size_t ne = mesh_->num_elements();
  const auto k = static_cast<std::size_t>(degree_);
  Eigen::VectorXd dofs(static_cast<Eigen::Index>(ne * k + 1));
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t j = 0; j <= k; ++j) {
      dofs[static_cast<Eigen::Index>(e * k + j)] = coeffs_[static_cast<Eigen::Index>(e * (k + 1) + j)];
    }
  }
  return dofs;
}

double BrokenFunction::node_position(std::size_t e, std::size_t j) const {
  const auto [a, b] = mesh_->element(e);
  if (degree_ > 0 && j == 0) return a;
  if (degree_ > 0 && j == static_cast<std::size_t>(degree_)) return b;
  return 0.5 * (a + b) + 0.5 * (b - a) * lagrange_basis(degree_).nodes()[j];
}

double BrokenFunction::value_in_element(std::size_t e, double x) const {
  const LagrangeBasis& basis = lagrange_basis(degree_);
  const double t = to_reference(*mesh_, e, x);
  const auto c = element_coefficients(e);
  double v = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) v += c[j] * basis.value(j, t);
  return v;
}

double BrokenFunction::derivative_in_element(std::size_t e, double x) const {
  const LagrangeBasis& basis = lagrange_basis(degree_);
  const double t = to_reference(*mesh_, e, x);
  const auto c = element_coefficients(e);
  double v = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) v += c[j] * basis.derivative(j, t);
  return v * 2.0 / mesh_->element_size(e);
}

double BrokenFunction::trace_from_left(std::size_t node) const {
  if (node == 0) throw std::invalid_argument("no element to the left of the first node");
  const std::size_t e = node - 1;
  if (degree_ == 0) return coeffs_[static_cast<Eigen::Index>(e)];
  return coeffs_[static_cast<Eigen::Index>(e * local_size() + local_size() - 1)];
}

double BrokenFunction::trace_from_right(std::size_t node) const {
  if (node + 1 >= mesh_->num_nodes()) throw std::invalid_argument("no element to the right of the last node");
  if (degree_ == 0) return coeffs_[static_cast<Eigen::Index>(node)];
  return coeffs_[static_cast<Eigen::Index>(node * local_size())];
}

BrokenFunction BrokenFunction::embed(MeshPtr finer) const {
  const LagrangeBasis& basis = lagrange_basis(degree_);
  const std::size_t m = basis.size();
  Eigen::VectorXd c(static_cast<Eigen::Index>(finer->num_elements() * m));
  for (std::size_t e = 0; e < finer->num_elements(); ++e) {
    const auto [a, b] = finer->element(e);
    const std::size_t parent = mesh_->locate(0.5 * (a + b));
    const auto [pa, pb] = mesh_->element(parent);
    if (a < pa - 1e-14 * (pb - pa) || b > pb + 1e-14 * (pb - pa))
      throw std::invalid_argument("embed: target mesh is not a refinement");
    for (std::size_t j = 0; j < m; ++j) {
      double x = 0.5 * (a + b) + 0.5 * (b - a) * basis.nodes()[j];
      if (degree_ > 0 && j == 0) x = a;
      if (degree_ > 0 && j + 1 == m) x = b;
      c[static_cast<Eigen::Index>(e * m + j)] = value_in_element(parent, x);
    }
  }
  BrokenFunction out(std::move(finer), degree_, std::move(c), Continuity::broken);
  if (continuity_ == Continuity::continuous) {
    // fine nodes inside a parent element are evaluated twice from the same
    // polynomial; snap both sides to one value so the flag stays exact
    for (std::size_t i = 1; i + 1 < out.mesh().num_nodes(); ++i) {
      const double v = out.coeffs_[static_cast<Eigen::Index>((i - 1) * m + m - 1)];
      out.coeffs_[static_cast<Eigen::Index>(i * m)] = v;
    }
    out.continuity_ = Continuity::continuous;
  }
  return out;
}

BrokenFunction& BrokenFunction::operator+=(const BrokenFunction& other) {
  if (!same_mesh(*this, other) || degree_ != other.degree_)
    throw std::invalid_argument("adding functions from different spaces");
  coeffs_ += other.coeffs_;
  if (other.continuity_ == Continuity::broken) continuity_ = Continuity::broken;
  return *this;
}

BrokenFunction& BrokenFunction::operator*=(double factor) {
  coeffs_ *= factor;
  return *this;
}

BrokenFunction operator+(BrokenFunction a, const BrokenFunction& b) {
  a += b;
  return a;
}

BrokenFunction operator-(BrokenFunction a, const BrokenFunction& b) {
  a += -1.0 * b;
  return a;
}

BrokenFunction operator*(double factor, BrokenFunction u) {
  u *= factor;
  return u;
}

bool same_mesh(const BrokenFunction& a, const BrokenFunction& b) {
  return a.mesh_ptr() == b.mesh_ptr() || a.mesh() == b.mesh();
}

double evaluate(const BrokenFunction& u, double x, Side side) {
  const Mesh1D& mesh = u.mesh();
  if (!mesh.contains(x)) throw std::domain_error("evaluate: point outside the domain");
  std::size_t e = mesh.locate(x);
  if (side == Side::left && e > 0 && x == mesh.node(e)) --e;
  return u.value_in_element(e, x);
}

BrokenFunction elementwise_gradient(const BrokenFunction& u) {
  const int k = u.degree();
  if (k == 0) return BrokenFunction::zero(u.mesh_ptr(), 0);
  const LagrangeBasis& target = lagrange_basis(k - 1);
  const std::size_t m = target.size();
  Eigen::VectorXd c(static_cast<Eigen::Index>(u.mesh().num_elements() * m));
  for (std::size_t e = 0; e < u.mesh().num_elements(); ++e) {
    const auto [a, b] = u.mesh().element(e);
    for (std::size_t j = 0; j < m; ++j) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * target.nodes()[j];
      c[static_cast<Eigen::Index>(e * m + j)] = u.derivative_in_element(e, x);
    }
  }
  return BrokenFunction(u.mesh_ptr(), k - 1, std::move(c));
}

double jump(const BrokenFunction& u, std::size_t node) {
  if (!u.mesh().is_interior_node(node)) throw std::invalid_argument("jump: face is not interior");
  return u.trace_from_left(node) - u.trace_from_right(node);
}

FaceValues face_values(const BrokenFunction& u) {
  FaceValues fv;
  const Mesh1D& mesh = u.mesh();
  for (std::size_t i = 1; i + 1 < mesh.num_nodes(); ++i) {
    const double l = u.trace_from_left(i);
    const double r = u.trace_from_right(i);
    fv.node.push_back(i);
    fv.trace_left.push_back(l);
    fv.trace_right.push_back(r);
    fv.jump.push_back(l - r);
    fv.average.push_back(0.5 * (l + r));
  }
  fv.boundary_left = u.trace_from_right(0);
  fv.boundary_right = u.trace_from_left(mesh.num_nodes() - 1);
  return fv;
}

WeightedSampleSet volume_samples_on(const BrokenFunction& u, std::span<const std::size_t> elements,
                                    int points_per_element) {
  const int n = points_per_element > 0 ? points_per_element : u.degree() + 2;
  WeightedSampleSet s;
  for (std::size_t e : elements) {
    const auto [a, b] = u.mesh().element(e);
    const QuadratureRule rule = composite_gauss(a, b, 1, n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      s.add(rule.points[q], rule.weights[q], u.value_in_element(e, rule.points[q]));
    }
  }
  return s;
}

WeightedSampleSet volume_samples(const BrokenFunction& u, int points_per_element,
                                 int panels_per_element) {
  const int n = points_per_element > 0 ? points_per_element : u.degree() + 2;
  WeightedSampleSet s;
  for (std::size_t e = 0; e < u.mesh().num_elements(); ++e) {
    const auto [a, b] = u.mesh().element(e);
    const QuadratureRule rule = composite_gauss(a, b, panels_per_element, n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      s.add(rule.points[q], rule.weights[q], u.value_in_element(e, rule.points[q]));
    }
  }
  return s;
}

namespace {

// h^{-1/p'} = h^{-(p-1)/p}; equals 1 at p = 1.
double face_weight(double h, double p) { return std::pow(h, -(p - 1.0) / p); }

}  // namespace

WeightedSampleSet scaled_jump_samples(const BrokenFunction& u, const ExponentField& p) {
  WeightedSampleSet s;
  const Mesh1D& mesh = u.mesh();
  for (std::size_t i = 1; i + 1 < mesh.num_nodes(); ++i) {
    const double x = mesh.node(i);
    s.add(x, 1.0, jump(u, i) * face_weight(mesh.face_size(i), p(x)));
  }
  return s;
}

double broken_seminorm(const BrokenFunction& u, const ExponentField& p,
                       const std::optional<DirichletData>& dirichlet) {
  const BrokenFunction g = elementwise_gradient(u);
  // gradient degree k-1; u.degree()+2 points keep the default accuracy
  double result = luxemburg_norm(volume_samples(g, u.degree() + 2), p) +
                  luxemburg_norm(scaled_jump_samples(u, p), p);
  if (dirichlet) {
    const Mesh1D& mesh = u.mesh();
    WeightedSampleSet b;
    const std::size_t last = mesh.num_nodes() - 1;
    if (mesh.dirichlet().left) {
      const double x = mesh.left();
      b.add(x, 1.0, (u.trace_from_right(0) - dirichlet->left) * face_weight(mesh.face_size(0), p(x)));
    }
    if (mesh.dirichlet().right) {
      const double x = mesh.right();
      b.add(x, 1.0, (u.trace_from_left(last) - dirichlet->right) * face_weight(mesh.face_size(last), p(x)));
    }
    result += luxemburg_norm(b, p);
  }
  return result;
}

double local_seminorm(const BrokenFunction& u, const ExponentField& p, std::size_t element) {
  const Neighborhoods nb = face_neighborhoods(u.mesh());
  const auto& patch = nb.element_patch.at(element);
  const BrokenFunction g = elementwise_gradient(u);
  double result = luxemburg_norm(volume_samples_on(g, patch, u.degree() + 2), p);
  const Mesh1D& mesh = u.mesh();
  const std::size_t first_node = patch.front();
  const std::size_t last_node = patch.back() + 1;
  for (std::size_t i = first_node; i <= last_node; ++i) {
    if (!mesh.is_interior_node(i)) continue;
    const double x = mesh.node(i);
    result += std::abs(jump(u, i)) * face_weight(mesh.face_size(i), p(x));
  }
  return result;
}

double total_variation(const BrokenFunction& u) {
  const BrokenFunction g = elementwise_gradient(u);
  const WeightedSampleSet s = volume_samples(g, u.degree() + 2);
  double tv = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) tv += s.weight[i] * std::abs(s.value[i]);
  for (std::size_t i = 1; i + 1 < u.mesh().num_nodes(); ++i) tv += std::abs(jump(u, i));
  return tv;
}

InverseEstimateReport inverse_estimate_check(const BrokenFunction& u, const ExponentField& p,
                                             const ExponentField& q) {
  InverseEstimateReport report;
  for (std::size_t e = 0; e < u.mesh().num_elements(); ++e) {
    const std::size_t one[] = {e};
    const WeightedSampleSet s = volume_samples_on(u, one, u.degree() + 4);
    const double nq = luxemburg_norm(s, q);
    if (nq == 0.0) {
      ++report.skipped;
      continue;
    }
    const double np = luxemburg_norm(s, p);
    const auto [a, b] = u.mesh().element(e);
    const double p_plus = p.range_on(a, b).second;
    const double q_minus = q.range_on(a, b).first;
    const double scale = std::pow(b - a, 1.0 / p_plus - 1.0 / q_minus);
    report.max_ratio = std::max(report.max_ratio, np / (scale * nq));
  }
  return report;
}

void write_csv(std::ostream& os, const BrokenFunction& u) {
  char buf[128];
  os << "element,local_node,x,value\n";
  for (std::size_t e = 0; e < u.mesh().num_elements(); ++e) {
    const auto c = u.element_coefficients(e);
    for (std::size_t j = 0; j < u.local_size(); ++j) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", e, j, u.node_position(e, j), c[j]);
      os << buf;
    }
  }
}

}  // namespace pxdg
