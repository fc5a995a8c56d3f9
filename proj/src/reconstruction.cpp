#include "pxdg/reconstruction.hpp"

#include <cmath>
#include <stdexcept>

#include "pxdg/quadrature.hpp"

namespace pxdg {

double project_node(const BrokenFunction& u, std::size_t node) {
  const Mesh1D& mesh = u.mesh();
  if (node >= mesh.num_nodes()) throw std::out_of_range("project_node: node index out of range");
  // mean of u - shift plus shift, so constants come back bit-exact
  const std::size_t first = node == 0 ? 0 : node - 1;
  const double shift = u.element_coefficients(first)[0];
  const LagrangeBasis& basis = lagrange_basis(u.degree());
  const QuadratureRule reference = gauss_legendre(u.degree() / 2 + 1);
  double integral = 0.0;
  double measure = 0.0;
  for (std::size_t e : {node == 0 ? mesh.num_elements() : node - 1, node}) {
    if (e >= mesh.num_elements()) continue;
    const double h = mesh.element_size(e);
    const auto c = u.element_coefficients(e);
    for (std::size_t q = 0; q < reference.size(); ++q) {
      double v = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) v += (c[j] - shift) * basis.value(j, reference.points[q]);
      integral += 0.5 * h * reference.weights[q] * v;
    }
    measure += h;
  }
  return shift + integral / measure;
}

BrokenFunction reconstruct(const BrokenFunction& u) {
  const Mesh1D& mesh = u.mesh();
  Eigen::VectorXd nodal(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) nodal[static_cast<Eigen::Index>(z)] = project_node(u, z);
  return BrokenFunction::from_continuous(u.mesh_ptr(), 1, nodal);
}

ReconstructionReport reconstruction_error_report(const BrokenFunction& u, const ExponentField& p,
                                                 const ExponentField& q) {
  const Mesh1D& mesh = u.mesh();
  const BrokenFunction qh = reconstruct(u);
  const int points = u.degree() + 3;

  ReconstructionReport report;
  WeightedSampleSet difference;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto [a, b] = mesh.element(e);
    const QuadratureRule rule = composite_gauss(a, b, 1, points);
    WeightedSampleSet local;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double x = rule.points[i];
      local.add(x, rule.weights[i], u.value_in_element(e, x) - qh.value_in_element(e, x));
    }
    difference.append(local);

    ReconstructionRow row;
    row.element = e;
    row.h = b - a;
    row.error = luxemburg_norm(local, q);
    row.local_seminorm = local_seminorm(u, p, e);
    const double q_minus = q.range_on(a, b).first;
    const double p_minus = p.range_on(a, b).first;
    const double scale = std::pow(row.h, 1.0 / q_minus - 1.0 / p_minus + 1.0);
    row.ratio = row.local_seminorm > 0.0 ? row.error / (scale * row.local_seminorm) : 0.0;
    report.elements.push_back(row);
  }
  report.volume_error = luxemburg_norm(difference, q);
  report.gradient_norm = luxemburg_norm(volume_samples(elementwise_gradient(qh), 2), p);
  report.seminorm = broken_seminorm(u, p);
  const std::size_t last = mesh.num_nodes() - 1;
  report.boundary_error = std::max(std::abs(u.trace_from_right(0) - qh.trace_from_right(0)),
                                   std::abs(u.trace_from_left(last) - qh.trace_from_left(last)));
  return report;
}

}  // namespace pxdg
