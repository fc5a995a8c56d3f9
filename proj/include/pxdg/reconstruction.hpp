#pragma once

#include <vector>

#include "pxdg/broken_space.hpp"

namespace pxdg {

/// pi_z(u): mean value of u over the node patch T_z.
double project_node(const BrokenFunction& u, std::size_t node);

/// Q_h(u) = sum_z pi_z(u) lambda_z, a continuous piecewise-linear function.
BrokenFunction reconstruct(const BrokenFunction& u);

struct ReconstructionRow {
  std::size_t element = 0;
  double h = 0.0;
  double error = 0.0;           // ||u - Q_h u||_{q, K}
  double local_seminorm = 0.0;  // |u|_{W^{1,p}(T_K)}
  double ratio = 0.0;           // error / (h^{1/q_- - 1/p_- + 1} local_seminorm); 0 if undefined
};

/// Diagnostics for Q_h in one dimension. Because p >= 1 = N, the Sobolev
/// conjugate is infinite, so the gamma/beta exponents of the general theory
/// vanish and the volume rate is h^1 and the boundary rate h^0.
struct ReconstructionReport {
  double volume_error = 0.0;    // ||u - Q_h u||_{q}
  double gradient_norm = 0.0;   // ||grad Q_h u||_{p}
  double seminorm = 0.0;        // |u|_{W^{1,p}(T_h)}
  double boundary_error = 0.0;  // max |(u - Q_h u)| at the two end points
  double volume_rate = 1.0;
  double boundary_rate = 0.0;
  std::vector<ReconstructionRow> elements;
};

ReconstructionReport reconstruction_error_report(const BrokenFunction& u, const ExponentField& p,
                                                 const ExponentField& q);

}  // namespace pxdg
