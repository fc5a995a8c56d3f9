#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "pxdg/bfgs.hpp"
#include "pxdg/functional.hpp"

namespace pxdg {

struct SolveReport {
  BrokenFunction solution;
  TermBreakdown terms;
  int iterations = 0;
  int evaluations = 0;
  int line_search_failures = 0;
  BfgsStatus status = BfgsStatus::max_iterations;
  std::vector<double> value_history;
  std::vector<double> grad_norm_history;
  double wall_seconds = 0.0;

  bool converged() const { return status == BfgsStatus::converged; }
  bool acceptable() const { return converged() || status == BfgsStatus::roundoff_stall; }
};

/// Minimizes I_h over S^k(T_h). Every coefficient is free; boundary data
/// enters through the Dirichlet penalty.
SolveReport solve_dg(const FunctionalSpec& spec, MeshPtr mesh, int degree, const BfgsConfig& cfg = {});

/// Minimizes I over U^k(T_h) with the Dirichlet end values fixed to u_D;
/// only the remaining continuous DOFs are optimization variables.
SolveReport solve_cg(const FunctionalSpec& spec, MeshPtr mesh, int degree, const BfgsConfig& cfg = {});

/// Linear function through the Dirichlet values at the two ends.
double linear_boundary_interpolant(const Mesh1D& mesh, const DirichletData& data, double x);

/// Iteration history as CSV: iteration,value,grad_norm
void write_history_csv(std::ostream& os, const SolveReport& report);

}  // namespace pxdg
