#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pxdg/broken_space.hpp"
#include "pxdg/exact_solution.hpp"
#include "pxdg/problem.hpp"
#include "pxdg/solve.hpp"

namespace pxdg {

/// A solution to measure against: values, derivatives and the points where
/// either is not smooth (quadrature is split there).
struct ReferenceSolution {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<double> breakpoints;
};

ReferenceSolution reference_from(const ExactSolution& exact);
ReferenceSolution reference_from(const BrokenFunction& u);

struct ErrorMetrics {
  double luxemburg_error = 0.0;  // ||u_h - u||_{L^p}
  double l1_error = 0.0;         // ||u_h - u||_{L^1}
  double max_nodal_error = 0.0;  // max over element nodes |u_h - u|
  double gradient_error = 0.0;   // ||grad u_h - u'||_{L^p}, element-wise gradient
};

/// Errors by composite Gauss quadrature on the union of mesh nodes and the
/// reference break points; independent of the solver's quadrature.
ErrorMetrics measure_errors(const BrokenFunction& uh, const ReferenceSolution& ref, const ExponentField& p,
                            int points = 8);

enum class Method { dg, cg };
std::string to_string(Method m);
Method parse_method(const std::string& text);

/// Discretization and optimizer settings shared by every run of a study.
struct RunSettings {
  int degree = 1;
  LiftingConfig lifting{1};
  QuadratureSpec quadrature = QuadratureSpec::trapezoid(1);
  BfgsConfig bfgs;
};

/// Solves `problem` on the uniform mesh with n elements.
SolveReport run_method(const Problem& problem, Method method, std::size_t n, const RunSettings& settings);

/// ||R_h u||_{L^p} by Gauss quadrature; 0 for continuous u or a single element.
double lifting_norm(const BrokenFunction& u, const ExponentField& p, LiftingConfig cfg);

struct ConvergenceRow {
  std::size_t n = 0;
  double h = 0.0;
  double luxemburg_error = 0.0;
  double max_nodal_error = 0.0;
  double l1_error = 0.0;
  double gradient_error = 0.0;
  double seminorm = 0.0;  // |u_h|_{W^{1,p}(T_h)}, interior faces only
  double interior_penalty = 0.0;
  double dirichlet_penalty = 0.0;
  double lifting_norm = 0.0;
  double energy = 0.0;  // I_h(u_h) (I(u_h) for CG)
  int iterations = 0;
  double wall_seconds = 0.0;
  BfgsStatus status = BfgsStatus::converged;
};

struct ConvergenceStudy {
  Method method = Method::dg;
  std::vector<ConvergenceRow> rows;
  std::optional<double> exact_energy;  // I(u) when the exact solution is known
  std::string reference;               // "exact" or "mesh n=<N>"
};

/// One solve per n (concurrently, `workers` at a time). Errors are against
/// the exact solution when the problem has one, otherwise against the same
/// method on a mesh 4 times finer than the finest n.
ConvergenceStudy convergence_study(const Problem& problem, Method method, const std::vector<std::size_t>& ns,
                                   const RunSettings& settings, int workers);

/// log(e_i / e_{i+1}) / log(h_i / h_{i+1}) between consecutive rows.
std::vector<double> empirical_orders(const std::vector<ConvergenceRow>& rows, double ConvergenceRow::*column);

/// Table with header; when there are at least two rows an "order" footer row
/// follows with the empirical order of each error column between the last
/// two rows and blanks elsewhere.
void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study);

struct CompareEntry {
  std::size_t n = 0;  // DG elements; CG uses 2n
  SolveReport dg;
  SolveReport cg;
  ErrorMetrics dg_errors;
  ErrorMetrics cg_errors;
};

/// DG on n elements against CG on 2n elements, for every n.
std::vector<CompareEntry> compare_methods(const Problem& problem, const std::vector<std::size_t>& ns,
                                          const RunSettings& settings, int workers);

void write_compare_csv(std::ostream& os, const std::vector<CompareEntry>& entries);

/// Exact (when known), DG and CG curves of one comparison entry.
std::string compare_svg(const Problem& problem, const CompareEntry& entry);

/// Solution curve of a single run, with the exact solution when known.
std::string solution_svg(const Problem& problem, const SolveReport& report, const std::string& title);

/// Worker count: PXDG_WORKERS when set, else `requested` when positive, else
/// the hardware concurrency.
int resolve_workers(int requested);

/// Calls body(i) for i in [0, count) on up to `workers` threads. Exceptions
/// are rethrown in the caller (the first one by index).
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace pxdg
