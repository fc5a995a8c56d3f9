#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace pxdg {

/// Objective callback: returns f(x) and writes grad f(x) into the second
/// argument.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

enum class InitialGuess { zero, linear_interp_of_uD, supplied };

struct BfgsConfig {
  double grad_tol = 1e-8;  // on ||g||_inf relative to 1 + ||g_0||_inf
  // A line search that cannot decrease f any more ends in roundoff_stall
  // instead of a failure when ||g||_inf is below this relative to
  // 1 + max(||g_0||_inf, |f| / (1 + ||x||_inf)).
  double stall_grad_tol = 1e-6;
  int max_iters = 10000;
  double c1 = 1e-4;  // sufficient decrease
  double c2 = 0.9;   // curvature
  int max_line_search_evals = 60;
  std::size_t dense_limit = 2000;  // above this, limited-memory updates
  int memory = 20;
  InitialGuess initial_guess = InitialGuess::linear_interp_of_uD;
  Eigen::VectorXd supplied;  // used with InitialGuess::supplied

  void validate() const;
};

enum class BfgsStatus { converged, roundoff_stall, max_iterations, line_search_failure, diverged };

std::string to_string(BfgsStatus status);

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  int evaluations = 0;
  int line_search_failures = 0;
  BfgsStatus status = BfgsStatus::max_iterations;
  std::vector<double> value_history;      // f at every accepted iterate, x0 first
  std::vector<double> grad_norm_history;  // ||g||_inf alongside
  bool converged() const { return status == BfgsStatus::converged; }
  /// Converged, or stopped by floating-point noise close to a stationary point.
  bool acceptable() const { return converged() || status == BfgsStatus::roundoff_stall; }
};

/// Quasi-Newton minimization with a strong-Wolfe line search.
///
/// Dense inverse-Hessian updates up to `dense_limit` variables, L-BFGS
/// two-loop recursion above. The update is skipped when s'y is not safely
/// positive. After a failed line search the method restarts once from the
/// steepest-descent direction before giving up.
BfgsResult bfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const BfgsConfig& cfg);

}  // namespace pxdg
