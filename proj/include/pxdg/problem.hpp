#pragma once

#include <map>
#include <optional>
#include <string>

#include "pxdg/exact_solution.hpp"
#include "pxdg/functional.hpp"
#include "pxdg/mesh.hpp"

namespace pxdg {

/// Thrown for malformed problem or experiment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A boundary value problem ready to be discretized on uniform meshes.
struct Problem {
  std::string id;
  double x_left = -1.0;
  double x_right = 1.0;
  DirichletSides dirichlet = DirichletSides::both();
  FunctionalSpec spec;
  std::optional<ExactSolution> exact;
};

/// The hat-exponent benchmark on (-1, 1): p from the hat family, no fidelity,
/// u(+-1) = +-B with B calibrated from the flux constant C, energy divided
/// by the exponent so that the closed-form solution is the minimizer.
Problem paper1d(double epsilon = 0.01, double a = 0.01, double C = 1.3);

/// Parses "key=value" lines (blank lines and '#' comments skipped). Only the
/// first '=' splits, so values may themselves contain '='.
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin);

/// Custom problem from a key=value file. Keys:
///   domain=-1,1   dirichlet=left,right|left|right|none
///   p=<exponent text>  q=...  r=...
///   u_left=  u_right=  normalize=0|1
///   fidelity=0|1  xi=const c | linear c0 c1 | sin amp freq | poly c0 c1 ...
Problem load_problem_file(const std::string& path);

/// "paper1d", "paper1d:eps=0.01,a=0.01,C=1.3" or "custom:<path>".
Problem resolve_problem(const std::string& id);

/// Data function from its text form (see load_problem_file).
std::function<double(double)> parse_data_function(const std::string& text);

}  // namespace pxdg
