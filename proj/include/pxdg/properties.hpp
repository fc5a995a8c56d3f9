#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "pxdg/broken_space.hpp"
#include "pxdg/lifting.hpp"

namespace pxdg {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropertyOptions {
  std::uint64_t seed = 20240917;
  std::vector<std::string> suites;  // empty: all
  /// Face-size rule of every mesh built by the suites. squared_debug is a
  /// negative control: the lifting bound sweep must then fail.
  FaceSizeRule face_rule = FaceSizeRule::average;
};

/// Suite names in run order.
std::vector<std::string> property_suites();

std::vector<PropertyResult> run_properties(const PropertyOptions& options);

/// suite,property,passed,detail
void write_properties_csv(std::ostream& os, const std::vector<PropertyResult>& results);

// Refinement sweeps shared with the acceptance checks. Each returns one value
// per level; level j uses the uniform mesh with n0 * 2^j elements.

/// Random broken function with coefficients in [-1, 1].
BrokenFunction random_broken(MeshPtr mesh, int degree, std::mt19937_64& rng);

/// max over `samples` fixed-shape random functions of ||R_h u|| / ||h^{-1/p'}[u]||.
/// Each sample is a random broken function on the coarsest mesh embedded
/// into every finer one.
std::vector<double> lifting_ratio_sweep(std::uint64_t seed, int levels, int samples, const ExponentField& p,
                                        LiftingConfig cfg = {}, FaceSizeRule rule = FaceSizeRule::average);

/// max over `samples` random v in S^1 of ||v - mean v||_p / |v|_{W^{1,p}(T_h)}.
/// v is a coarse random function embedded into the level mesh plus a random
/// perturbation of relative size h per coefficient.
std::vector<double> poincare_sweep(std::uint64_t seed, int levels, int samples, const ExponentField& p,
                                   FaceSizeRule rule = FaceSizeRule::average);

struct ReconstructionSweep {
  std::vector<double> h;
  std::vector<double> l2_error;        // ||u - Q_h u||_{L^2}
  std::vector<double> l2_ratio;        // l2_error / (h |u|_{W^{1,2}(T_h)})
  std::vector<double> gradient_part;   // ||grad u||_p
  std::vector<double> jump_part;       // ||h^{-1/p'} [u]||_p
  std::vector<double> gradient_ratio;  // ||grad Q_h u||_p / |u|_{W^{1,p}(T_h)}
  std::vector<double> boundary_ratio;  // max over ends |u - Q_h u| / (h^{1-1/p_-} |u|_{W^{1,p}(T_e)})
};

/// Q_h applied to a fixed discontinuous u (degree 2 on four elements of
/// (-1, 1), jumps at every interior node) embedded into refinements.
ReconstructionSweep reconstruction_sweep(int levels, const ExponentField& p,
                                         FaceSizeRule rule = FaceSizeRule::average);

/// Largest level-to-level growth factor values[j+1] / values[j].
double max_growth(const std::vector<double>& values);
/// max / min over the values.
double spread(const std::vector<double>& values);

}  // namespace pxdg
