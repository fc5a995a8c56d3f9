#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pxdg {

/// A variable exponent p(x) on an interval.
///
/// Three families are supported: constants, the hat family
///   p(x) = ((1 - eps) / a)|x| + 1 + eps  for |x| <= a,   2 for a <= |x| <= 1,
/// and piecewise-linear interpolants. A breakpoint may be repeated in a
/// piecewise-linear field to encode a jump; the right value wins at the jump.
class ExponentField {
 public:
  enum class Kind { constant, hat, piecewise_linear };

  static ExponentField constant(double value);
  static ExponentField hat(double epsilon, double a);
  static ExponentField piecewise_linear(std::vector<double> xs, std::vector<double> values);

  /// Text form: "kind=const value=2", "kind=hat eps=0.01 a=0.01",
  /// "kind=pwl xs=0,0.5,1 vals=2,1.5,2".
  static ExponentField parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  double operator()(double x) const;

  /// Essential infimum / supremum over the domain.
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  /// Closed domain of definition; unbounded for constants.
  std::pair<double, double> domain() const { return domain_; }
  bool contains(double x) const { return x >= domain_.first && x <= domain_.second; }

  /// Conjugate exponent p/(p-1); +inf where p = 1.
  double conjugate(double x) const;

  /// Sampled estimate of sup |p(x)-p(y)| log(e + 1/|x-y|) on a dyadic grid.
  /// Constants report 0.
  double log_holder_constant(int levels = 10) const;

  /// min / max of p over a closed sub-interval (exact for these families).
  std::pair<double, double> range_on(double lo, double hi) const;

  double epsilon() const { return params_[0]; }
  double hat_width() const { return params_[1]; }

 private:
  ExponentField() = default;

  Kind kind_ = Kind::constant;
  double params_[2] = {0.0, 0.0};
  std::vector<double> xs_;
  std::vector<double> values_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::pair<double, double> domain_ = {-std::numeric_limits<double>::infinity(),
                                       std::numeric_limits<double>::infinity()};
};

double eval_exponent(const ExponentField& field, double x);

/// Function samples against a discrete measure: sum_i w_i f(x_i) stands in
/// for integrals over an interval (quadrature) and for sums over faces
/// (counting measure, unit weights).
struct WeightedSampleSet {
  std::vector<double> x;
  std::vector<double> weight;
  std::vector<double> value;

  void add(double at, double w, double v) {
    x.push_back(at);
    weight.push_back(w);
    value.push_back(v);
  }
  std::size_t size() const { return x.size(); }
  bool empty() const { return x.empty(); }
  void append(const WeightedSampleSet& other);
  WeightedSampleSet scaled(double factor) const;
};

/// sum_i w_i |u_i|^{p(x_i)}.
double modular(const WeightedSampleSet& samples, const ExponentField& field);

/// inf{k > 0 : modular(u / k) <= 1}; 0 for the zero function.
double luxemburg_norm(const WeightedSampleSet& samples, const ExponentField& field,
                      double rel_tol = 1e-12);

/// Same as above with the exponent already evaluated at each sample.
double modular(const WeightedSampleSet& samples, const std::vector<double>& exponents);
double luxemburg_norm(const WeightedSampleSet& samples, const std::vector<double>& exponents,
                      double rel_tol = 1e-12);

struct ModularNormReport {
  double norm = 0.0;
  double modular = 0.0;
  double p1 = 0.0;  // extreme exponents over the support of u
  double p2 = 0.0;
  bool item1 = false;  // norm < 1 <=> modular < 1 (and = / >)
  bool item2 = false;  // norm >= 1: norm^p1 <= modular <= norm^p2
  bool item3 = false;  // norm <= 1: norm^p2 <= modular <= norm^p1
  double lower_slack = 0.0;  // modular - lower bound (relative)
  double upper_slack = 0.0;  // upper bound - modular (relative)
  bool passed() const { return item1 && item2 && item3; }
};

/// Checks the modular / norm relations for one sample set. `tol` is the
/// relative slack allowed in each comparison.
ModularNormReport check_modular_norm_relations(const WeightedSampleSet& samples,
                                               const ExponentField& field, double tol = 1e-9);

/// max over a grid of x, y in [lo, hi] of h^{alpha (p(x) - p(y))}, h = hi - lo.
double log_holder_bound(const ExponentField& field, double alpha, double lo, double hi,
                        int samples = 257);

/// Smallest constants making the three pointwise monotonicity inequalities
/// hold at (eta, xi) for exponent px:
///   |eta-xi|^p                    <= C (A(eta)-A(xi))(eta-xi)   if p >= 2
///   |eta-xi|^2 (|eta|+|xi|)^{p-2} <= C (A(eta)-A(xi))(eta-xi)   if p <  2
///   |eta|^p                       <= C 2^{p-1}(|eta-xi|^p + |xi|^p)
/// with A(t) = |t|^{p-2} t. A constant of 0 means the left side vanishes;
/// NaN marks an inequality that does not apply at this p.
struct InequalityReport {
  double monotone_large_p = 0.0;
  double monotone_small_p = 0.0;
  double convexity = 0.0;
};
InequalityReport pointwise_inequalities(double eta, double xi, double px);

/// Signed power |t|^{s-2} t with the value 0 at t = 0.
double signed_power(double t, double s);

}  // namespace pxdg
