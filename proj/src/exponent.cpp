#include "pxdg/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pxdg {

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << values[i];
  }
  return os.str();
}

}  // namespace

ExponentField ExponentField::constant(double value) {
  if (!(value >= 1.0) || !std::isfinite(value))
    throw std::invalid_argument("constant exponent must lie in [1, inf)");
  ExponentField f;
  f.kind_ = Kind::constant;
  f.params_[0] = value;
  f.lower_ = f.upper_ = value;
  return f;
}

ExponentField ExponentField::hat(double epsilon, double a) {
  if (!(epsilon > 0.0 && epsilon < 1.0 && a > 0.0 && a < 1.0))
    throw std::invalid_argument("hat exponent needs 0 < eps < 1 and 0 < a < 1");
  ExponentField f;
  f.kind_ = Kind::hat;
  f.params_[0] = epsilon;
  f.params_[1] = a;
  f.lower_ = 1.0 + epsilon;
  f.upper_ = 2.0;
  f.domain_ = {-1.0, 1.0};
  return f;
}

ExponentField ExponentField::piecewise_linear(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() != values.size() || xs.size() < 2)
    throw std::invalid_argument("piecewise-linear exponent needs >= 2 matching breakpoints");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1]) throw std::invalid_argument("breakpoints must be non-decreasing");
    if (i + 1 < xs.size() && xs[i] == xs[i - 1] && xs[i + 1] == xs[i])
      throw std::invalid_argument("a breakpoint may appear at most twice");
  }
  if (xs.front() == xs.back()) throw std::invalid_argument("degenerate exponent domain");
  for (double v : values) {
    if (!(v >= 1.0) || !std::isfinite(v))
      throw std::invalid_argument("exponent values must lie in [1, inf)");
  }
  ExponentField f;
  f.kind_ = Kind::piecewise_linear;
  f.lower_ = *std::min_element(values.begin(), values.end());
  f.upper_ = *std::max_element(values.begin(), values.end());
  f.domain_ = {xs.front(), xs.back()};
  f.xs_ = std::move(xs);
  f.values_ = std::move(values);
  return f;
}

double ExponentField::operator()(double x) const {
  if (!contains(x)) throw std::domain_error("exponent evaluated outside its domain");
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::hat: {
      const double eps = params_[0];
      const double a = params_[1];
      const double r = std::abs(x);
      if (r >= a) return 2.0;
      return (1.0 - eps) / a * r + 1.0 + eps;
    }
    case Kind::piecewise_linear: {
      // last segment whose left end is <= x; duplicates resolve to the right value
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return values_.back();
      const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
      const std::size_t lo = hi - 1;
      const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
      return values_[lo] + t * (values_[hi] - values_[lo]);
    }
  }
  return params_[0];
}

double eval_exponent(const ExponentField& field, double x) { return field(x); }

double ExponentField::conjugate(double x) const {
  const double p = (*this)(x);
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

std::pair<double, double> ExponentField::range_on(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  switch (kind_) {
    case Kind::constant:
      return {params_[0], params_[0]};
    case Kind::hat: {
      const double near = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
      const double far = std::max(std::abs(lo), std::abs(hi));
      return {(*this)(near), (*this)(far)};
    }
    case Kind::piecewise_linear: {
      double mn = std::min((*this)(lo), (*this)(hi));
      double mx = std::max((*this)(lo), (*this)(hi));
      for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (xs_[i] >= lo && xs_[i] <= hi) {
          mn = std::min(mn, values_[i]);
          mx = std::max(mx, values_[i]);
        }
      }
      return {mn, mx};
    }
  }
  return {lower_, upper_};
}

double ExponentField::log_holder_constant(int levels) const {
  if (kind_ == Kind::constant) return 0.0;
  const std::size_t n = (std::size_t{1} << levels) + 1;
  const double lo = domain_.first;
  const double hi = domain_.second;
  std::vector<double> xs(n), ps(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = (i + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    ps[i] = (*this)(xs[i]);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = std::abs(ps[i] - ps[j]);
      if (gap == 0.0) continue;
      best = std::max(best, gap * std::log(std::numbers::e + 1.0 / (xs[j] - xs[i])));
    }
  }
  return best;
}

ExponentField ExponentField::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string token, kind, value, eps, a, xs, vals;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("exponent token without '=': " + token);
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    if (key == "kind") kind = val;
    else if (key == "value") value = val;
    else if (key == "eps") eps = val;
    else if (key == "a") a = val;
    else if (key == "xs") xs = val;
    else if (key == "vals") vals = val;
    else throw std::invalid_argument("unknown exponent key: " + key);
  }
  if (kind == "const" && !value.empty()) return constant(std::stod(value));
  if (kind == "hat" && !eps.empty() && !a.empty()) return hat(std::stod(eps), std::stod(a));
  if (kind == "pwl" && !xs.empty() && !vals.empty())
    return piecewise_linear(parse_list(xs), parse_list(vals));
  throw std::invalid_argument("malformed exponent description: " + std::string(text));
}

std::string ExponentField::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::constant:
      os << "kind=const value=" << params_[0];
      break;
    case Kind::hat:
      os << "kind=hat eps=" << params_[0] << " a=" << params_[1];
      break;
    case Kind::piecewise_linear:
      os << "kind=pwl xs=" << join(xs_) << " vals=" << join(values_);
      break;
  }
  return os.str();
}

void WeightedSampleSet::append(const WeightedSampleSet& other) {
  x.insert(x.end(), other.x.begin(), other.x.end());
  weight.insert(weight.end(), other.weight.begin(), other.weight.end());
  value.insert(value.end(), other.value.begin(), other.value.end());
}

WeightedSampleSet WeightedSampleSet::scaled(double factor) const {
  WeightedSampleSet out = *this;
  for (double& v : out.value) v *= factor;
  return out;
}

namespace {

std::vector<double> exponents_at(const WeightedSampleSet& samples, const ExponentField& field) {
  std::vector<double> p(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) p[i] = field(samples.x[i]);
  return p;
}

double scaled_modular(const WeightedSampleSet& s, const std::vector<double>& p, double k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.weight[i] == 0.0 || s.value[i] == 0.0) continue;
    sum += s.weight[i] * std::pow(std::abs(s.value[i]) / k, p[i]);
  }
  return sum;
}

}  // namespace

double modular(const WeightedSampleSet& samples, const std::vector<double>& exponents) {
  if (exponents.size() != samples.size())
    throw std::invalid_argument("modular: exponent count does not match samples");
  return scaled_modular(samples, exponents, 1.0);
}

double modular(const WeightedSampleSet& samples, const ExponentField& field) {
  return modular(samples, exponents_at(samples, field));
}

double luxemburg_norm(const WeightedSampleSet& samples, const std::vector<double>& p,
                      double rel_tol) {
  if (p.size() != samples.size())
    throw std::invalid_argument("luxemburg_norm: exponent count does not match samples");
  for (double w : samples.weight) {
    if (w < 0.0) throw std::invalid_argument("luxemburg_norm: negative weight");
  }
  double p1 = std::numeric_limits<double>::infinity();
  double p2 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples.weight[i] == 0.0 || samples.value[i] == 0.0) continue;
    p1 = std::min(p1, p[i]);
    p2 = std::max(p2, p[i]);
  }
  if (p2 == 0.0) return 0.0;

  const double rho = scaled_modular(samples, p, 1.0);
  if (rho == 1.0) return 1.0;
  // rho >= 1: rho^{1/p2} <= norm <= rho^{1/p1}; rho < 1: reversed
  double lo = std::min(std::pow(rho, 1.0 / p1), std::pow(rho, 1.0 / p2));
  double hi = std::max(std::pow(rho, 1.0 / p1), std::pow(rho, 1.0 / p2));
  lo *= 0.5;
  hi *= 2.0;
  while (scaled_modular(samples, p, lo) < 1.0) lo *= 0.5;
  while (scaled_modular(samples, p, hi) > 1.0) hi *= 2.0;

  for (int iter = 0; iter < 400 && (hi - lo) > rel_tol * hi; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double m = (mid > lo && mid < hi) ? mid : 0.5 * (lo + hi);
    if (scaled_modular(samples, p, m) > 1.0) lo = m;
    else hi = m;
  }
  return 0.5 * (lo + hi);
}

double luxemburg_norm(const WeightedSampleSet& samples, const ExponentField& field,
                      double rel_tol) {
  return luxemburg_norm(samples, exponents_at(samples, field), rel_tol);
}

ModularNormReport check_modular_norm_relations(const WeightedSampleSet& samples,
                                               const ExponentField& field, double tol) {
  const std::vector<double> p = exponents_at(samples, field);
  ModularNormReport r;
  r.norm = luxemburg_norm(samples, p);
  r.modular = modular(samples, p);
  r.p1 = std::numeric_limits<double>::infinity();
  r.p2 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples.weight[i] == 0.0 || samples.value[i] == 0.0) continue;
    r.p1 = std::min(r.p1, p[i]);
    r.p2 = std::max(r.p2, p[i]);
  }
  if (r.p2 == 0.0) throw std::invalid_argument("modular/norm relations need a nonzero function");

  const double lambda = r.norm;
  const double rho = r.modular;
  // item (1): norm and modular sit on the same side of 1; values within tol
  // of 1 count as equal
  auto side = [tol](double v, double scale) { return std::abs(v - 1.0) <= tol * scale ? 0 : (v < 1.0 ? -1 : 1); };
  const int norm_side = side(lambda, 1.0);
  const int modular_side = side(rho, r.p2);
  r.item1 = norm_side == modular_side || norm_side == 0 || modular_side == 0;

  double lower = 0.0, upper = 0.0;
  if (lambda >= 1.0) {
    lower = std::pow(lambda, r.p1);
    upper = std::pow(lambda, r.p2);
  } else {
    lower = std::pow(lambda, r.p2);
    upper = std::pow(lambda, r.p1);
  }
  r.lower_slack = (rho - lower) / std::max(1.0, std::abs(lower));
  r.upper_slack = (upper - rho) / std::max(1.0, std::abs(upper));
  const bool bounds = r.lower_slack >= -tol && r.upper_slack >= -tol;
  // items (2) and (3) apply on their own side of 1; each is vacuous otherwise
  r.item2 = lambda < 1.0 || bounds;
  r.item3 = lambda > 1.0 || bounds;
  return r;
}

double log_holder_bound(const ExponentField& field, double alpha, double lo, double hi,
                        int samples) {
  if (!(alpha > 0.0)) throw std::invalid_argument("log_holder_bound: alpha must be positive");
  if (!(hi > lo)) throw std::invalid_argument("log_holder_bound: empty interval");
  const double h = hi - lo;
  auto [pmin, pmax] = field.range_on(lo, hi);
  for (int i = 0; i < samples; ++i) {
    const double x = lo + h * i / std::max(1, samples - 1);
    const double v = field(std::min(x, hi));
    pmin = std::min(pmin, v);
    pmax = std::max(pmax, v);
  }
  const double gap = pmax - pmin;
  return std::max(std::pow(h, alpha * gap), std::pow(h, -alpha * gap));
}

double signed_power(double t, double s) {
  if (t == 0.0) return 0.0;
  const double m = std::pow(std::abs(t), s - 1.0);
  return t > 0.0 ? m : -m;
}

InequalityReport pointwise_inequalities(double eta, double xi, double px) {
  if (!(px >= 1.0)) throw std::invalid_argument("pointwise_inequalities: p must be >= 1");
  InequalityReport r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double diff = eta - xi;
  const double monotone = (signed_power(eta, px) - signed_power(xi, px)) * diff;

  auto ratio = [](double lhs, double rhs) {
    if (lhs == 0.0) return 0.0;
    if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
  };

  if (px >= 2.0) {
    r.monotone_large_p = ratio(std::pow(std::abs(diff), px), monotone);
    r.monotone_small_p = nan;
  } else {
    r.monotone_large_p = nan;
    const double base = std::abs(eta) + std::abs(xi);
    const double lhs = base == 0.0 ? 0.0 : diff * diff * std::pow(base, px - 2.0);
    r.monotone_small_p = ratio(lhs, monotone);
  }
  r.convexity = ratio(std::pow(std::abs(eta), px),
                      std::pow(2.0, px - 1.0) *
                          (std::pow(std::abs(diff), px) + std::pow(std::abs(xi), px)));
  return r;
}

}  // namespace pxdg
