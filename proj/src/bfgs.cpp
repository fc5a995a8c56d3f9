#include "pxdg/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace pxdg {

void BfgsConfig::validate() const {
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) throw std::invalid_argument("line search needs 0 < c1 < c2 < 1");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (!(stall_grad_tol >= grad_tol)) throw std::invalid_argument("stall_grad_tol must be at least grad_tol");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (memory < 1) throw std::invalid_argument("L-BFGS memory must be positive");
}

std::string to_string(BfgsStatus status) {
  switch (status) {
    case BfgsStatus::converged: return "converged";
    case BfgsStatus::max_iterations: return "max_iterations";
    case BfgsStatus::roundoff_stall: return "roundoff_stall";
    case BfgsStatus::line_search_failure: return "line_search_failure";
    case BfgsStatus::diverged: return "diverged";
  }
  return "unknown";
}

namespace {

struct Trial {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd g;
};

// Minimizer of the cubic through (a, fa, da), (b, fb, db); NaN if none.
double cubic_minimizer(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  return b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
}

class LineSearch {
 public:
  LineSearch(const Objective& objective, const BfgsConfig& cfg, int& evaluations)
      : objective_(objective), cfg_(cfg), evaluations_(evaluations) {}

  // Returns true with `out` set on a strong-Wolfe step. On failure `out`
  // holds the best sufficient-decrease point seen (alpha = 0 if none).
  bool search(const Eigen::VectorXd& x, double f0, const Eigen::VectorXd& d, double slope0,
              double alpha_init, Trial& out) {
    f0_ = f0;
    slope0_ = slope0;
    noise_ = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f0);
    best_ = Trial{};
    best_.f = f0;
    Trial prev;
    prev.f = f0;
    prev.slope = slope0;
    double alpha = alpha_init;
    for (int i = 0; i < cfg_.max_line_search_evals; ++i) {
      Trial cur = eval(x, d, alpha);
      if (!sufficient(cur) || (i > 0 && cur.f > prev.f + noise_)) {
        if (zoom(x, d, prev, cur, out)) return true;
        out = best_;
        return false;
      }
      if (std::abs(cur.slope) <= -cfg_.c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) {
        if (zoom(x, d, cur, prev, out)) return true;
        out = best_;
        return false;
      }
      prev = std::move(cur);
      alpha *= 4.0;
    }
    out = best_;
    return false;
  }

 private:
  bool armijo(const Trial& t) const {
    return std::isfinite(t.f) && t.f <= f0_ + cfg_.c1 * t.alpha * slope0_;
  }

  // Armijo, or the approximate Wolfe test of Hager and Zhang when the
  // decrease is lost in rounding: no increase of f and a slope bounded by
  // (1 - 2 c1)|slope0|.
  bool sufficient(const Trial& t) const {
    if (armijo(t)) return true;
    return std::isfinite(t.f) && t.f <= f0_ && f0_ - t.f <= noise_ &&
           t.slope <= (2.0 * cfg_.c1 - 1.0) * slope0_;
  }

  Trial eval(const Eigen::VectorXd& x, const Eigen::VectorXd& d, double alpha) {
    Trial t;
    t.alpha = alpha;
    t.x = x + alpha * d;
    t.f = objective_(t.x, t.g);
    ++evaluations_;
    t.slope = std::isfinite(t.f) ? t.g.dot(d) : std::numeric_limits<double>::quiet_NaN();
    if (sufficient(t) && t.f < best_.f) best_ = t;
    return t;
  }

  bool zoom(const Eigen::VectorXd& x, const Eigen::VectorXd& d, Trial lo, Trial hi, Trial& out) {
    for (int i = 0; i < cfg_.max_line_search_evals; ++i) {
      const double a = lo.alpha, b = hi.alpha;
      const double width = std::abs(b - a);
      if (width <= 1e-16 * std::max(std::abs(a), std::abs(b))) return false;
      double alpha = std::numeric_limits<double>::quiet_NaN();
      if (std::isfinite(hi.f) && std::isfinite(hi.slope)) {
        alpha = cubic_minimizer(a, lo.f, lo.slope, b, hi.f, hi.slope);
      }
      const double lo_bound = std::min(a, b) + 0.1 * width;
      const double hi_bound = std::max(a, b) - 0.1 * width;
      if (!std::isfinite(alpha) || alpha < lo_bound || alpha > hi_bound) alpha = 0.5 * (a + b);
      Trial cur = eval(x, d, alpha);
      if (!sufficient(cur) || cur.f > lo.f + noise_ || (cur.f >= lo.f - noise_ && cur.slope > 0.0)) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -cfg_.c2 * slope0_) {
          out = std::move(cur);
          return true;
        }
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    return false;
  }

  const Objective& objective_;
  const BfgsConfig& cfg_;
  int& evaluations_;
  double f0_ = 0.0;
  double slope0_ = 0.0;
  double noise_ = 0.0;
  Trial best_;
};

// Inverse-Hessian model: dense matrix or limited-memory pairs.
class InverseHessian {
 public:
  InverseHessian(Eigen::Index n, const BfgsConfig& cfg)
      : dense_(static_cast<std::size_t>(n) <= cfg.dense_limit), memory_(static_cast<std::size_t>(cfg.memory)) {
    if (dense_) h_ = Eigen::MatrixXd::Identity(n, n);
  }

  void reset() {
    initialized_ = false;
    gamma_ = 1.0;
    if (dense_) h_.setIdentity();
    s_.clear();
    y_.clear();
  }

  Eigen::VectorXd direction(const Eigen::VectorXd& g) const {
    if (dense_) return -(h_ * g);
    Eigen::VectorXd q = g;
    std::vector<double> alpha(s_.size());
    for (std::size_t i = s_.size(); i-- > 0;) {
      alpha[i] = s_[i].dot(q) / s_[i].dot(y_[i]);
      q -= alpha[i] * y_[i];
    }
    q *= gamma_;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const double beta = y_[i].dot(q) / s_[i].dot(y_[i]);
      q += (alpha[i] - beta) * s_[i];
    }
    return -q;
  }

  // Returns false when the pair is rejected.
  bool update(const Eigen::VectorXd& s, const Eigen::VectorXd& y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-12 * s.norm() * y.norm())) return false;
    if (!initialized_) {
      gamma_ = sy / y.squaredNorm();
      if (dense_) h_ *= gamma_;
      initialized_ = true;
    }
    if (dense_) {
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h_ * y;
      const double yhy = y.dot(hy);
      h_.noalias() += (rho * rho * yhy + rho) * s * s.transpose();
      h_.noalias() -= rho * (hy * s.transpose() + s * hy.transpose());
    } else {
      gamma_ = sy / y.squaredNorm();
      s_.push_back(s);
      y_.push_back(y);
      if (s_.size() > memory_) {
        s_.pop_front();
        y_.pop_front();
      }
    }
    return true;
  }

 private:
  bool dense_;
  std::size_t memory_;
  bool initialized_ = false;
  double gamma_ = 1.0;
  Eigen::MatrixXd h_;
  std::deque<Eigen::VectorXd> s_, y_;
};

}  // namespace

BfgsResult bfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const BfgsConfig& cfg) {
  cfg.validate();
  BfgsResult result;
  result.x = std::move(x0);
  result.value = objective(result.x, result.gradient);
  result.evaluations = 1;
  if (!std::isfinite(result.value) || !result.gradient.allFinite()) {
    result.status = BfgsStatus::diverged;
    return result;
  }
  const double g0 = result.gradient.lpNorm<Eigen::Infinity>();
  const double threshold = cfg.grad_tol * (1.0 + g0);
  result.value_history.push_back(result.value);
  result.grad_norm_history.push_back(g0);
  if (g0 <= threshold) {
    result.status = BfgsStatus::converged;
    return result;
  }

  InverseHessian hessian(result.x.size(), cfg);
  LineSearch line_search(objective, cfg, result.evaluations);
  bool restarted = false;

  while (result.iterations < cfg.max_iters) {
    Eigen::VectorXd d = hessian.direction(result.gradient);
    double slope = result.gradient.dot(d);
    if (!(slope < 0.0)) {
      hessian.reset();
      d = -result.gradient;
      slope = result.gradient.dot(d);
    }
    // first step along -g: unit length in the max-norm
    const double alpha0 = restarted || result.iterations == 0
                              ? 1.0 / std::max(1.0, d.lpNorm<Eigen::Infinity>())
                              : 1.0;
    Trial step;
    const bool ok = line_search.search(result.x, result.value, d, slope, alpha0, step);
    if (!ok) {
      ++result.line_search_failures;
      if (step.alpha == 0.0) {
        if (restarted) {
          // gradient scale f / x covers restarts from a point that is already stationary
          const double scale =
              std::max(g0, std::abs(result.value) / (1.0 + result.x.lpNorm<Eigen::Infinity>()));
          result.status = result.grad_norm_history.back() <= cfg.stall_grad_tol * (1.0 + scale)
                              ? BfgsStatus::roundoff_stall
                              : BfgsStatus::line_search_failure;
          return result;
        }
        hessian.reset();
        restarted = true;
        continue;
      }
    }
    restarted = false;
    ++result.iterations;
    const Eigen::VectorXd s = step.x - result.x;
    const Eigen::VectorXd y = step.g - result.gradient;
    result.x = std::move(step.x);
    result.value = step.f;
    result.gradient = std::move(step.g);
    const double gnorm = result.gradient.lpNorm<Eigen::Infinity>();
    result.value_history.push_back(result.value);
    result.grad_norm_history.push_back(gnorm);
    if (!result.gradient.allFinite()) {
      result.status = BfgsStatus::diverged;
      return result;
    }
    if (gnorm <= threshold) {
      result.status = BfgsStatus::converged;
      return result;
    }
    hessian.update(s, y);
  }
  result.status = BfgsStatus::max_iterations;
  return result;
}

}  // namespace pxdg
