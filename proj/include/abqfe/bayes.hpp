#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace abqfe {

struct Window {
  double lo = 0, hi = 0;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double f) const { return f >= lo && f <= hi; }
};

// Thrown when an update or renormalization leaves no representable mass on the
// support grid. Callers keep the pre-update state and may count the event.
struct DegeneratePosteriorError : std::runtime_error {
  DegeneratePosteriorError() : std::runtime_error("posterior mass vanished on the support grid") {}
};

// Probability density over a frequency window, stored on a uniform grid and
// normalized with trapezoid quadrature. Updates run in log space with the peak
// subtracted before exponentiating so that large copy counts cannot underflow
// the whole grid at once.
class Posterior {
 public:
  Posterior(Window w, int points) { reset_flat(w, points); }

  void reset_flat(Window w, int points) {
    check(w, points);
    win_ = w;
    h_ = w.width() / double(points - 1);
    p_.assign(std::size_t(points), 1.0 / w.width());
  }

  // Gaussian prior truncated to the window; the mean may lie outside it.
  void reset_gaussian(Window w, int points, double mean, double sigma) {
    check(w, points);
    if (!(sigma > 0)) throw std::invalid_argument("Posterior: sigma must be positive");
    win_ = w;
    h_ = w.width() / double(points - 1);
    p_.resize(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      double z = (node(i) - mean) / sigma;
      p_[std::size_t(i)] = std::exp(-0.5 * z * z);
    }
    normalize();
  }

  int points() const { return int(p_.size()); }
  Window window() const { return win_; }
  double step() const { return h_; }
  double node(int i) const { return win_.lo + h_ * double(i); }
  const std::vector<double>& density() const { return p_; }

  // Multiplies in a likelihood supplied as log L(f). Leaves the state
  // untouched if every grid point underflows.
  template <class LogLik>
  void update(LogLik&& loglik) {
    const int n = points();
    scratch_.resize(p_.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double v = std::log(p_[std::size_t(i)]) + loglik(node(i));
      scratch_[std::size_t(i)] = v;
      if (v > peak) peak = v;
    }
    if (!(peak > -std::numeric_limits<double>::infinity())) throw DegeneratePosteriorError{};
    for (int i = 0; i < n; ++i) p_[std::size_t(i)] = std::exp(scratch_[std::size_t(i)] - peak);
    normalize();
  }

  void normalize() {
    double z = integral(p_);
    if (!(z > 0) || !std::isfinite(z)) throw DegeneratePosteriorError{};
    for (auto& v : p_) v /= z;
  }

  double mean() const {
    double s = 0;
    for (int i = 0; i < points(); ++i) s += weight(i) * p_[std::size_t(i)] * node(i);
    return s;
  }

  double stddev() const {
    double m = mean(), s = 0;
    for (int i = 0; i < points(); ++i) {
      double d = node(i) - m;
      s += weight(i) * p_[std::size_t(i)] * d * d;
    }
    return std::sqrt(std::max(0.0, s));
  }

  // Moves the support to the intersection of `target` with the current window
  // and resamples the density there by linear interpolation.
  void rewindow(Window target, int points) {
    Window w{std::max(target.lo, win_.lo), std::min(target.hi, win_.hi)};
    if (!(w.hi > w.lo)) throw std::invalid_argument("Posterior: rewindow target misses the support");
    if (points < 2) throw std::invalid_argument("Posterior: need at least two grid points");
    const int old_n = this->points();
    std::vector<double> q(static_cast<std::size_t>(points));
    double nh = w.width() / double(points - 1);
    for (int i = 0; i < points; ++i) {
      double x = (w.lo + nh * double(i) - win_.lo) / h_;
      int k = std::clamp(int(std::floor(x)), 0, old_n - 2);
      double t = std::clamp(x - double(k), 0.0, 1.0);
      q[std::size_t(i)] = (1.0 - t) * p_[std::size_t(k)] + t * p_[std::size_t(k + 1)];
    }
    win_ = w;
    h_ = nh;
    p_ = std::move(q);
    normalize();
  }

 private:
  static void check(Window w, int points) {
    if (!(w.hi > w.lo)) throw std::invalid_argument("Posterior: window must have positive width");
    if (points < 2) throw std::invalid_argument("Posterior: need at least two grid points");
  }

  // Trapezoid quadrature weight of node i times the grid step.
  double weight(int i) const { return (i == 0 || i == points() - 1) ? 0.5 * h_ : h_; }

  double integral(const std::vector<double>& v) const {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i];
    s -= 0.5 * (v.front() + v.back());
    return s * h_;
  }

  Window win_{};
  double h_ = 0;
  std::vector<double> p_;
  std::vector<double> scratch_;
};

}  // namespace abqfe
