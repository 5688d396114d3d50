#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace abqfe {

// Replica aggregate of estimation errors (f_est - f_true).
struct McSummary {
  double mean = 0;    // mean error (bias)
  double spread = 0;  // standard deviation about the mean
  double rmse = 0;    // sqrt(mean squared error)
  int n = 0;
};

inline McSummary summarize(const std::vector<double>& errors) {
  if (errors.empty()) throw std::invalid_argument("summarize: empty sample");
  McSummary s;
  s.n = int(errors.size());
  double m = 0, q = 0;
  for (double e : errors) {
    m += e;
    q += e * e;
  }
  m /= double(s.n);
  q /= double(s.n);
  s.mean = m;
  s.rmse = std::sqrt(q);
  s.spread = std::sqrt(std::max(0.0, q - m * m));
  return s;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + long(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + long(mid));
  return 0.5 * (lo + hi);
}

// Overlapping Allan variance of a fractional-frequency series sampled at tau0:
//   sigma_y^2(m tau0) = sum_j (P[j+2m] - 2 P[j+m] + P[j])^2 / (2 m^2 (L - 2m + 1))
// over the prefix sums P (P[0] = 0, P[j] = y_0 + ... + y_{j-1}).
inline double allan_sigma(const std::vector<double>& y, int m) {
  const int l = int(y.size());
  if (m < 1 || 2 * m >= l) throw std::invalid_argument("allan_sigma: averaging factor out of range");
  std::vector<double> p(std::size_t(l + 1), 0.0);
  for (int j = 0; j < l; ++j) p[std::size_t(j + 1)] = p[std::size_t(j)] + y[std::size_t(j)];
  double acc = 0;
  for (int j = 0; j + 2 * m <= l; ++j) {
    double d = p[std::size_t(j + 2 * m)] - 2.0 * p[std::size_t(j + m)] + p[std::size_t(j)];
    acc += d * d;
  }
  return std::sqrt(acc / (2.0 * double(m) * double(m) * double(l - 2 * m + 1)));
}

// (tau, sigma_y) pairs for m = 1 .. m_max (capped at floor((L-1)/2)).
inline std::vector<std::pair<double, double>> overlapping_allan(const std::vector<double>& y,
                                                                double tau0, int m_max) {
  const int l = int(y.size());
  if (l < 3) throw std::invalid_argument("overlapping_allan: need at least three samples");
  std::vector<std::pair<double, double>> out;
  for (int m = 1; m <= m_max && 2 * m < l; ++m)
    out.emplace_back(double(m) * tau0, allan_sigma(y, m));
  return out;
}

// Least-squares slope of log10(y) against log10(x).
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need two aligned points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("fit_loglog_slope: values must be positive");
    double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = double(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Least-squares amplitude A of the model y = A / sqrt(tau) through Allan points.
inline double allan_white_amplitude(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) throw std::invalid_argument("allan_white_amplitude: no points");
  double num = 0, den = 0;
  for (const auto& [tau, sig] : pts) {
    num += sig / std::sqrt(tau);
    den += 1.0 / tau;
  }
  return num / den;
}

// Half-width of the contiguous band around delta = 0 on which rmse stays at or
// below the threshold. The band is grown outward from the grid point nearest
// zero and clips at the scan edges.
inline double half_width(const std::vector<double>& deltas, const std::vector<double>& rmse,
                         double threshold) {
  if (deltas.size() != rmse.size() || deltas.empty())
    throw std::invalid_argument("half_width: need aligned nonempty grids");
  std::size_t c = 0;
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (std::abs(deltas[i]) < std::abs(deltas[c])) c = i;
  if (rmse[c] > threshold) return 0.0;
  std::size_t lo = c, hi = c;
  while (lo > 0 && rmse[lo - 1] <= threshold) --lo;
  while (hi + 1 < deltas.size() && rmse[hi + 1] <= threshold) ++hi;
  return 0.5 * (deltas[hi] - deltas[lo]);
}

// Frequency instability figure: estimator deviation scaled by the square root
// of the cycle duration. Halving the deviation at fixed cycle time halves it;
// quadrupling the cycle time doubles it.
inline double sensitivity(double std_hz, double t_cycle_s) {
  return std_hz * std::sqrt(t_cycle_s);
}

}  // namespace abqfe
