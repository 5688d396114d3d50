#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "abqfe/likelihood.hpp"

namespace abqfe {

// One GHZ ensemble: M identical copies of an N-atom state interrogated in
// parallel each cycle.
struct Ensemble {
  int n_atoms = 1;
  int copies = 1;
};

// Full configuration of one adaptive estimation run.
struct Scheme {
  std::vector<Ensemble> ensembles;
  double t_min = 0.75e-3;  // s
  double t_max = 3e-3;     // s
  double alpha = 1.0;      // interrogation-time growth parameter
  int steps = 13;          // adaptive steps per estimation cycle
  bool aux_phase = true;   // pi/2 readout phase on the first ensemble while T_j < t_max
  double gamma = 0.0;      // collective dephasing rate, 1/s
  double c_detect = 1.0;   // detection contrast factor

  int n0() const {
    if (ensembles.empty()) throw std::invalid_argument("Scheme: no ensembles");
    return ensembles.front().n_atoms;
  }

  double n_total() const {
    double s = 0;
    for (const auto& e : ensembles) s += double(e.copies) * double(e.n_atoms);
    return s;
  }

  // kappa * sqrt(N_t) = sqrt(sum_k M_k N_k^2); the collective scale that sets
  // the single-shot precision bound.
  double kappa_sqrt_nt() const {
    double s = 0;
    for (const auto& e : ensembles) s += double(e.copies) * double(e.n_atoms) * double(e.n_atoms);
    return std::sqrt(s);
  }

  double kappa() const { return kappa_sqrt_nt() / std::sqrt(n_total()); }
};

// T_0 = t_min, then T_j = min(t_min * alpha * (1 + alpha^2)^((j-1)/2), t_max).
inline double time_step(const Scheme& s, int j) {
  if (j < 0) throw std::invalid_argument("time_step: negative step index");
  if (j == 0) return s.t_min;
  double t = s.t_min * s.alpha * std::pow(1.0 + s.alpha * s.alpha, 0.5 * double(j - 1));
  return std::min(t, s.t_max);
}

inline double total_time(const Scheme& s) {
  double t = 0;
  for (int j = 0; j < s.steps; ++j) t += time_step(s, j);
  return t;
}

// sum_{i <= j} T_i^2 for the performed sequence.
inline double sum_t_squared(const Scheme& s, int j) {
  double acc = 0;
  for (int i = 0; i <= j; ++i) {
    double t = time_step(s, i);
    acc += t * t;
  }
  return acc;
}

// Posterior-width bound after step j:
//   1 / (2 pi kappa sqrt(N_t) sqrt(sum_{i<=j} T_i^2)).
// Before the cap the sum is dominated by the last term and the bound falls as
// 1/(total time); after the cap it falls as 1/sqrt(total time).
inline double theory_std(const Scheme& s, int j) {
  return 1.0 / (2.0 * kPi * s.kappa_sqrt_nt() * std::sqrt(sum_t_squared(s, j)));
}

// The growth parameter and the re-window gain g are linked by
//   alpha = kappa pi sqrt(N_t) / (g N_0).
inline double g_of_alpha(const Scheme& s) {
  return s.kappa_sqrt_nt() * kPi / (s.alpha * double(s.n0()));
}

inline double alpha_of_g(const Scheme& s, double g) {
  return s.kappa_sqrt_nt() * kPi / (g * double(s.n0()));
}

// Exponentially cascaded ensembles. Levels k = 1..K carry N_k = 2^(k-1) N0
// atoms and M_k = m_last + v (K - k) copies. With split_first the level-1
// copies are divided into two ensembles so one of them can carry the
// auxiliary readout phase.
inline std::vector<Ensemble> cascade_levels(int n0, int levels, int m_last, int v, bool split_first) {
  if (levels < 1) throw std::invalid_argument("cascade_levels: need at least one level");
  std::vector<Ensemble> out;
  int m1 = m_last + v * (levels - 1);
  if (split_first) {
    int a = m1 / 2;
    out.push_back({n0, a});
    out.push_back({n0, m1 - a});
  } else {
    out.push_back({n0, m1});
  }
  for (int k = 2; k <= levels; ++k) {
    int n = n0 << (k - 1);
    out.push_back({n, m_last + v * (levels - k)});
  }
  return out;
}

}  // namespace abqfe
