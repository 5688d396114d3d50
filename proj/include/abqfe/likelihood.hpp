#pragma once

#include <cmath>
#include <stdexcept>

namespace abqfe {

inline constexpr double kPi = 3.14159265358979323846;

// Closed-form binary readout probabilities for GHZ Ramsey interferometry.
// Both readout families have the form
//   L_u(f) = (1 + u * xi * C * trig(Phi)) / 2,    Phi = 2 pi N T (f - f_L) + phi,
// with trig = cos for the parity readout and trig = sin for the
// interaction-based sign readout. u = +1 or -1 is the binary outcome.

// Parity readout prefactor (-1)^N.
inline int xi_parity(int n_atoms) { return n_atoms % 2 == 0 ? 1 : -1; }

// Sign readout prefactor (-1)^ceil(N/2 + 1): +1 for N mod 4 in {1, 2}, else -1.
inline int xi_sign(int n_atoms) {
  int r = n_atoms % 4;
  return (r == 1 || r == 2) ? 1 : -1;
}

// Fringe contrast of an N-atom GHZ state after interrogation time t under
// collective dephasing at rate gamma, times a detection contrast factor.
inline double contrast_under_noise(double gamma, double t, int n_atoms, double c_detect = 1.0) {
  return std::exp(-gamma * t * double(n_atoms) * double(n_atoms) / 2.0) * c_detect;
}

// One interrogation setting. Frequencies are offsets from an arbitrary
// reference; only differences f - f_lo enter the physics.
struct ReadoutSetting {
  int n_atoms = 1;
  double t = 0;         // interrogation time, s
  double contrast = 1;  // C in [0, 1]
  double f_lo = 0;      // local-oscillator frequency, Hz
  double phase = 0;     // auxiliary phase phi, rad
};

inline double fringe_arg(const ReadoutSetting& s, double f) {
  return 2.0 * kPi * double(s.n_atoms) * s.t * (f - s.f_lo) + s.phase;
}

inline double likelihood_sign(int u, const ReadoutSetting& s, double f) {
  return 0.5 * (1.0 + u * xi_sign(s.n_atoms) * s.contrast * std::sin(fringe_arg(s, f)));
}

inline double likelihood_parity(int u, const ReadoutSetting& s, double f) {
  return 0.5 * (1.0 + u * xi_parity(s.n_atoms) * s.contrast * std::cos(fringe_arg(s, f)));
}

// Floors the argument so that exact zeros from C = 1 fringes map to a large
// negative number instead of -inf; posterior updates stay well defined.
inline double safe_log(double p) { return std::log(p < 1e-300 ? 1e-300 : p); }

inline double log_likelihood_sign(int u, const ReadoutSetting& s, double f) {
  return safe_log(likelihood_sign(u, s, f));
}

inline double log_likelihood_parity(int u, const ReadoutSetting& s, double f) {
  return safe_log(likelihood_parity(u, s, f));
}

inline double lchoose(int n, int k) {
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0);
}

// log P(mu successes in m trials at success probability p). lgamma keeps this
// finite for copy counts far beyond what a table of binomial coefficients
// would allow.
inline double log_binom_pmf(int m, int mu, double p) {
  if (mu < 0 || mu > m) throw std::invalid_argument("log_binom_pmf: mu out of range");
  return lchoose(m, mu) + double(mu) * safe_log(p) + double(m - mu) * safe_log(1.0 - p);
}

// Fisher information about f carried by one copy measured with the sign
// readout. With L+ + L- = 1 the two-outcome sum collapses to
//   F = (2 pi N T)^2 C^2 cos^2(Phi) / (1 - C^2 sin^2(Phi)),
// which stays finite for C = 1 where the naive 1/L form hits 0/0.
inline double fisher_per_copy_sign(const ReadoutSetting& s, double f) {
  double a = fringe_arg(s, f);
  double k = 2.0 * kPi * double(s.n_atoms) * s.t;
  double sn = std::sin(a), cs = std::cos(a);
  double denom = 1.0 - s.contrast * s.contrast * sn * sn;
  if (denom < 1e-12) return k * k;
  return k * k * s.contrast * s.contrast * cs * cs / denom;
}

}  // namespace abqfe
