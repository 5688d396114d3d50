#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "abqfe/bayes.hpp"
#include "abqfe/likelihood.hpp"
#include "abqfe/rng.hpp"
#include "abqfe/scheme.hpp"

namespace abqfe {

// Thrown when an exhaustive enumeration would exceed the configured budget.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

struct RunOptions {
  int grid_points = 2048;
  bool trace = false;         // record one StepRecord per adaptive step
  bool keep_density = false;  // keep the final posterior density
};

struct StepRecord {
  int j = 0;
  double t_j = 0;       // interrogation time of this step, s
  double f_est = 0;     // posterior mean after this step, Hz
  double post_std = 0;  // posterior standard deviation after this step, Hz
  double f_lo = 0;      // LO frequency used during this step, Hz
  Window support{};     // prior support in effect during this step
};

struct RunResult {
  double f_est = 0;
  int degenerate_steps = 0;  // updates rejected for vanishing posterior mass
  std::vector<StepRecord> steps;
  std::vector<std::pair<double, double>> final_density;  // (f, pdf) when requested
};

// Initial prior support: one full fringe period of the shortest interrogation
// when the auxiliary phase disambiguates the mirror solution, half a period
// otherwise. Centered on the initial LO frequency.
inline Window initial_window(const Scheme& s, double f_lo0) {
  double w = (s.aux_phase ? 1.0 : 0.5) / (double(s.n0()) * s.t_min);
  return {f_lo0 - 0.5 * w, f_lo0 + 0.5 * w};
}

// Multiplies a binomial sign-readout outcome (mu of `copies` positive) into
// the posterior. One sine evaluation per grid node.
inline void update_sign_counts(Posterior& post, const ReadoutSetting& rs, int copies, int mu) {
  post.update([&](double f) {
    double lp = likelihood_sign(+1, rs, f);
    return double(mu) * safe_log(lp) + double(copies - mu) * safe_log(1.0 - lp);
  });
}

// One adaptive estimation cycle. Every ensemble is interrogated for T_j each
// step. Before a step the LO moves to the posterior mean and, while
// T_min < T_j < T_max, the support shrinks to one fringe period of the coming
// interrogation. Shrinking before the measurement keeps every alias of the
// upcoming fringe outside the support.
inline RunResult run_abqfe(const Scheme& s, double f_true, double f_lo0, Rng& rng,
                           const RunOptions& opt = {}) {
  if (s.ensembles.empty()) throw std::invalid_argument("run_abqfe: no ensembles");
  RunResult out;
  Posterior post(initial_window(s, f_lo0), opt.grid_points);
  double f_lo = f_lo0;
  double fe = f_lo0;
  for (int j = 0; j < s.steps; ++j) {
    double tj = time_step(s, j);
    if (j > 0) {
      f_lo = fe;
      if (tj > s.t_min && tj < s.t_max) {
        double half = (s.aux_phase ? 0.5 : 0.25) / (double(s.n0()) * tj);
        post.rewindow({f_lo - half, f_lo + half}, opt.grid_points);
      }
    }
    for (std::size_t k = 0; k < s.ensembles.size(); ++k) {
      const Ensemble& e = s.ensembles[k];
      double phi = (k == 0 && s.aux_phase && tj < s.t_max) ? 0.5 * kPi : 0.0;
      ReadoutSetting rs{e.n_atoms, tj, contrast_under_noise(s.gamma, tj, e.n_atoms, s.c_detect),
                        f_lo, phi};
      int mu = rng.bernoulli_count(e.copies, likelihood_sign(+1, rs, f_true));
      try {
        update_sign_counts(post, rs, e.copies, mu);
      } catch (const DegeneratePosteriorError&) {
        ++out.degenerate_steps;  // prior retained, cycle continues
      }
    }
    fe = post.mean();
    if (opt.trace) out.steps.push_back({j, tj, fe, post.stddev(), f_lo, post.window()});
  }
  out.f_est = fe;
  if (opt.keep_density) {
    out.final_density.reserve(std::size_t(post.points()));
    for (int i = 0; i < post.points(); ++i)
      out.final_density.emplace_back(post.node(i), post.density()[std::size_t(i)]);
  }
  return out;
}

// Non-adaptive arm: fixed interrogation time, fixed LO, fixed phases, no
// re-windowing. Used for the fixed-T baselines and exhaustive averages.
struct ArmEnsemble {
  int n_atoms = 1;
  int copies = 1;
  double phase = 0;  // auxiliary readout phase, rad
};

struct FrequentistSetting {
  std::vector<ArmEnsemble> ensembles;
  double t = 0;             // interrogation time, s
  double f_lo = 0;          // LO frequency, Hz
  Window window{};          // prior support
  double gauss_mean = 0;    // used when gauss_sigma > 0
  double gauss_sigma = 0;   // 0 selects the flat prior
  double gamma = 0;         // collective dephasing rate, 1/s
  double c_detect = 1;      // detection contrast factor
};

inline ReadoutSetting arm_readout(const FrequentistSetting& a, const ArmEnsemble& e) {
  return {e.n_atoms, a.t, contrast_under_noise(a.gamma, a.t, e.n_atoms, a.c_detect), a.f_lo,
          e.phase};
}

inline Posterior make_prior(const FrequentistSetting& a, int grid_points) {
  Posterior post(a.window, grid_points);
  if (a.gauss_sigma > 0) post.reset_gaussian(a.window, grid_points, a.gauss_mean, a.gauss_sigma);
  return post;
}

// `repeats` full passes over the ensembles with everything held fixed. The
// posterior depends on the outcomes only through the summed counts, so the
// folded form draws each ensemble's total count once and performs a single
// grid update per ensemble.
inline RunResult run_frequentist(const FrequentistSetting& a, int repeats, double f_true, Rng& rng,
                                 int grid_points) {
  RunResult out;
  Posterior post = make_prior(a, grid_points);
  for (const auto& e : a.ensembles) {
    ReadoutSetting rs = arm_readout(a, e);
    int trials = repeats * e.copies;
    int mu = rng.bernoulli_count(trials, likelihood_sign(+1, rs, f_true));
    try {
      update_sign_counts(post, rs, trials, mu);
    } catch (const DegeneratePosteriorError&) {
      ++out.degenerate_steps;
    }
  }
  out.f_est = post.mean();
  return out;
}

// As run_frequentist but one pass at a time, recording the posterior mean and
// standard deviation after each pass. Used by the precision-versus-time scans.
inline std::vector<StepRecord> run_frequentist_trace(const FrequentistSetting& a, int repeats,
                                                     double f_true, Rng& rng, int grid_points,
                                                     int* degenerate = nullptr) {
  std::vector<StepRecord> out;
  out.reserve(static_cast<std::size_t>(repeats));
  Posterior post = make_prior(a, grid_points);
  for (int r = 0; r < repeats; ++r) {
    for (const auto& e : a.ensembles) {
      ReadoutSetting rs = arm_readout(a, e);
      int mu = rng.bernoulli_count(e.copies, likelihood_sign(+1, rs, f_true));
      try {
        update_sign_counts(post, rs, e.copies, mu);
      } catch (const DegeneratePosteriorError&) {
        if (degenerate) ++*degenerate;
      }
    }
    out.push_back({r, a.t, post.mean(), post.stddev(), a.f_lo, post.window()});
  }
  return out;
}

// Exhaustive average over every outcome tuple of a non-adaptive arm.
struct ExhaustiveResult {
  double rmse = 0;
  double bias = 0;
  double variance = 0;
  double mean_est = 0;
  std::int64_t tuples = 0;
};

inline std::int64_t exhaustive_tuple_count(const FrequentistSetting& a, int repeats,
                                           std::int64_t budget = 10'000'000) {
  std::int64_t n = 1;
  for (const auto& e : a.ensembles) {
    n *= std::int64_t(repeats) * e.copies + 1;
    if (n > budget)
      throw ResourceLimitError("exhaustive enumeration exceeds the tuple budget of " +
                               std::to_string(budget));
  }
  return n;
}

// Sweeps the true frequency over f_lo + detunings. The per-tuple estimate does
// not depend on the true frequency, so a single enumeration serves the whole
// curve; only the tuple weights (products of binomial pmfs) vary with it.
inline std::vector<ExhaustiveResult> exhaustive_curve(const FrequentistSetting& a, int repeats,
                                                      const std::vector<double>& detunings,
                                                      int grid_points) {
  const std::int64_t total = exhaustive_tuple_count(a, repeats);
  const int nk = int(a.ensembles.size());
  const int nd = int(detunings.size());
  const int np = grid_points;

  Posterior prior = make_prior(a, np);
  std::vector<double> lp0(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) lp0[std::size_t(i)] = std::log(prior.density()[std::size_t(i)]);

  // row[k][mu][i] = log P(outcomes | f at node i) for ensemble k having mu of
  // its trials positive.
  std::vector<int> trials(static_cast<std::size_t>(nk));
  std::vector<std::vector<std::vector<double>>> row(static_cast<std::size_t>(nk));
  // pmf[k][d][mu] = P(mu | true frequency f_lo + detunings[d]).
  std::vector<std::vector<std::vector<double>>> pmf(static_cast<std::size_t>(nk));
  for (int k = 0; k < nk; ++k) {
    const ArmEnsemble& e = a.ensembles[std::size_t(k)];
    ReadoutSetting rs = arm_readout(a, e);
    int m = repeats * e.copies;
    trials[std::size_t(k)] = m;
    std::vector<double> lg_p(static_cast<std::size_t>(np)), lg_m(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
      double lp = likelihood_sign(+1, rs, prior.node(i));
      lg_p[std::size_t(i)] = safe_log(lp);
      lg_m[std::size_t(i)] = safe_log(1.0 - lp);
    }
    row[std::size_t(k)].assign(std::size_t(m + 1), std::vector<double>(static_cast<std::size_t>(np)));
    for (int mu = 0; mu <= m; ++mu)
      for (int i = 0; i < np; ++i)
        row[std::size_t(k)][std::size_t(mu)][std::size_t(i)] =
            double(mu) * lg_p[std::size_t(i)] + double(m - mu) * lg_m[std::size_t(i)];
    pmf[std::size_t(k)].assign(std::size_t(nd), std::vector<double>(static_cast<std::size_t>(m + 1)));
    for (int d = 0; d < nd; ++d) {
      double pt = likelihood_sign(+1, rs, a.f_lo + detunings[std::size_t(d)]);
      for (int mu = 0; mu <= m; ++mu)
        pmf[std::size_t(k)][std::size_t(d)][std::size_t(mu)] = std::exp(log_binom_pmf(m, mu, pt));
    }
  }

  std::vector<double> sw(static_cast<std::size_t>(nd), 0), swf(static_cast<std::size_t>(nd), 0), swf2(static_cast<std::size_t>(nd), 0);
  std::vector<int> digit(static_cast<std::size_t>(nk), 0);
  std::vector<double> lv(static_cast<std::size_t>(np));
  for (std::int64_t tup = 0; tup < total; ++tup) {
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < np; ++i) {
      double v = lp0[std::size_t(i)];
      for (int k = 0; k < nk; ++k) v += row[std::size_t(k)][std::size_t(digit[std::size_t(k)])][std::size_t(i)];
      lv[std::size_t(i)] = v;
      if (v > peak) peak = v;
    }
    // The grid step cancels in the posterior-mean ratio, so the trapezoid
    // weights reduce to halving the endpoints.
    double z = 0, zf = 0;
    for (int i = 0; i < np; ++i) {
      double p = std::exp(lv[std::size_t(i)] - peak);
      double wq = (i == 0 || i == np - 1) ? 0.5 : 1.0;
      z += wq * p;
      zf += wq * p * prior.node(i);
    }
    double fe = (z > 0) ? zf / z : prior.window().center();
    for (int d = 0; d < nd; ++d) {
      double w = 1;
      for (int k = 0; k < nk; ++k) w *= pmf[std::size_t(k)][std::size_t(d)][std::size_t(digit[std::size_t(k)])];
      sw[std::size_t(d)] += w;
      swf[std::size_t(d)] += w * fe;
      swf2[std::size_t(d)] += w * fe * fe;
    }
    for (int k = 0; k < nk; ++k) {
      if (++digit[std::size_t(k)] <= trials[std::size_t(k)]) break;
      digit[std::size_t(k)] = 0;
    }
  }

  std::vector<ExhaustiveResult> out(static_cast<std::size_t>(nd));
  for (int d = 0; d < nd; ++d) {
    double ft = a.f_lo + detunings[std::size_t(d)];
    double w = sw[std::size_t(d)];
    double m1 = swf[std::size_t(d)] / w;
    double m2 = swf2[std::size_t(d)] / w;
    ExhaustiveResult& r = out[std::size_t(d)];
    r.mean_est = m1;
    r.bias = m1 - ft;
    r.variance = std::max(0.0, m2 - m1 * m1);
    r.rmse = std::sqrt(std::max(0.0, m2 - 2.0 * ft * m1 + ft * ft));
    r.tuples = total;
  }
  return out;
}

inline ExhaustiveResult exhaustive_rmse(const FrequentistSetting& a, int repeats, double f_true,
                                        int grid_points) {
  return exhaustive_curve(a, repeats, {f_true - a.f_lo}, grid_points).front();
}

// Total Fisher information of one arm cycle about the true frequency.
inline double fisher_total(const FrequentistSetting& a, int repeats, double f_true) {
  double fi = 0;
  for (const auto& e : a.ensembles)
    fi += double(repeats) * double(e.copies) * fisher_per_copy_sign(arm_readout(a, e), f_true);
  return fi;
}

// Cramer-Rao bound on the standard deviation of the (biased) exhaustive
// estimator: sqrt((d mean / d f)^2 / F). The slope uses a five-point stencil
// so the finite-difference error is far below the comparison tolerance.
struct CrlbResult {
  double bound_std = 0;
  double slope = 0;
  double fisher = 0;
};

inline CrlbResult exhaustive_crlb(const FrequentistSetting& a, int repeats, double f_true,
                                  double df, int grid_points) {
  double d0 = f_true - a.f_lo;
  auto c = exhaustive_curve(a, repeats, {d0 - 2 * df, d0 - df, d0 + df, d0 + 2 * df}, grid_points);
  double slope =
      (8.0 * (c[2].mean_est - c[1].mean_est) - (c[3].mean_est - c[0].mean_est)) / (12.0 * df);
  double fi = fisher_total(a, repeats, f_true);
  CrlbResult r;
  r.slope = slope;
  r.fisher = fi;
  r.bound_std = fi > 0 ? std::abs(slope) / std::sqrt(fi) : 0.0;
  return r;
}

// Repeated estimation cycles with the LO steered to the previous estimate.
struct LockSeries {
  std::vector<double> err;  // f_est - f_true per cycle, Hz
  int degenerate = 0;
};

inline LockSeries run_lock_adaptive(const Scheme& s, double f_true, double delta0, int cycles,
                                    Rng& rng, const RunOptions& opt = {}) {
  LockSeries out;
  out.err.reserve(static_cast<std::size_t>(cycles));
  double f_lo = f_true - delta0;
  for (int c = 0; c < cycles; ++c) {
    RunResult r = run_abqfe(s, f_true, f_lo, rng, opt);
    out.err.push_back(r.f_est - f_true);
    out.degenerate += r.degenerate_steps;
    f_lo = r.f_est;
  }
  return out;
}

inline LockSeries run_lock_frequentist(const FrequentistSetting& base, int repeats, double f_true,
                                       double delta0, int cycles, Rng& rng, int grid_points) {
  LockSeries out;
  out.err.reserve(static_cast<std::size_t>(cycles));
  double width = base.window.width();
  double f_lo = f_true - delta0;
  for (int c = 0; c < cycles; ++c) {
    FrequentistSetting a = base;
    a.f_lo = f_lo;
    a.window = {f_lo - 0.5 * width, f_lo + 0.5 * width};
    if (a.gauss_sigma > 0) a.gauss_mean = f_lo;
    RunResult r = run_frequentist(a, repeats, f_true, rng, grid_points);
    out.err.push_back(r.f_est - f_true);
    out.degenerate += r.degenerate_steps;
    f_lo = r.f_est;
  }
  return out;
}

}  // namespace abqfe
