#pragma once

#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "abqfe/abqfe.hpp"
#include "abqfe/config.hpp"
#include "abqfe/csv.hpp"
#include "abqfe/parallel.hpp"
#include "abqfe/spin_oracle.hpp"
#include "abqfe/stats.hpp"

namespace abqfe {

struct RunContext {
  Config cfg;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int threads = 1;
  bool dump_posterior = false;
};

// "N:M,N:M,..." with N = atoms per copy and M = copy count.
inline std::vector<Ensemble> parse_ensembles(const std::string& text) {
  std::vector<Ensemble> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("ensemble entry needs atoms:copies, got: " + item);
    Ensemble e;
    e.n_atoms = std::stoi(item.substr(0, colon));
    e.copies = std::stoi(item.substr(colon + 1));
    if (e.n_atoms < 1 || e.copies < 1)
      throw std::runtime_error("ensemble entry needs positive atoms:copies, got: " + item);
    out.push_back(e);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::runtime_error("no ensembles given");
  return out;
}

inline Scheme scheme_from_config(const Config& cfg) {
  Scheme s;
  s.ensembles = parse_ensembles(cfg.str("ensembles"));
  s.t_min = cfg.num("t_min", 0.75e-3);
  s.t_max = cfg.num("t_max", 3e-3);
  s.alpha = cfg.num("alpha", 1.0);
  s.steps = cfg.integer("steps", 13);
  s.aux_phase = cfg.flag("aux_phase", true);
  s.gamma = cfg.num("gamma", 0.0);
  s.c_detect = cfg.num("c_detect", 1.0);
  if (!(s.t_min > 0) || !(s.t_max >= s.t_min)) throw std::runtime_error("need 0 < t_min <= t_max");
  if (s.steps < 1) throw std::runtime_error("need at least one step");
  return s;
}

// Non-adaptive arm built from the scheme's ensembles at a fixed interrogation
// time. The auxiliary phase and the full-period prior only apply below t_max,
// matching the adaptive loop's phase rule.
inline FrequentistSetting fixed_arm(const Scheme& s, double t, double f_lo) {
  bool aux = s.aux_phase && t < s.t_max;
  FrequentistSetting a;
  for (std::size_t k = 0; k < s.ensembles.size(); ++k) {
    const Ensemble& e = s.ensembles[k];
    a.ensembles.push_back({e.n_atoms, e.copies, (k == 0 && aux) ? 0.5 * kPi : 0.0});
  }
  a.t = t;
  a.f_lo = f_lo;
  double w = (aux ? 1.0 : 0.5) / (double(s.n0()) * t);
  a.window = {f_lo - 0.5 * w, f_lo + 0.5 * w};
  a.gamma = s.gamma;
  a.c_detect = s.c_detect;
  return a;
}

inline double theory_std_fixed(const Scheme& s, double t, int repeats) {
  return 1.0 / (2.0 * kPi * s.kappa_sqrt_nt() * t * std::sqrt(double(repeats)));
}

struct FixedArmSpec {
  double t = 0;
  int repeats = 0;
  std::string name;
};

// arms = adaptive,fixed:<t_seconds>:<repeats>,...
inline void parse_arms(const Config& cfg, bool& adaptive, std::vector<FixedArmSpec>& fixed) {
  adaptive = false;
  fixed.clear();
  for (const auto& item : cfg.list("arms")) {
    if (item == "adaptive") {
      adaptive = true;
      continue;
    }
    if (item.rfind("fixed:", 0) != 0) throw std::runtime_error("unknown arm: " + item);
    std::string rest = item.substr(6);
    std::size_t colon = rest.find(':');
    if (colon == std::string::npos) throw std::runtime_error("fixed arm needs fixed:t:repeats, got: " + item);
    FixedArmSpec spec;
    spec.t = std::stod(rest.substr(0, colon));
    spec.repeats = std::stoi(rest.substr(colon + 1));
    if (!(spec.t > 0) || spec.repeats < 1) throw std::runtime_error("bad fixed arm: " + item);
    char buf[48];
    std::snprintf(buf, sizeof buf, "fixed_t=%g", spec.t);
    spec.name = buf;
    fixed.push_back(spec);
  }
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct OutputInfo {
  std::string file;
  std::int64_t rows = 0;
  std::vector<std::string> columns;
};

// manifest.json carries the resolved configuration, the seed, and per-file row
// counts. The timestamp lives only here; CSV bodies stay byte-identical across
// reruns with the same seed.
inline void write_manifest(const RunContext& ctx, const std::string& command,
                           const std::vector<OutputInfo>& outputs, const nlohmann::json& summary) {
  nlohmann::json m;
  m["command"] = command;
  m["seed"] = ctx.seed;
  m["threads"] = ctx.threads;
  m["generated_utc"] = utc_timestamp();
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : ctx.cfg.entries()) cfg[k] = v;
  m["config"] = cfg;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs) {
    nlohmann::json j;
    j["file"] = o.file;
    j["rows"] = o.rows;
    j["columns"] = o.columns;
    outs.push_back(j);
  }
  m["outputs"] = outs;
  if (!summary.is_null()) m["summary"] = summary;
  std::ofstream out(std::filesystem::path(ctx.out_dir) / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + ctx.out_dir);
  out << m.dump(2) << '\n';
}

inline std::string out_path(const RunContext& ctx, const std::string& name) {
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

inline void dump_density(const RunContext& ctx, const RunResult& r, std::vector<OutputInfo>& outs) {
  CsvWriter w(out_path(ctx, "posterior.csv"), {"f_hz", "density_per_hz"});
  for (const auto& [f, p] : r.final_density) w.row({fmt_double(f), fmt_double(p)});
  w.close();
  outs.push_back({"posterior.csv", w.rows(), w.columns()});
}

// Precision of every arm as a function of accumulated interrogation time.
inline int cmd_scaling(const RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  Scheme base = scheme_from_config(cfg);
  std::vector<double> alphas = cfg.has("alphas") ? cfg.num_list("alphas")
                                                 : std::vector<double>{base.alpha};
  int replicas = cfg.integer("replicas", 1000);
  int grid_points = cfg.integer("grid_points", 2048);
  double delta0 = cfg.num("detuning0", 0.0);

  bool unused_adaptive = false;
  std::vector<FixedArmSpec> fixed;
  if (cfg.has("arms")) parse_arms(cfg, unused_adaptive, fixed);

  CsvWriter csv(out_path(ctx, "scaling.csv"),
                {"curve", "step", "t_step_s", "t_total_s", "spread_hz", "rmse_hz", "bias_hz",
                 "median_post_std_hz", "theory_hz", "replicas"});
  nlohmann::json summary = nlohmann::json::object();
  std::vector<OutputInfo> outs;
  std::uint64_t stream = 0;

  for (double alpha : alphas) {
    Scheme s = base;
    s.alpha = alpha;
    RunOptions opt{grid_points, true, false};
    std::vector<std::vector<StepRecord>> slots(static_cast<std::size_t>(replicas));
    parallel_for(replicas, ctx.threads, [&](int r) {
      Rng rng(derive_seed(ctx.seed, stream + std::uint64_t(r)));
      slots[std::size_t(r)] = run_abqfe(s, delta0, 0.0, rng, opt).steps;
    });
    stream += std::uint64_t(replicas);
    char name[32];
    std::snprintf(name, sizeof name, "alpha=%g", alpha);
    double t_total = 0;
    for (int j = 0; j < s.steps; ++j) {
      double tj = time_step(s, j);
      t_total += tj;
      std::vector<double> errs(static_cast<std::size_t>(replicas)), stds(static_cast<std::size_t>(replicas));
      for (int r = 0; r < replicas; ++r) {
        errs[std::size_t(r)] = slots[std::size_t(r)][std::size_t(j)].f_est - delta0;
        stds[std::size_t(r)] = slots[std::size_t(r)][std::size_t(j)].post_std;
      }
      McSummary m = summarize(errs);
      csv.row({name, fmt_int(j), fmt_double(tj), fmt_double(t_total), fmt_double(m.spread),
               fmt_double(m.rmse), fmt_double(m.mean), fmt_double(median(stds)),
               fmt_double(theory_std(s, j)), fmt_int(replicas)});
      if (j == s.steps - 1) summary[name] = {{"final_rmse_hz", m.rmse},
                                             {"final_theory_hz", theory_std(s, j)},
                                             {"t_total_s", t_total}};
    }
    if (ctx.dump_posterior && alpha == alphas.front()) {
      Rng rng(derive_seed(ctx.seed, 0));
      RunOptions dopt{grid_points, false, true};
      dump_density(ctx, run_abqfe(s, delta0, 0.0, rng, dopt), outs);
    }
  }

  for (const auto& spec : fixed) {
    FrequentistSetting arm = fixed_arm(base, spec.t, 0.0);
    std::vector<std::vector<StepRecord>> slots(static_cast<std::size_t>(replicas));
    parallel_for(replicas, ctx.threads, [&](int r) {
      Rng rng(derive_seed(ctx.seed, stream + std::uint64_t(r)));
      slots[std::size_t(r)] = run_frequentist_trace(arm, spec.repeats, delta0, rng, grid_points);
    });
    stream += std::uint64_t(replicas);
    for (int j = 0; j < spec.repeats; ++j) {
      std::vector<double> errs(static_cast<std::size_t>(replicas)), stds(static_cast<std::size_t>(replicas));
      for (int r = 0; r < replicas; ++r) {
        errs[std::size_t(r)] = slots[std::size_t(r)][std::size_t(j)].f_est - delta0;
        stds[std::size_t(r)] = slots[std::size_t(r)][std::size_t(j)].post_std;
      }
      McSummary m = summarize(errs);
      csv.row({spec.name, fmt_int(j), fmt_double(spec.t), fmt_double(spec.t * double(j + 1)),
               fmt_double(m.spread), fmt_double(m.rmse), fmt_double(m.mean),
               fmt_double(median(stds)), fmt_double(theory_std_fixed(base, spec.t, j + 1)),
               fmt_int(replicas)});
      if (j == spec.repeats - 1)
        summary[spec.name] = {{"final_rmse_hz", m.rmse},
                              {"final_theory_hz", theory_std_fixed(base, spec.t, j + 1)},
                              {"t_total_s", spec.t * double(j + 1)}};
    }
  }

  csv.close();
  outs.insert(outs.begin(), {"scaling.csv", csv.rows(), csv.columns()});
  write_manifest(ctx, "scaling", outs, summary);
  std::cout << "scaling: wrote " << csv.rows() << " rows for "
            << alphas.size() + fixed.size() << " curves\n";
  return 0;
}

// Estimation error versus initial detuning for the adaptive scheme and the
// fixed-time baselines. Fixed arms are averaged exhaustively over all outcome
// tuples when the tuple budget permits, otherwise by Monte Carlo.
inline int cmd_dynamic_range(const RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  Scheme s = scheme_from_config(cfg);
  int replicas = cfg.integer("replicas", 1000);
  int grid_points = cfg.integer("grid_points", 2048);
  double dmin = cfg.num("delta_min");
  double dmax = cfg.num("delta_max");
  int dpoints = cfg.integer("delta_points");
  if (dpoints < 2 || !(dmax > dmin)) throw std::runtime_error("need delta_min < delta_max and >= 2 points");
  std::vector<double> deltas(static_cast<std::size_t>(dpoints));
  for (int d = 0; d < dpoints; ++d)
    deltas[std::size_t(d)] = dmin + (dmax - dmin) * double(d) / double(dpoints - 1);

  bool adaptive = false;
  std::vector<FixedArmSpec> fixed;
  parse_arms(cfg, adaptive, fixed);

  CsvWriter csv(out_path(ctx, "dynamic_range.csv"),
                {"curve", "delta_hz", "rmse_hz", "bias_hz", "variance_hz2", "method", "samples"});
  nlohmann::json summary = nlohmann::json::object();
  std::vector<OutputInfo> outs;
  std::uint64_t stream = 0;

  auto record_curve = [&](const std::string& name, const std::vector<double>& rmse) {
    double floor = rmse.front();
    double floor_delta = deltas.front();
    for (std::size_t i = 0; i < rmse.size(); ++i)
      if (rmse[i] < floor) {
        floor = rmse[i];
        floor_delta = deltas[i];
      }
    summary[name] = {{"floor_rmse_hz", floor},
                     {"floor_delta_hz", floor_delta},
                     {"half_width_2x_floor_hz", half_width(deltas, rmse, 2.0 * floor)}};
  };

  if (adaptive) {
    RunOptions opt{grid_points, false, false};
    std::vector<double> errs(std::size_t(dpoints) * std::size_t(replicas));
    parallel_for(dpoints * replicas, ctx.threads, [&](int i) {
      int d = i / replicas;
      Rng rng(derive_seed(ctx.seed, stream + std::uint64_t(i)));
      errs[std::size_t(i)] =
          run_abqfe(s, deltas[std::size_t(d)], 0.0, rng, opt).f_est - deltas[std::size_t(d)];
    });
    stream += std::uint64_t(dpoints) * std::uint64_t(replicas);
    std::vector<double> rmse(static_cast<std::size_t>(dpoints));
    for (int d = 0; d < dpoints; ++d) {
      std::vector<double> e(errs.begin() + std::ptrdiff_t(d) * replicas,
                            errs.begin() + std::ptrdiff_t(d + 1) * replicas);
      McSummary m = summarize(e);
      rmse[std::size_t(d)] = m.rmse;
      csv.row({"adaptive", fmt_double(deltas[std::size_t(d)]), fmt_double(m.rmse),
               fmt_double(m.mean), fmt_double(m.spread * m.spread), "mc", fmt_int(replicas)});
    }
    record_curve("adaptive", rmse);
    if (ctx.dump_posterior) {
      Rng rng(derive_seed(ctx.seed, 0));
      RunOptions dopt{grid_points, false, true};
      dump_density(ctx, run_abqfe(s, deltas.front(), 0.0, rng, dopt), outs);
    }
  }

  for (const auto& spec : fixed) {
    FrequentistSetting arm = fixed_arm(s, spec.t, 0.0);
    std::vector<double> rmse(static_cast<std::size_t>(dpoints));
    bool exhaustive = true;
    std::vector<ExhaustiveResult> ex;
    try {
      ex = exhaustive_curve(arm, spec.repeats, deltas, grid_points);
    } catch (const ResourceLimitError&) {
      exhaustive = false;
    }
    if (exhaustive) {
      for (int d = 0; d < dpoints; ++d) {
        const ExhaustiveResult& r = ex[std::size_t(d)];
        rmse[std::size_t(d)] = r.rmse;
        csv.row({spec.name, fmt_double(deltas[std::size_t(d)]), fmt_double(r.rmse),
                 fmt_double(r.bias), fmt_double(r.variance), "exhaustive", fmt_int(r.tuples)});
      }
    } else {
      std::vector<double> errs(std::size_t(dpoints) * std::size_t(replicas));
      parallel_for(dpoints * replicas, ctx.threads, [&](int i) {
        int d = i / replicas;
        Rng rng(derive_seed(ctx.seed, stream + std::uint64_t(i)));
        errs[std::size_t(i)] =
            run_frequentist(arm, spec.repeats, deltas[std::size_t(d)], rng, grid_points).f_est -
            deltas[std::size_t(d)];
      });
      stream += std::uint64_t(dpoints) * std::uint64_t(replicas);
      for (int d = 0; d < dpoints; ++d) {
        std::vector<double> e(errs.begin() + std::ptrdiff_t(d) * replicas,
                              errs.begin() + std::ptrdiff_t(d + 1) * replicas);
        McSummary m = summarize(e);
        rmse[std::size_t(d)] = m.rmse;
        csv.row({spec.name, fmt_double(deltas[std::size_t(d)]), fmt_double(m.rmse),
                 fmt_double(m.mean), fmt_double(m.spread * m.spread), "mc", fmt_int(replicas)});
      }
    }
    record_curve(spec.name, rmse);
  }

  csv.close();
  outs.insert(outs.begin(), {"dynamic_range.csv", csv.rows(), csv.columns()});
  write_manifest(ctx, "dynamic-range", outs, summary);
  std::cout << "dynamic-range: wrote " << csv.rows() << " rows over " << dpoints
            << " detunings\n";
  return 0;
}

// Long-term instability of a locked oscillator: repeated estimation cycles
// steer the LO, and the per-cycle error series feeds the overlapping Allan
// deviation.
inline int cmd_allan(const RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  Scheme s = scheme_from_config(cfg);
  int locks = cfg.integer("locks", 1000);
  int cycles = cfg.integer("cycles", 48);
  int m_max = cfg.integer("m_max", 8);
  int grid_points = cfg.integer("grid_points", 2048);
  double t_dead = cfg.num("t_dead", 1.257);
  double delta0 = cfg.num("detuning0", 0.0);
  double f_ref = cfg.num("f_reference");
  if (!(f_ref > 0)) throw std::runtime_error("need a positive f_reference");

  bool adaptive = false;
  std::vector<FixedArmSpec> fixed;
  parse_arms(cfg, adaptive, fixed);

  CsvWriter csv(out_path(ctx, "allan.csv"),
                {"curve", "m", "tau_s", "sigma_y", "sigma_y_predicted"});
  CsvWriter sum_csv(out_path(ctx, "allan_summary.csv"),
                    {"curve", "t_cycle_s", "amplitude_fit", "amplitude_predicted",
                     "sensitivity_hz_sqrt_s", "locks", "cycles", "degenerate_updates"});
  nlohmann::json summary = nlohmann::json::object();
  std::uint64_t stream = 0;

  auto process = [&](const std::string& name, double t_cycle, double theory_hz,
                     const std::function<LockSeries(Rng&)>& one_lock) {
    std::vector<std::vector<double>> sig2(static_cast<std::size_t>(locks));
    std::vector<int> degenerate(static_cast<std::size_t>(locks), 0);
    parallel_for(locks, ctx.threads, [&](int l) {
      Rng rng(derive_seed(ctx.seed, stream + std::uint64_t(l)));
      LockSeries series = one_lock(rng);
      degenerate[std::size_t(l)] = series.degenerate;
      std::vector<double> y(series.err.size());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = series.err[i] / f_ref;
      auto pts = overlapping_allan(y, t_cycle, m_max);
      std::vector<double>& v = sig2[std::size_t(l)];
      v.resize(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) v[i] = pts[i].second * pts[i].second;
    });
    stream += std::uint64_t(locks);
    std::size_t npts = sig2.front().size();
    std::vector<std::pair<double, double>> avg(npts);
    for (std::size_t i = 0; i < npts; ++i) {
      double acc = 0;
      for (int l = 0; l < locks; ++l) acc += sig2[std::size_t(l)][i];
      avg[i] = {double(i + 1) * t_cycle, std::sqrt(acc / double(locks))};
    }
    double a_pred = theory_hz / f_ref * std::sqrt(t_cycle);
    for (std::size_t i = 0; i < npts; ++i)
      csv.row({name, fmt_int(std::int64_t(i + 1)), fmt_double(avg[i].first),
               fmt_double(avg[i].second), fmt_double(a_pred / std::sqrt(avg[i].first))});
    double a_fit = allan_white_amplitude(avg);
    int deg = 0;
    for (int l = 0; l < locks; ++l) deg += degenerate[std::size_t(l)];
    sum_csv.row({name, fmt_double(t_cycle), fmt_double(a_fit), fmt_double(a_pred),
                 fmt_double(a_fit * f_ref), fmt_int(locks), fmt_int(cycles), fmt_int(deg)});
    summary[name] = {{"t_cycle_s", t_cycle}, {"amplitude_fit", a_fit},
                     {"amplitude_predicted", a_pred}};
  };

  if (adaptive) {
    double t_cycle = total_time(s) + double(s.steps) * t_dead;
    RunOptions opt{grid_points, false, false};
    process("adaptive", t_cycle, theory_std(s, s.steps - 1), [&](Rng& rng) {
      return run_lock_adaptive(s, 0.0, delta0, cycles, rng, opt);
    });
  }
  for (const auto& spec : fixed) {
    FrequentistSetting arm = fixed_arm(s, spec.t, 0.0);
    double t_cycle = double(spec.repeats) * (spec.t + t_dead);
    process(spec.name, t_cycle, theory_std_fixed(s, spec.t, spec.repeats), [&](Rng& rng) {
      return run_lock_frequentist(arm, spec.repeats, 0.0, delta0, cycles, rng, grid_points);
    });
  }

  csv.close();
  sum_csv.close();
  std::vector<OutputInfo> outs{{"allan.csv", csv.rows(), csv.columns()},
                               {"allan_summary.csv", sum_csv.rows(), sum_csv.columns()}};
  write_manifest(ctx, "allan", outs, summary);
  std::cout << "allan: " << locks << " locks per curve, " << csv.rows() << " rows\n";
  return 0;
}

// Detection-noise robustness of the three GHZ readouts, quantified by fringe
// contrast and by the metrological gain over an uncorrelated ensemble of the
// same atom number at the same interrogation time.
inline int cmd_noise_sweep(const RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  int n = cfg.integer("n_atoms", 4);
  double t = cfg.num("t", 3e-3);
  double gamma = cfg.num("gamma", 0.0);
  double smin = cfg.num("sigma_d_min", 0.0);
  double smax = cfg.num("sigma_d_max", 1.5);
  int spoints = cfg.integer("sigma_d_points", 31);
  int fpoints = cfg.integer("f_scan_points", 241);
  if (spoints < 1 || fpoints < 5) throw std::runtime_error("need sigma_d_points >= 1 and f_scan_points >= 5");

  SpinOracle oracle(n);
  double period = 1.0 / (double(n) * t);
  std::vector<double> fgrid(static_cast<std::size_t>(fpoints));
  for (int i = 0; i < fpoints; ++i)
    fgrid[std::size_t(i)] = period * double(i) / double(fpoints - 1);

  enum Obs { kParity = 0, kSign = 1, kHalfPop = 2 };
  auto moments = [&](Obs o, double f, double sigma_d, double& mean, double& var) {
    SpinOracle::Pipeline ps{f, 0.0, t, 0.0, gamma, sigma_d};
    Eigen::VectorXd p = oracle.readout_populations(ps, o != kParity);
    double m1 = 0, m2 = 0;
    for (int i = 0; i < oracle.dim(); ++i) {
      double v = o == kParity ? oracle.parity_value(i)
                 : o == kSign ? oracle.sign_value(i)
                              : oracle.m_of(i);
      m1 += v * p(i);
      m2 += v * v * p(i);
    }
    mean = m1;
    var = std::max(0.0, m2 - m1 * m1);
  };

  // Best error-propagation precision over the fringe: min of dO / |d<O>/df|.
  auto best_precision = [&](Obs o, double sigma_d) {
    std::vector<double> means(static_cast<std::size_t>(fpoints)), vars(static_cast<std::size_t>(fpoints));
    for (int i = 0; i < fpoints; ++i) moments(o, fgrid[std::size_t(i)], sigma_d, means[std::size_t(i)], vars[std::size_t(i)]);
    double best = std::numeric_limits<double>::infinity();
    double h = fgrid[1] - fgrid[0];
    for (int i = 1; i + 1 < fpoints; ++i) {
      double slope = (means[std::size_t(i + 1)] - means[std::size_t(i - 1)]) / (2.0 * h);
      double sd = std::sqrt(vars[std::size_t(i)]);
      if (std::abs(slope) < 1e-12) continue;
      best = std::min(best, sd / std::abs(slope));
    }
    return best;
  };

  auto fringe_amplitude = [&](Obs o, double sigma_d) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < fpoints; ++i) {
      double m, v;
      moments(o, fgrid[std::size_t(i)], sigma_d, m, v);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    return 0.5 * (hi - lo);
  };

  // Uncorrelated-ensemble reference at the same N and T: one atom's Ramsey
  // fringe gains sqrt(N) from averaging N independent atoms.
  double scs_precision = 1.0 / (2.0 * kPi * std::sqrt(double(n)) * t);

  CsvWriter csv(out_path(ctx, "noise_sweep.csv"),
                {"sigma_d", "contrast_parity", "contrast_sign", "contrast_halfpop",
                 "delta_f_parity_hz", "delta_f_sign_hz", "delta_f_halfpop_hz",
                 "gain_parity_db", "gain_sign_db", "gain_halfpop_db"});

  double amp0[3];
  for (int o = 0; o < 3; ++o) amp0[o] = fringe_amplitude(Obs(o), 0.0);

  nlohmann::json summary = nlohmann::json::object();
  for (int si = 0; si < spoints; ++si) {
    double sd = spoints == 1 ? smin : smin + (smax - smin) * double(si) / double(spoints - 1);
    double contrast[3], df[3], gain[3];
    for (int o = 0; o < 3; ++o) {
      contrast[o] = amp0[o] > 0 ? fringe_amplitude(Obs(o), sd) / amp0[o] : 0.0;
      df[o] = best_precision(Obs(o), sd);
      gain[o] = 20.0 * std::log10(scs_precision / df[o]);
    }
    csv.row({fmt_double(sd), fmt_double(contrast[0]), fmt_double(contrast[1]),
             fmt_double(contrast[2]), fmt_double(df[0]), fmt_double(df[1]), fmt_double(df[2]),
             fmt_double(gain[0]), fmt_double(gain[1]), fmt_double(gain[2])});
    if (si == spoints - 1)
      summary = {{"sigma_d_max", sd},
                 {"gain_parity_db", gain[0]},
                 {"gain_sign_db", gain[1]},
                 {"gain_halfpop_db", gain[2]}};
  }

  csv.close();
  if (ctx.dump_posterior) std::cout << "noise-sweep: no posterior in this command\n";
  std::vector<OutputInfo> outs{{"noise_sweep.csv", csv.rows(), csv.columns()}};
  write_manifest(ctx, "noise-sweep", outs, summary);
  std::cout << "noise-sweep: wrote " << csv.rows() << " rows\n";
  return 0;
}

// Cross-validates the closed-form readout probabilities against the exact
// density-matrix model and reports the dephasing exponent both ways.
inline int cmd_oracle_check(const RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  int n_min = cfg.integer("n_min", 1);
  int n_max = cfg.integer("n_max", 8);
  int phase_points = cfg.integer("phase_points", 32);
  double t = cfg.num("t", 1e-3);
  double detuning = cfg.num("detuning", 37.0);
  double gamma_max = cfg.num("gamma_max", 200.0);
  int gamma_points = cfg.integer("gamma_points", 5);

  CsvWriter csv(out_path(ctx, "oracle_check.csv"),
                {"n_atoms", "max_parity_dev", "max_sign_dev", "decay_exponent_oracle",
                 "decay_exponent_closed_form"});
  double worst = 0;
  for (int n = n_min; n <= n_max; ++n) {
    SpinOracle oracle(n);
    double dev_par = 0, dev_sign = 0;
    for (int ip = 0; ip < phase_points; ++ip) {
      double phi = 2.0 * kPi * double(ip) / double(phase_points);
      for (int id = 0; id < 7; ++id) {
        double f = detuning * (double(id) - 3.0) / 3.0;
        SpinOracle::Pipeline ps{f, 0.0, t, phi, 0.0, 0.0};
        ReadoutSetting rs{n, t, 1.0, 0.0, phi};
        dev_par = std::max(dev_par,
                           std::abs(oracle.parity_plus_prob(ps) - likelihood_parity(+1, rs, f)));
        dev_sign = std::max(dev_sign,
                            std::abs(oracle.sign_plus_prob(ps) - likelihood_sign(+1, rs, f)));
      }
    }
    // Corner-coherence decay exponent c in exp(-c gamma T N^2), fitted from the
    // oracle's parity fringe amplitude; the closed form uses c = 1/2.
    double c_fit = 0;
    int used = 0;
    for (int ig = 1; ig <= gamma_points; ++ig) {
      double g = gamma_max * double(ig) / double(gamma_points);
      SpinOracle::Pipeline p0{0.0, 0.0, t, 0.0, 0.0, 0.0}, pg = p0;
      pg.gamma = g;
      double a0 = 2.0 * oracle.parity_plus_prob(p0) - 1.0;
      double ag = 2.0 * oracle.parity_plus_prob(pg) - 1.0;
      if (std::abs(a0) > 1e-12 && ag / a0 > 1e-12) {
        c_fit += -std::log(ag / a0) / (g * t * double(n) * double(n));
        ++used;
      }
    }
    c_fit = used > 0 ? c_fit / double(used) : 0.0;
    csv.row({fmt_int(n), fmt_double(dev_par), fmt_double(dev_sign), fmt_double(c_fit),
             fmt_double(0.5)});
    worst = std::max(worst, std::max(dev_par, dev_sign));
    std::cout << "N=" << n << " parity dev " << dev_par << " sign dev " << dev_sign
              << " decay exponent " << c_fit << "\n";
  }
  csv.close();
  nlohmann::json summary = {{"worst_probability_dev", worst}};
  std::vector<OutputInfo> outs{{"oracle_check.csv", csv.rows(), csv.columns()}};
  write_manifest(ctx, "oracle-check", outs, summary);
  std::cout << "oracle-check: worst probability deviation " << worst << "\n";
  return 0;
}

inline int run_command(const std::string& name, const RunContext& ctx) {
  std::filesystem::create_directories(ctx.out_dir);
  if (name == "scaling") return cmd_scaling(ctx);
  if (name == "dynamic-range") return cmd_dynamic_range(ctx);
  if (name == "allan") return cmd_allan(ctx);
  if (name == "noise-sweep") return cmd_noise_sweep(ctx);
  if (name == "oracle-check") return cmd_oracle_check(ctx);
  throw std::runtime_error("unknown command: " + name);
}

}  // namespace abqfe
