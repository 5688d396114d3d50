// Acceptance gate: measures every shipped claim end to end and prints one
// verdict line per criterion. Exit status is the number of failed criteria.
// Optional arguments select criteria by number, e.g. `acceptance 5 7`.
#include <abqfe/abqfe.hpp>
#include <abqfe/bayes.hpp>
#include <abqfe/commands.hpp>
#include <abqfe/config.hpp>
#include <abqfe/likelihood.hpp>
#include <abqfe/rng.hpp>
#include <abqfe/scheme.hpp>
#include <abqfe/spin_oracle.hpp>
#include <abqfe/stats.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace abqfe;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Scheme pair_scheme() {
  Scheme s;
  s.ensembles = {{4, 4}, {4, 5}};
  return s;
}

Scheme cascade_scheme() {
  Scheme s;
  s.ensembles = {{1, 7}, {1, 7}, {2, 7}, {4, 2}};
  return s;
}

// ---------------------------------------------------------------------------
// 1. Spin-oracle readout probabilities against the closed-form likelihoods.

Verdict crit_oracle() {
  double worst = 0;
  for (int n = 1; n <= 8; ++n) {
    SpinOracle oracle(n);
    for (int ip = 0; ip < 32; ++ip) {
      double phi = 2.0 * kPi * double(ip) / 32.0;
      for (double df : {-61.3, -17.0, 0.0, 23.7, 59.1}) {
        SpinOracle::Pipeline pl{df, 0.0, 1e-3, phi, 0.0, 0.0};
        ReadoutSetting rs{n, 1e-3, 1.0, 0.0, phi};
        worst = std::max(worst,
                         std::abs(oracle.parity_plus_prob(pl) - likelihood_parity(+1, rs, df)));
        worst =
            std::max(worst, std::abs(oracle.sign_plus_prob(pl) - likelihood_sign(+1, rs, df)));
      }
    }
  }
  return {worst < 1e-9, fmt("max deviation %.2e (tolerance 1e-9)", worst)};
}

// ---------------------------------------------------------------------------
// 2. Contrast under collective dephasing plus detection noise.

Verdict crit_contrast() {
  double c_long = contrast_under_noise(2.547, 3e-3, 4, 0.938);
  double c_short = contrast_under_noise(2.547, 0.75e-3, 4, 0.938);
  double d1 = std::abs(c_long - 0.8824);
  double d2 = std::abs(c_short - 0.9238);
  bool pass = d1 <= 5e-5 && d2 <= 5e-5;
  return {pass, fmt("C(3 ms)=%.5f vs 0.8824, C(0.75 ms)=%.5f vs 0.9238 (tolerance 5e-5)",
                    c_long, c_short)};
}

// ---------------------------------------------------------------------------
// 3. Median posterior width tracks the closed-form deviation step by step.

Verdict crit_theory_tracking() {
  Scheme s;
  s.ensembles = {{4, 9}};
  s.aux_phase = false;
  const int replicas = 500;
  std::vector<std::vector<double>> stds(std::size_t(s.steps));
  RunOptions opt;
  opt.trace = true;
  for (int r = 0; r < replicas; ++r) {
    Rng rng(derive_seed(9003, std::uint64_t(r)));
    RunResult res = run_abqfe(s, 0.0, 0.0, rng, opt);
    for (int j = 0; j < s.steps; ++j)
      stds[std::size_t(j)].push_back(res.steps[std::size_t(j)].post_std);
  }
  double worst = 0;
  for (int j = 0; j < s.steps; ++j) {
    double med = median(stds[std::size_t(j)]);
    worst = std::max(worst, std::abs(med / theory_std(s, j) - 1.0));
  }
  return {worst <= 0.10, fmt("worst median deviation %.1f%% over %d steps (tolerance 10%%)",
                             100.0 * worst, s.steps)};
}

// ---------------------------------------------------------------------------
// 4. Monte Carlo spread scaling with total time before and after the cap.

Verdict crit_scaling_slopes() {
  Scheme s = pair_scheme();
  s.t_max = 48e-3;
  s.steps = 80;
  const int replicas = 5000;
  std::vector<double> sum(std::size_t(s.steps), 0.0), sum2(std::size_t(s.steps), 0.0);
  for (int r = 0; r < replicas; ++r) {
    Rng rng(derive_seed(9004, std::uint64_t(r)));
    RunOptions opt;
    opt.trace = true;
    RunResult res = run_abqfe(s, 0.0, 0.0, rng, opt);
    for (int j = 0; j < s.steps; ++j) {
      double fe = res.steps[std::size_t(j)].f_est;
      sum[std::size_t(j)] += fe;
      sum2[std::size_t(j)] += fe * fe;
    }
  }
  std::vector<double> t_total(std::size_t(s.steps)), spread(std::size_t(s.steps));
  double acc = 0;
  int j_cap = s.steps;
  for (int j = 0; j < s.steps; ++j) {
    acc += time_step(s, j);
    t_total[std::size_t(j)] = acc;
    double m = sum[std::size_t(j)] / replicas;
    spread[std::size_t(j)] = std::sqrt(std::max(0.0, sum2[std::size_t(j)] / replicas - m * m));
    if (j_cap == s.steps && time_step(s, j) >= s.t_max - 1e-15) j_cap = j;
  }
  std::vector<double> t1, s1, t2, s2;
  for (int j = 0; j < s.steps; ++j) {
    if (time_step(s, j) < s.t_max - 1e-15 && t_total[std::size_t(j)] >= 25.0 * s.t_min) {
      t1.push_back(t_total[std::size_t(j)]);
      s1.push_back(spread[std::size_t(j)]);
    }
    if (j >= j_cap + 30) {
      t2.push_back(t_total[std::size_t(j)]);
      s2.push_back(spread[std::size_t(j)]);
    }
  }
  double pre = fit_loglog_slope(t1, s1);
  double post = fit_loglog_slope(t2, s2);
  bool pass = std::abs(pre + 1.0) <= 0.05 && std::abs(post + 0.5) <= 0.05;
  return {pass, fmt("slope %.3f before the cap (want -1.00+-0.05), %.3f after (want -0.50+-0.05)",
                    pre, post)};
}

// ---------------------------------------------------------------------------
// 5. RMSE floor and usable detuning range against the fixed-time arms.

std::vector<double> adaptive_rmse_curve(const Scheme& s, const std::vector<double>& deltas,
                                        int replicas, std::uint64_t seed) {
  std::vector<double> out(deltas.size(), 0.0);
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    double se = 0;
    for (int r = 0; r < replicas; ++r) {
      Rng rng(derive_seed(seed, std::uint64_t(d) * std::uint64_t(replicas) + std::uint64_t(r)));
      RunResult res = run_abqfe(s, deltas[d], 0.0, rng);
      double e = res.f_est - deltas[d];
      se += e * e;
    }
    out[d] = std::sqrt(se / replicas);
  }
  return out;
}

Verdict crit_dynamic_range() {
  Scheme s = pair_scheme();
  std::vector<double> deltas(41);
  for (int i = 0; i < 41; ++i) deltas[std::size_t(i)] = double(7 * (i - 20));

  std::vector<double> adaptive = adaptive_rmse_curve(s, deltas, 1200, 9005);
  std::vector<double> rmse_min(deltas.size()), rmse_max(deltas.size());
  {
    auto curve = exhaustive_curve(fixed_arm(s, s.t_min, 0.0), 40, deltas, 2048);
    for (std::size_t i = 0; i < deltas.size(); ++i) rmse_min[i] = curve[i].rmse;
    curve = exhaustive_curve(fixed_arm(s, s.t_max, 0.0), 10, deltas, 2048);
    for (std::size_t i = 0; i < deltas.size(); ++i) rmse_max[i] = curve[i].rmse;
  }
  double floor_a = *std::min_element(adaptive.begin(), adaptive.end());
  double floor_min = *std::min_element(rmse_min.begin(), rmse_min.end());
  double floor_max = *std::min_element(rmse_max.begin(), rmse_max.end());
  double w_a = half_width(deltas, adaptive, 2.0 * floor_a);
  double w_min = half_width(deltas, rmse_min, 2.0 * floor_min);
  double ratio = w_a / w_min;
  bool pass = floor_a <= 1.5 * floor_max && std::abs(ratio - 1.0) <= 0.25 + 1e-12;
  return {pass, fmt("floor %.3f vs %.3f Hz (want <=1.5x), width %.0f vs %.0f Hz, ratio %.3f "
                    "(want 1.00+-0.25)",
                    floor_a, floor_max, w_a, w_min, ratio)};
}

// ---------------------------------------------------------------------------
// 6. White-noise instability amplitudes of six simulated locks.

double lock_amplitude(const std::function<LockSeries(Rng&)>& one_lock, double t_cycle,
                      double f_reference, int locks, int m_max, std::uint64_t seed) {
  std::vector<double> var_acc(std::size_t(m_max), 0.0);
  for (int l = 0; l < locks; ++l) {
    Rng rng(derive_seed(seed, std::uint64_t(l)));
    LockSeries series = one_lock(rng);
    std::vector<double> y(series.err.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = series.err[i] / f_reference;
    auto pts = overlapping_allan(y, t_cycle, m_max);
    for (std::size_t m = 0; m < pts.size(); ++m) var_acc[m] += pts[m].second * pts[m].second;
  }
  std::vector<std::pair<double, double>> mean_pts;
  for (int m = 1; m <= m_max; ++m)
    mean_pts.emplace_back(double(m) * t_cycle, std::sqrt(var_acc[std::size_t(m - 1)] / locks));
  return allan_white_amplitude(mean_pts);
}

Verdict crit_allan_amplitudes() {
  const double t_dead = 1.257;
  const double f_ref = 4.295e14;
  const int locks = 1000, cycles = 48, m_max = 8;
  struct Curve {
    const char* label;
    double target;
    std::function<LockSeries(Rng&)> one_lock;
    double t_cycle;
  };
  std::vector<Curve> curves;
  int fixed_steps[2] = {40, 10};
  const Scheme ind = pair_scheme();
  const Scheme cas = cascade_scheme();
  for (const Scheme* sp : {&ind, &cas}) {
    const Scheme& s = *sp;
    bool individual = sp == &ind;
    curves.push_back({individual ? "ind-adaptive" : "cas-adaptive",
                      individual ? 1.3e-14 : 1.9e-14,
                      [&s, cycles](Rng& rng) { return run_lock_adaptive(s, 0.0, 0.0, cycles, rng); },
                      total_time(s) + s.steps * t_dead});
    for (int a = 0; a < 2; ++a) {
      double t = a == 0 ? s.t_min : s.t_max;
      int n = fixed_steps[a];
      double target = individual ? (a == 0 ? 4.5e-14 : 1.1e-14) : (a == 0 ? 6.3e-14 : 1.6e-14);
      FrequentistSetting arm = fixed_arm(s, t, 0.0);
      curves.push_back({individual ? (a == 0 ? "ind-tmin" : "ind-tmax")
                                   : (a == 0 ? "cas-tmin" : "cas-tmax"),
                        target,
                        [arm, n, cycles](Rng& rng) {
                          return run_lock_frequentist(arm, n, 0.0, 0.0, cycles, rng, 2048);
                        },
                        double(n) * (t + t_dead)});
    }
  }
  std::vector<double> amps(curves.size());
  std::string detail;
  bool pass = true;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    amps[c] = lock_amplitude(curves[c].one_lock, curves[c].t_cycle, f_ref, locks, m_max,
                             derive_seed(9006, std::uint64_t(c)));
    double rel = amps[c] / curves[c].target - 1.0;
    if (std::abs(rel) > 0.20) pass = false;
    detail += fmt("%s%s %.2fe-14/%+.0f%%", c ? ", " : "", curves[c].label, amps[c] * 1e14,
                  100.0 * rel);
  }
  // The six amplitudes must order the same way as the targets.
  std::vector<std::size_t> idx(curves.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return curves[a].target < curves[b].target; });
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (!(amps[idx[i]] > amps[idx[i - 1]])) pass = false;
  return {pass, detail + " (want +-20%, same ordering)"};
}

// ---------------------------------------------------------------------------
// 7. Usable-range doubling from the auxiliary phase, three scheme pairs.

double exhaustive_half_width(const FrequentistSetting& a, const std::vector<double>& deltas) {
  auto curve = exhaustive_curve(a, 1, deltas, 2048);
  std::vector<double> rmse(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) rmse[i] = curve[i].rmse;
  double floor = *std::min_element(rmse.begin(), rmse.end());
  return half_width(deltas, rmse, 2.0 * floor);
}

Verdict crit_phase_doubling() {
  const double t = 3e-3;
  struct PairCase {
    const char* label;
    std::vector<ArmEnsemble> with_phase, without_phase;
    int n0;
  };
  std::vector<PairCase> cases = {
      {"scs", {{1, 59, 0.5 * kPi}, {1, 59, 0.0}}, {{1, 118, 0.0}}, 1},
      {"ghz", {{8, 7, 0.5 * kPi}, {8, 8, 0.0}}, {{8, 15, 0.0}}, 8},
      {"cascade",
       {{1, 13, 0.5 * kPi}, {1, 13, 0.0}, {2, 18, 0.0}, {4, 10, 0.0}, {8, 2, 0.0}},
       {{1, 26, 0.0}, {2, 18, 0.0}, {4, 10, 0.0}, {8, 2, 0.0}},
       1}};
  bool pass = true;
  std::string detail;
  for (const auto& pc : cases) {
    double period = 1.0 / (double(pc.n0) * t);
    std::vector<double> deltas(101);
    for (int i = 0; i < 101; ++i) deltas[std::size_t(i)] = (double(i) - 50.0) * 0.015 * period;
    FrequentistSetting with_arm;
    with_arm.ensembles = pc.with_phase;
    with_arm.t = t;
    with_arm.window = {-0.5 * period, 0.5 * period};
    FrequentistSetting without_arm;
    without_arm.ensembles = pc.without_phase;
    without_arm.t = t;
    without_arm.window = {-0.25 * period, 0.25 * period};
    double ratio = exhaustive_half_width(with_arm, deltas) /
                   exhaustive_half_width(without_arm, deltas);
    if (std::abs(ratio - 2.0) > 0.3) pass = false;
    detail += fmt("%s%s %.2f", detail.empty() ? "" : ", ", pc.label, ratio);
  }
  return {pass, detail + " (want 2.00+-0.30)"};
}

// ---------------------------------------------------------------------------
// 8. Larger adaptation parameter raises the outlier fraction.

Verdict crit_outlier_ordering() {
  const int replicas = 5000;
  const double detunings[2] = {0.0, 20.0};
  double frac[2] = {0.0, 0.0};
  for (int ai = 0; ai < 2; ++ai) {
    Scheme s = pair_scheme();
    s.t_max = 48e-3;
    s.steps = 20;
    s.alpha = ai == 0 ? 1.0 : 2.0;
    double limit = 10.0 * theory_std(s, s.steps - 1);
    int outliers = 0;
    for (int d = 0; d < 2; ++d) {
      for (int r = 0; r < replicas; ++r) {
        // Identical replica seeds for both alphas.
        Rng rng(derive_seed(9008, std::uint64_t(d) * replicas + std::uint64_t(r)));
        RunResult res = run_abqfe(s, detunings[d], 0.0, rng);
        if (std::abs(res.f_est - detunings[d]) > limit) ++outliers;
      }
    }
    frac[ai] = double(outliers) / (2.0 * replicas);
  }
  return {frac[1] > frac[0],
          fmt("outlier fraction %.4f at alpha=2 vs %.4f at alpha=1 (want strictly greater)",
              frac[1], frac[0])};
}

// ---------------------------------------------------------------------------
// 9. Exhaustive spread never beats the information bound.

Verdict crit_crlb() {
  std::mt19937_64 gen(0x5eed2026ull);
  auto uni = [&gen]() { return double(gen() >> 11) * 0x1.0p-53; };
  double worst = -1e300;
  for (int i = 0; i < 20; ++i) {
    FrequentistSetting a;
    a.t = (0.5 + 2.5 * uni()) * 1e-3;
    int levels = 1 + int(gen() % 2);
    for (int k = 0; k < levels; ++k) {
      int n = 1 + int(gen() % 4);
      int m = 1 + int(gen() % 4);
      double phase = (k == 0 && gen() % 2 == 1) ? 0.5 * kPi : 0.0;
      a.ensembles.push_back({n, m, phase});
    }
    a.c_detect = 0.6 + 0.35 * uni();
    int n0 = a.ensembles.front().n_atoms;
    double w = (0.5 + 0.5 * uni()) / (double(n0) * a.t);
    a.window = {-0.5 * w, 0.5 * w};
    int repeats = 1 + int(gen() % 2);
    double f_true = (uni() - 0.5) * 0.2 * w;
    ExhaustiveResult ex = exhaustive_rmse(a, repeats, f_true, 1024);
    CrlbResult cb = exhaustive_crlb(a, repeats, f_true, w / 4000.0, 1024);
    worst = std::max(worst, cb.bound_std - ex.rmse);   // positive would violate
    worst = std::max(worst, -cb.bound_std);            // bound must stay nonnegative
  }
  return {worst <= 1e-9,
          fmt("worst bound-over-spread margin %.2e over 20 random configurations "
              "(tolerance 1e-9)",
              worst)};
}

// ---------------------------------------------------------------------------
// 10. Rerunning any command with one seed reproduces every CSV byte for byte.

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> csv_bodies(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& ent : std::filesystem::directory_iterator(dir))
    if (ent.path().extension() == ".csv") out[ent.path().filename().string()] = read_file(ent.path());
  return out;
}

Verdict crit_determinism() {
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "abqfe-acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  struct Job {
    const char* command;
    const char* config;
  };
  std::vector<Job> jobs = {
      {"scaling",
       "ensembles = 4:4,4:5\nalphas = 1\nreplicas = 40\nsteps = 13\ngrid_points = 512\n"
       "arms = adaptive,fixed:3e-3:10\n"},
      {"dynamic-range",
       "ensembles = 4:4,4:5\nreplicas = 30\ngrid_points = 512\ndelta_min = -40\n"
       "delta_max = 40\ndelta_points = 5\narms = adaptive,fixed:3e-3:10\n"},
      {"allan",
       "ensembles = 4:4,4:5\nlocks = 6\ncycles = 12\nm_max = 4\ngrid_points = 512\n"
       "t_dead = 1.257\nf_reference = 4.295e14\narms = adaptive,fixed:0.75e-3:40\n"},
      {"noise-sweep",
       "n_atoms = 3\nt = 2e-3\ngamma = 10\nsigma_d_min = 0\nsigma_d_max = 1\n"
       "sigma_d_points = 4\nf_scan_points = 81\n"},
      {"oracle-check", "n_min = 1\nn_max = 4\nphase_points = 8\ngamma_points = 3\n"}};
  int files_checked = 0;
  for (const auto& job : jobs) {
    fs::path cfg = base / (std::string(job.command) + ".cfg");
    std::ofstream(cfg) << job.config;
    std::map<std::string, std::string> bodies[3];
    for (int run = 0; run < 3; ++run) {
      fs::path out = base / (std::string(job.command) + "-run" + char('a' + run));
      std::string cl = std::string("\"") + ABQFE_CLI_PATH + "\" " + job.command + " --config " +
                       cfg.string() + " --seed 7 --out " + out.string() +
                       (run == 2 ? " --threads 2" : "") + " > /dev/null 2>&1";
      if (std::system(cl.c_str()) != 0)
        return {false, fmt("%s run %d exited nonzero", job.command, run)};
      bodies[run] = csv_bodies(out);
    }
    if (bodies[0].empty()) return {false, fmt("%s wrote no CSV output", job.command)};
    for (int run = 1; run < 3; ++run)
      if (bodies[run] != bodies[0])
        return {false, fmt("%s CSV bodies differ between runs (threads=%d)", job.command,
                           run == 2 ? 2 : 1)};
    files_checked += int(bodies[0].size());
  }
  return {true, fmt("%d CSV files over 5 commands byte-identical across reruns and threads",
                    files_checked)};
}

// ---------------------------------------------------------------------------
// Grid stability: doubling the posterior resolution moves nothing by 0.1%.

Verdict crit_grid_stability() {
  Scheme s = pair_scheme();
  double worst = 0;
  {
    FrequentistSetting arm = fixed_arm(s, s.t_max, 0.0);
    double lo = exhaustive_rmse(arm, 10, 10.0, 2048).rmse;
    double hi = exhaustive_rmse(arm, 10, 10.0, 4096).rmse;
    worst = std::max(worst, std::abs(lo / hi - 1.0));
  }
  {
    FrequentistSetting arm;
    arm.ensembles = {{8, 7, 0.5 * kPi}, {8, 8, 0.0}};
    arm.t = 3e-3;
    double period = 1.0 / (8.0 * arm.t);
    arm.window = {-0.5 * period, 0.5 * period};
    double lo = exhaustive_rmse(arm, 1, 10.4, 2048).rmse;
    double hi = exhaustive_rmse(arm, 1, 10.4, 4096).rmse;
    worst = std::max(worst, std::abs(lo / hi - 1.0));
  }
  return {worst < 1e-3, fmt("max shift %.2e between 2048 and 4096 grid points (tolerance 1e-3)",
                            worst)};
}

// ---------------------------------------------------------------------------
// Shipped presets parse and, where they describe a scheme, build a valid one.

Verdict crit_presets() {
  namespace fs = std::filesystem;
  int parsed = 0;
  for (const auto& entry : fs::directory_iterator(ABQFE_PRESET_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    Config cfg = Config::from_file(entry.path().string());
    if (cfg.has("ensembles")) {
      Scheme s = scheme_from_config(cfg);
      if (cfg.has("arms")) {
        bool adaptive = false;
        std::vector<FixedArmSpec> fixed;
        parse_arms(cfg, adaptive, fixed);
        for (const auto& spec : fixed) (void)fixed_arm(s, spec.t, 0.0);
      }
    }
    ++parsed;
  }
  return {parsed >= 10, fmt("%d preset files parse and validate", parsed)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  struct Entry {
    int id;
    const char* name;
    Verdict (*run)();
  };
  const Entry entries[] = {
      {1, "readout probabilities match closed forms", crit_oracle},
      {2, "decoherence contrast values", crit_contrast},
      {3, "posterior width tracks the theory curve", crit_theory_tracking},
      {4, "spread scaling before and after the cap", crit_scaling_slopes},
      {5, "floor and usable range vs fixed arms", crit_dynamic_range},
      {6, "clock instability amplitudes", crit_allan_amplitudes},
      {7, "auxiliary-phase range doubling", crit_phase_doubling},
      {8, "aggressive adaptation raises outliers", crit_outlier_ordering},
      {9, "spread respects the information bound", crit_crlb},
      {10, "command reruns are byte-identical", crit_determinism},
      {11, "grid-doubling stability", crit_grid_stability},
      {12, "shipped presets validate", crit_presets},
  };
  int failures = 0;
  int ran = 0;
  for (const Entry& e : entries) {
    if (!only.empty() && only.count(e.id) == 0) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = e.run();
    } catch (const std::exception& ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%2d] %s  %-42s %s  [%.1f s]\n", e.id, v.pass ? "PASS" : "FAIL", e.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    ++ran;
    if (!v.pass) ++failures;
  }
  std::printf("%d of %d checks passed\n", ran - failures, ran);
  return failures;
}
