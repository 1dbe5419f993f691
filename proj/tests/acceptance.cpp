// Copyright 2026 The kaneq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are pinned here and nowhere else.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kaneq/csv.hpp"
#include "kaneq/kaneq.hpp"

using namespace kaneq;
using std::numbers::pi;

namespace {

// Pinned tolerances.
constexpr double kOracleTol = 1e-8;          // criterion 1
constexpr double kOracleSeconds = 1.0;       // criterion 1
constexpr double kSolverTol = 1e-6;          // criterion 2
constexpr double kSolverSeconds = 30.0;      // criterion 2
constexpr double kSaturationTol = 0.01;      // criterion 3
constexpr double kRateRatioTol = 0.10;       // criterion 4
constexpr double kPlateauPurity = 0.99;      // criterion 5
constexpr double kPlateauTau = 2.5;          // criterion 5
constexpr double kFidelityLow = 0.01;        // criterion 7
constexpr double kPeriodTol = 0.01;          // criterion 7
constexpr double kMonotoneSlack = 1e-9;      // criterion 8
constexpr double kDefectTol = 1e-10;         // criterion 8

struct Outcome {
  bool pass;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every series produced by criteria 1-7, for the physicality sweep.
std::vector<ObservableSeries> g_all;

void Keep(const ObservableSeries& s) { g_all.push_back(s); }

Outcome AnalyticOracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double err_s = 0.0, err_p = 0.0;
  for (double omega : {0.0, 0.025, 0.7}) {
    ModelParams p;
    p.omega = omega;
    p.gamma_d = 0.5;
    const ObservableSeries s = series(integrate(p, {0, 1, 0}, 20.0, 1e-3));
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double e = std::exp(-0.5 * s.tau[k]);
      err_s = std::max(err_s, max_abs_diff(s.states[k], {0.0, e, 0.0}));
      err_p = std::max(err_p, std::abs(s.purity[k] - 0.5 * (1.0 + e * e)));
    }
    Keep(s);
  }
  const double secs = Seconds(t0);
  return {err_s <= kOracleTol && err_p <= kOracleTol && secs < kOracleSeconds,
          Fmt("max |s - s_exact| %.2e, max purity error %.2e (tol %.0e), %.3f s for 3 runs "
              "(limit %.0f s)",
              err_s, err_p, kOracleTol, secs, kOracleSeconds)};
}

Outcome TripleSolver() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20261017);
  std::uniform_real_distribution<double> u(0.0, 1.0), c(-1.0, 1.0);
  double worst = 0.0;
  double worst_defect = 0.0;
  for (int i = 0; i < 100; ++i) {
    ModelParams p;
    p.omega = u(rng);
    p.gamma_d = u(rng);
    p.theta = std::fmod(2.0 * pi * u(rng), 2.0 * pi);
    BlochVector s0;
    do s0 = {c(rng), c(rng), c(rng)};
    while (s0.norm_squared() > 1.0);
    const Trajectory a = integrate(p, s0, 20.0, 1e-3, Method::kRk4);
    const Trajectory b = integrate(p, s0, 20.0, 1e-3, Method::kExact);
    const Trajectory o = integrate(p, s0, 20.0, 1e-3, Method::kOracle);
    for (std::size_t k = 0; k < a.size(); ++k) {
      worst = std::max({worst, max_abs_diff(a.states[k], b.states[k]),
                        max_abs_diff(a.states[k], o.states[k]), max_abs_diff(b.states[k], o.states[k])});
    }
    worst_defect = std::max({worst_defect, o.oracle_defects->max_trace_defect,
                             o.oracle_defects->max_hermiticity_defect});
    if (i % 10 == 0) {
      Keep(series(a));
      Keep(series(o));
    }
  }
  const double secs = Seconds(t0);
  return {worst <= kSolverTol && secs < kSolverSeconds,
          Fmt("100 cases on tau in [0, 20], worst pairwise max-norm gap %.2e (tol %.0e), "
              "%.2f s (limit %.0f s)",
              worst, kSolverTol, secs, kSolverSeconds)};
}

Outcome Saturation() {
  int checked = 0, failed = 0;
  double worst_p = 0.0, worst_s = 0.0;
  std::string first_fail;
  for (const auto& id : figure_ids()) {
    ScenarioSpec spec = figure_scenario(id);
    spec.tau_max = 10.0 / spec.gamma_d;
    for (const ScenarioRun& run : run_scenario(spec)) {
      if (!(run.params.omega > 0.0 && run.params.gamma_d > 0.0)) continue;
      ++checked;
      const double dp = std::abs(run.observables.purity.back() - 0.5);
      const double ds = std::abs(run.observables.entropy.back() - std::numbers::ln2);
      worst_p = std::max(worst_p, dp);
      worst_s = std::max(worst_s, ds);
      if (!(dp <= kSaturationTol && ds <= kSaturationTol)) {
        if (failed++ == 0) first_fail = id;
      }
      Keep(run.observables);
    }
  }
  return {failed == 0 && checked > 0,
          Fmt("%d preset runs at gamma_d = %g, tau_max = 10/gamma_d: worst |P - 0.5| %.2e, "
              "worst |S - ln 2| %.2e (tol %.2f)%s%s",
              checked, kCalibratedGammaD, worst_p, worst_s, kSaturationTol,
              failed ? ", first failure in preset " : "", first_fail.c_str())};
}

Outcome AbruptVsGradual() {
  std::vector<double> half;
  std::vector<double> rate;
  bool all_present = true;
  for (const char* id : {"1a", "1b", "1c", "1d"}) {
    const ScenarioRun run = run_scenario(figure_scenario(id)).front();
    Keep(run.observables);
    const DecaySummary pur = decay_summary(run.observables, Tracked::kPurity);
    const DecaySummary nrm = decay_summary(run.observables, Tracked::kBlochNorm);
    all_present = all_present && pur.half_time && nrm.rate_estimate;
    half.push_back(pur.half_time.value_or(NAN));
    rate.push_back(nrm.rate_estimate.value_or(NAN));
  }
  bool increasing = all_present;
  for (std::size_t i = 1; i < half.size(); ++i) increasing = increasing && half[i] > half[i - 1];
  const double ratio = rate[3] / rate[0];
  const double omega = omega_from_kappa(0.05);
  const bool underdamped = omega > 0.5 * kCalibratedGammaD;
  const bool ratio_ok = std::abs(ratio - 0.5) <= kRateRatioTol * 0.5;
  return {increasing && ratio_ok && underdamped,
          Fmt("purity half-times %.1f < %.1f < %.1f < %.1f; envelope rates %.5f (theta=0), "
              "%.5f (theta=pi/2), ratio %.4f vs 0.5 (tol %.0f%%); omega %.3f %s gamma_d/2 %.3f",
              half[0], half[1], half[2], half[3], rate[0], rate[3], ratio, kRateRatioTol * 100,
              omega, underdamped ? ">" : "<=", 0.5 * kCalibratedGammaD)};
}

Outcome Plateau() {
  const ModelParams p = ModelParams::from_kappa(pi / 4, 0.05, 0.5);
  const ObservableSeries s = series(integrate(p, {0, 0, 1}, 20.0, 1e-3));
  Keep(s);
  double min_p = 1.0;
  for (std::size_t k = 0; k < s.size() && s.tau[k] <= kPlateauTau; ++k) min_p = std::min(min_p, s.purity[k]);
  const DecaySummary d = decay_summary(s, Tracked::kPurity);
  return {min_p >= kPlateauPurity,
          Fmt("z start, theta = pi/4, kappa = 0.05, gamma_d = 0.5: min purity on [0, %.1f] = %.6f "
              "(need >= %.2f); plateau ends at tau = %.2f",
              kPlateauTau, min_p, kPlateauPurity, d.plateau_end.value_or(0.0))};
}

Outcome KappaMonotone() {
  const auto runs = run_scenario(figure_scenario("4"));
  std::vector<double> half;
  bool ok = true;
  for (const auto& run : runs) {
    Keep(run.observables);
    const auto h = decay_summary(run.observables, Tracked::kBlochNorm).half_time;
    ok = ok && h.has_value();
    half.push_back(h.value_or(NAN));
  }
  for (std::size_t i = 1; i < half.size(); ++i) ok = ok && half[i] < half[i - 1];
  return {ok && half.size() == 3,
          Fmt("preset 4 |s| half-times for kappa 0.05, 0.07, 0.09: %.1f > %.1f > %.1f", half[0],
              half[1], half[2])};
}

// Interior local extrema of v, refined by a parabola through three samples.
struct Extremum {
  double tau;
  double value;
  bool is_max;
};

std::vector<Extremum> Extrema(const ObservableSeries& s) {
  std::vector<Extremum> out;
  const auto& v = s.fidelity;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const bool mx = v[k] > v[k - 1] && v[k] >= v[k + 1];
    const bool mn = v[k] < v[k - 1] && v[k] <= v[k + 1];
    if (!mx && !mn) continue;
    const double h = s.tau[k + 1] - s.tau[k];
    const double denom = v[k - 1] - 2.0 * v[k] + v[k + 1];
    const double shift = denom != 0.0 ? 0.5 * (v[k - 1] - v[k + 1]) / denom : 0.0;
    out.push_back({s.tau[k] + shift * h, v[k] - 0.25 * (v[k - 1] - v[k + 1]) * shift, mx});
  }
  return out;
}

Outcome FidelityOscillation() {
  // Undamped: F = 1 at tau = 0, then alternating minima and maxima.
  ModelParams p = ModelParams::from_kappa(0.0, 0.05, 0.0);
  const double half_period = pi / p.omega;
  const ObservableSeries s = series(integrate(p, {0, 0, 1}, 8.0 * half_period, 0.01));
  Keep(s);
  std::vector<Extremum> ext = {{0.0, s.fidelity.front(), true}};
  for (const auto& e : Extrema(s)) ext.push_back(e);
  bool ok = ext.size() >= 8;
  double worst_spacing = 0.0, worst_max = 0.0, worst_min = 0.0;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (ext[i].is_max) worst_max = std::max(worst_max, 1.0 - ext[i].value);
    else worst_min = std::max(worst_min, ext[i].value);
    if (i > 0) {
      ok = ok && ext[i].is_max != ext[i - 1].is_max;
      worst_spacing = std::max(worst_spacing, std::abs(ext[i].tau - ext[i - 1].tau - half_period) / half_period);
    }
  }
  ok = ok && worst_spacing <= kPeriodTol && worst_max <= 1e-6 && worst_min <= kFidelityLow;
  const double full = ext.size() >= 3 ? ext[2].tau - ext[0].tau : 0.0;

  // Damped: maxima strictly decrease for each preset-7 kappa.
  std::string maxima;
  bool decreasing = true;
  for (const ScenarioRun& run : run_scenario(figure_scenario("7a"))) {
    Keep(run.observables);
    double prev = run.observables.fidelity.front();
    int count = 0;
    for (const auto& e : Extrema(run.observables)) {
      if (!e.is_max) continue;
      decreasing = decreasing && e.value < prev;
      prev = e.value;
      if (count++ < 3) maxima += Fmt("%.3f ", e.value);
    }
    decreasing = decreasing && count >= 2;
    maxima += "| ";
  }
  return {ok && decreasing,
          Fmt("gamma_d = 0: %zu extrema, 1 <-> <=%.2f every pi/omega (worst spacing error %.2e, "
              "tol %.0f%%; max-to-max %.2f = %.4f * 2pi/omega), max 1 - F_max %.1e, max F_min %.1e; "
              "gamma_d = %g maxima %s%s",
              ext.size(), kFidelityLow, worst_spacing, kPeriodTol * 100, full,
              full / (2.0 * half_period), worst_max, worst_min, kCalibratedGammaD, maxima.c_str(),
              decreasing ? "strictly decreasing" : "NOT strictly decreasing")};
}

Outcome Physicality() {
  std::size_t rows = 0;
  int bad = 0;
  for (const ObservableSeries& s : g_all) {
    for (std::size_t k = 0; k < s.size(); ++k, ++rows) {
      const bool mono = k == 0 || s.bloch_norm[k] <= s.bloch_norm[k - 1] + kMonotoneSlack;
      const bool pur = s.purity[k] >= 0.5 && s.purity[k] <= 1.0;
      const bool ent = s.entropy[k] >= 0.0 && s.entropy[k] <= std::numbers::ln2;
      if (!(mono && pur && ent)) ++bad;
    }
  }
  // Density-matrix path for every preset.
  double defect = 0.0;
  int oracle_runs = 0;
  for (const auto& id : figure_ids()) {
    ScenarioSpec spec = figure_scenario(id);
    spec.method = Method::kOracle;
    for (const ScenarioRun& run : run_scenario(spec)) {
      ++oracle_runs;
      defect = std::max({defect, run.trajectory.oracle_defects->max_trace_defect,
                         run.trajectory.oracle_defects->max_hermiticity_defect});
      const auto& n = run.observables.bloch_norm;
      for (std::size_t k = 1; k < n.size(); ++k) {
        if (n[k] > n[k - 1] + kMonotoneSlack) ++bad;
      }
    }
  }
  return {bad == 0 && defect < kDefectTol,
          Fmt("%zu rows from %zu series: %d violations; %d density-matrix preset runs, max "
              "trace/Hermiticity defect %.2e (tol %.0e)",
              rows, g_all.size(), bad, oracle_runs, defect, kDefectTol)};
}

Outcome Determinism() {
  const std::string bin = KANEQ_CLI_PATH;
  const auto dir = std::filesystem::temp_directory_path() / "kaneq_acceptance";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "run1.csv").string(), b = (dir / "run2.csv").string();
  auto run = [&](const std::string& out) {
    const int st = std::system((bin + " figure --id 1a --out " + out).c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  const int ca = run(a), cb = run(b);
  bool same = false;
  std::size_t bytes = 0;
  if (ca == 0 && cb == 0) {
    const std::string x = detail::read_file(a), y = detail::read_file(b);
    same = x == y;
    bytes = x.size();
  }
  std::filesystem::remove_all(dir);
  return {same, Fmt("two `figure --id 1a` runs (exit %d, %d): %zu bytes, %s", ca, cb, bytes,
                    same ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"analytic oracle", AnalyticOracle},
      {"triple-solver equivalence", TripleSolver},
      {"saturation", Saturation},
      {"abrupt-vs-gradual ordering", AbruptVsGradual},
      {"plateau", Plateau},
      {"kappa monotonicity", KappaMonotone},
      {"fidelity oscillation", FidelityOscillation},
      {"physicality", Physicality},
      {"determinism", Determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
