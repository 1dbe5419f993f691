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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "kaneq/dynamics.hpp"
#include "kaneq/observables.hpp"
#include "kaneq/qubit.hpp"

namespace kaneq {

/// Dephasing rate used by every figure preset. Keeps all presets in the
/// underdamped regime omega > gamma_d / 2 (omega = kappa / 2 >= 0.025).
inline constexpr double kCalibratedGammaD = 0.01;

/// Grid spacing of the figure presets; 2e4 steps over 10 / gamma_d.
inline constexpr double kPresetDtau = 0.05;

struct InitialState {
  std::string label;  // "x", "y", "z" or "custom"
  BlochVector s;

  static InitialState along_x() { return {"x", {1.0, 0.0, 0.0}}; }
  static InitialState along_y() { return {"y", {0.0, 1.0, 0.0}}; }
  static InitialState along_z() { return {"z", {0.0, 0.0, 1.0}}; }
  static InitialState custom(const BlochVector& s) { return {"custom", s}; }
};

/// Accepts "x", "y", "z" or three comma-separated components.
inline InitialState parse_initial_state(std::string_view text) {
  if (text == "x") return InitialState::along_x();
  if (text == "y") return InitialState::along_y();
  if (text == "z") return InitialState::along_z();
  double c[3];
  std::string buf(text);
  char tail = 0;
  if (std::sscanf(buf.c_str(), " %lf , %lf , %lf %c", &c[0], &c[1], &c[2], &tail) != 3) {
    throw DomainError("initial state must be x, y, z or 'sx,sy,sz', got '" + buf + "'");
  }
  const BlochVector s{c[0], c[1], c[2]};
  require_physical(s, "initial state");
  return InitialState::custom(s);
}

struct ScenarioSpec {
  std::string id;
  InitialState initial;
  std::vector<double> theta_list;
  std::vector<double> kappa_list;
  double gamma_d{kCalibratedGammaD};
  double tau_max{10.0 / kCalibratedGammaD};
  double dtau{kPresetDtau};
  Method method{Method::kRk4};
  KappaConvention kappa_convention{KappaConvention::kText};

  void validate() const {
    if (theta_list.empty() || kappa_list.empty()) {
      throw DomainError("scenario '" + id + "': theta and kappa lists must be non-empty");
    }
    require_physical(initial.s, "scenario initial state");
  }
};

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"1a", "1b", "1c", "1d", "2a", "2b",
                                               "2c", "2d", "3a", "3b", "4",  "5a",
                                               "5b", "6a", "6b", "7a", "7b"};
  return ids;
}

/// Preset for one figure panel. Presets 3a and 3b list theta in curve order
/// (solid, dashed, dot). Presets 5-7 have kappa on a plot axis with no stated
/// range and use 0.05, 0.07, 0.09.
inline ScenarioSpec figure_scenario(std::string_view id) {
  using std::numbers::pi;
  const std::vector<double> kappa_axis = {0.05, 0.07, 0.09};
  ScenarioSpec spec;
  spec.id = std::string(id);
  auto set = [&](InitialState init, std::vector<double> thetas, std::vector<double> kappas) {
    spec.initial = std::move(init);
    spec.theta_list = std::move(thetas);
    spec.kappa_list = std::move(kappas);
  };
  const auto x = InitialState::along_x();
  const auto y = InitialState::along_y();
  const auto z = InitialState::along_z();

  if (id == "1a") set(y, {0.0}, {0.05});
  else if (id == "1b") set(y, {pi / 4}, {0.05});
  else if (id == "1c") set(y, {pi / 3}, {0.05});
  else if (id == "1d") set(y, {pi / 2}, {0.05});
  else if (id == "2a") set(x, {pi / 4}, {0.05});
  else if (id == "2b") set(x, {pi / 4}, {0.09});
  else if (id == "2c") set(z, {pi / 4}, {0.05});
  else if (id == "2d") set(z, {pi / 4}, {0.09});
  else if (id == "3a") set(x, {pi / 2, 0.0, pi / 3}, {0.05});
  else if (id == "3b") set(y, {pi / 2, 0.0, pi / 3}, {0.05});
  else if (id == "4") set(z, {pi / 4}, {0.05, 0.07, 0.09});
  else if (id == "5a") set(x, {0.0}, kappa_axis);
  else if (id == "5b") set(x, {pi / 3}, kappa_axis);
  else if (id == "6a") set(y, {0.0}, kappa_axis);
  else if (id == "6b") set(y, {pi / 3}, kappa_axis);
  else if (id == "7a") set(z, {0.0}, kappa_axis);
  else if (id == "7b") {
    set(z, {0.0}, kappa_axis);
    spec.tau_max = 1.0 / kCalibratedGammaD;  // short-time zoom of 7a
  } else {
    throw DomainError("unknown figure id '" + std::string(id) + "'");
  }
  return spec;
}

namespace detail {

inline std::string shortest(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace detail

/// key/value notes describing conventions, emitted next to every output.
inline std::vector<std::pair<std::string, std::string>> scenario_metadata(const ScenarioSpec& spec) {
  return {
      {"scenario", spec.id},
      {"kappa_convention", spec.kappa_convention == KappaConvention::kText
                               ? "kappa = 4 B_ac / B_z^2, omega = kappa / 2"
                               : "kappa = 4 B_ac / (2 B_z^2), omega = kappa"},
      {"kappa_note", "two kappa conventions are in use, 4 B_ac / B_z^2 (text) and "
                     "4 B_ac / (2 B_z^2) (caption); presets use text throughout"},
      {"gamma_d", detail::shortest(spec.gamma_d)},
      {"abrupt_threshold", "1/gamma_d"},
  };
}

struct ScenarioRun {
  double theta{0.0};
  double kappa{0.0};
  ModelParams params;
  Trajectory trajectory;
  ObservableSeries observables;
};

/// Runs grid points concurrently; results are ordered theta-major, then kappa.
inline std::vector<ScenarioRun> run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<std::pair<double, double>> grid;
  for (double theta : spec.theta_list) {
    for (double kappa : spec.kappa_list) grid.emplace_back(theta, kappa);
  }

  auto run_one = [&spec](double theta, double kappa) {
    ScenarioRun run;
    run.theta = theta;
    run.kappa = kappa;
    run.params = ModelParams::from_kappa(theta, kappa, spec.gamma_d, spec.kappa_convention);
    run.trajectory = integrate(run.params, spec.initial.s, spec.tau_max, spec.dtau, spec.method);
    run.observables = series(run.trajectory);
    return run;
  };

  // Bounded batches keep large sweeps from spawning one thread per point.
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  std::vector<ScenarioRun> out;
  out.reserve(grid.size());
  for (std::size_t first = 0; first < grid.size(); first += width) {
    const std::size_t last = std::min(grid.size(), first + width);
    std::vector<std::future<ScenarioRun>> jobs;
    for (std::size_t i = first; i < last; ++i) {
      jobs.push_back(std::async(std::launch::async, run_one, grid[i].first, grid[i].second));
    }
    for (auto& job : jobs) out.push_back(job.get());
  }
  return out;
}

struct SweepRow {
  double kappa{0.0};
  double theta{0.0};
  std::string initial_state;
  double final_purity{0.0};
  double final_entropy{0.0};
  double min_fidelity{0.0};
  std::optional<double> half_time;
  std::optional<double> plateau_end;
  std::optional<double> rate_estimate;
  DecayClass classification{DecayClass::kGradual};
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<ObservableSeries> series;  // parallel to rows
  Tracked tracked{Tracked::kPurity};
};

struct SweepOptions {
  double dtau{kPresetDtau};
  Method method{Method::kRk4};
  Tracked tracked{Tracked::kPurity};
  DecayOptions decay;
  KappaConvention kappa_convention{KappaConvention::kText};
};

inline SweepRow summarize(const ScenarioRun& run, const std::string& initial_label,
                          Tracked tracked, const DecayOptions& decay = {}) {
  const ObservableSeries& obs = run.observables;
  const DecaySummary summary = decay_summary(obs, tracked, decay);
  SweepRow row;
  row.kappa = run.kappa;
  row.theta = run.theta;
  row.initial_state = initial_label;
  row.final_purity = obs.purity.back();
  row.final_entropy = obs.entropy.back();
  row.min_fidelity = *std::min_element(obs.fidelity.begin(), obs.fidelity.end());
  row.half_time = summary.half_time;
  row.plateau_end = summary.plateau_end;
  row.rate_estimate = summary.rate_estimate;
  row.classification = summary.classification;
  return row;
}

/// Cartesian product of theta_grid x kappa_grid, theta-major.
inline SweepResult sweep(const InitialState& initial, const std::vector<double>& theta_grid,
                         const std::vector<double>& kappa_grid, double gamma_d, double tau_max,
                         const SweepOptions& opts = {}) {
  ScenarioSpec spec;
  spec.id = "sweep";
  spec.initial = initial;
  spec.theta_list = theta_grid;
  spec.kappa_list = kappa_grid;
  spec.gamma_d = gamma_d;
  spec.tau_max = tau_max;
  spec.dtau = opts.dtau;
  spec.method = opts.method;
  spec.kappa_convention = opts.kappa_convention;

  SweepResult result;
  result.tracked = opts.tracked;
  for (ScenarioRun& run : run_scenario(spec)) {
    result.rows.push_back(summarize(run, initial.label, opts.tracked, opts.decay));
    result.series.push_back(std::move(run.observables));
  }
  return result;
}

enum class CheckStatus { kPass, kFail, kInconclusive };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct SaturationReport {
  CheckStatus status{CheckStatus::kInconclusive};
  double final_purity{0.0};
  double final_entropy{0.0};
  double final_bloch_norm{0.0};
  std::string message;
};

/// Checks relaxation to the maximally mixed state: |P - 1/2| < 0.01,
/// |S - ln 2| < 0.01 and |s| < 0.1 at the last grid point. Needs
/// tau_max >= 10 / gamma_d, otherwise the result is inconclusive.
inline SaturationReport saturation_check(const ObservableSeries& s, const ModelParams& p) {
  SaturationReport rep;
  if (s.empty()) {
    rep.message = "empty series";
    return rep;
  }
  rep.final_purity = s.purity.back();
  rep.final_entropy = s.entropy.back();
  rep.final_bloch_norm = s.bloch_norm.back();

  const bool at_origin = s.bloch_norm.front() <= kPhysicalTolerance;
  if (!at_origin) {
    if (!(p.gamma_d > 0.0) || s.tau.back() < 10.0 / p.gamma_d * (1.0 - 1e-12)) {
      rep.message = "tau_max shorter than 10/gamma_d";
      return rep;
    }
  }
  const bool ok = std::abs(rep.final_purity - 0.5) < 0.01 &&
                  std::abs(rep.final_entropy - std::numbers::ln2) < 0.01 &&
                  rep.final_bloch_norm < 0.1;
  rep.status = ok ? CheckStatus::kPass : CheckStatus::kFail;
  char buf[160];
  std::snprintf(buf, sizeof buf, "final purity %.6f, entropy %.6f, |s| %.6f", rep.final_purity,
                rep.final_entropy, rep.final_bloch_norm);
  rep.message = buf;
  return rep;
}

}  // namespace kaneq
