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
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kaneq/dynamics.hpp"
#include "kaneq/qubit.hpp"

namespace kaneq {

/// |s|
inline double bloch_norm(const BlochVector& s) { return s.norm(); }

/// tr(rho^2) = (1 + |s|^2) / 2
inline double purity(const BlochVector& s) {
  require_physical(s);
  return 0.5 * (1.0 + std::min(1.0, s.norm_squared()));
}

/// Von Neumann entropy in nats, eigenvalues (1 +- |s|) / 2.
inline double entropy(const BlochVector& s) {
  require_physical(s);
  const double r = std::min(1.0, s.norm());
  auto term = [](double lambda) { return lambda > 0.0 ? -lambda * std::log(lambda) : 0.0; };
  return term(0.5 * (1.0 + r)) + term(0.5 * (1.0 - r));
}

/// tr(rho0 rho_t), the plain overlap.
inline double overlap_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho_t) {
  if (!validate_density(rho0).pass || !validate_density(rho_t).pass) {
    throw DomainError("fidelity: invalid density matrix");
  }
  return std::clamp((rho0 * rho_t).trace().real(), 0.0, 1.0);
}

/// Uhlmann fidelity in its qubit closed form
///   F = tr(rho0 rho_t) + 2 sqrt(det rho0 det rho_t).
/// Equals (1 + s0.s_t) / 2 whenever either state is pure.
inline double fidelity(const DensityMatrix& rho0, const DensityMatrix& rho_t) {
  if (!validate_density(rho0).pass || !validate_density(rho_t).pass) {
    throw DomainError("fidelity: invalid density matrix");
  }
  const double overlap = (rho0 * rho_t).trace().real();
  const double dets = std::max(0.0, rho0.det().real()) * std::max(0.0, rho_t.det().real());
  return std::clamp(overlap + 2.0 * std::sqrt(dets), 0.0, 1.0);
}

enum class FidelityKind { kUhlmann, kOverlap };

/// Per-grid-point diagnostics of a trajectory. Fidelity is measured against
/// the trajectory's initial state.
struct ObservableSeries {
  std::vector<double> tau;
  std::vector<BlochVector> states;
  std::vector<double> purity;
  std::vector<double> entropy;
  std::vector<double> bloch_norm;
  std::vector<double> fidelity;
  ModelParams params;
  FidelityKind fidelity_kind{FidelityKind::kUhlmann};

  std::size_t size() const { return tau.size(); }
  bool empty() const { return tau.empty(); }
};

inline ObservableSeries series(const Trajectory& traj,
                               FidelityKind kind = FidelityKind::kUhlmann) {
  ObservableSeries out;
  out.tau = traj.tau;
  out.states = traj.states;
  out.params = traj.params;
  out.fidelity_kind = kind;
  const std::size_t n = traj.size();
  out.purity.reserve(n);
  out.entropy.reserve(n);
  out.bloch_norm.reserve(n);
  out.fidelity.reserve(n);
  if (n == 0) return out;

  const DensityMatrix rho0 = bloch_to_density(traj.initial_state);
  for (const BlochVector& s : traj.states) {
    out.purity.push_back(purity(s));
    out.entropy.push_back(entropy(s));
    out.bloch_norm.push_back(bloch_norm(s));
    const DensityMatrix rho = bloch_to_density(s);
    out.fidelity.push_back(kind == FidelityKind::kUhlmann ? fidelity(rho0, rho)
                                                           : overlap_fidelity(rho0, rho));
  }
  return out;
}

enum class Tracked { kPurity, kBlochNorm, kFidelity };

inline std::string_view to_string(Tracked t) {
  switch (t) {
    case Tracked::kPurity: return "purity";
    case Tracked::kBlochNorm: return "bloch_norm";
    case Tracked::kFidelity: return "fidelity";
  }
  return "?";
}

inline Tracked parse_tracked(std::string_view name) {
  if (name == "purity") return Tracked::kPurity;
  if (name == "bloch_norm") return Tracked::kBlochNorm;
  if (name == "fidelity") return Tracked::kFidelity;
  throw DomainError("unknown tracked observable '" + std::string(name) + "'");
}

enum class DecayClass { kAbrupt, kGradual };

inline std::string_view to_string(DecayClass c) {
  return c == DecayClass::kAbrupt ? "abrupt" : "gradual";
}

struct DecaySummary {
  std::optional<double> half_time;
  std::optional<double> rate_estimate;
  std::optional<double> plateau_end;
  DecayClass classification{DecayClass::kGradual};
  double abrupt_threshold{0.0};
};

struct DecayOptions {
  /// half_time below this is "abrupt"; defaults to 1 / gamma_d.
  std::optional<double> abrupt_threshold;
  /// Decay counts as complete once the envelope excess over the asymptote
  /// falls to this fraction of its initial value.
  double completion_fraction{0.01};
  double plateau_level{0.99};
};

namespace detail {

inline const std::vector<double>& tracked_values(const ObservableSeries& s, Tracked t) {
  switch (t) {
    case Tracked::kPurity: return s.purity;
    case Tracked::kBlochNorm: return s.bloch_norm;
    case Tracked::kFidelity: return s.fidelity;
  }
  return s.purity;
}

// Long-time limit of the tracked observable when the state relaxes to the
// maximally mixed state.
inline double asymptote(const ObservableSeries& s, Tracked t) {
  switch (t) {
    case Tracked::kPurity: return 0.5;
    case Tracked::kBlochNorm: return 0.0;
    case Tracked::kFidelity: {
      const BlochVector mixed{};
      const DensityMatrix rho0 = bloch_to_density(s.states.front());
      return s.fidelity_kind == FidelityKind::kUhlmann
                 ? fidelity(rho0, bloch_to_density(mixed))
                 : overlap_fidelity(rho0, bloch_to_density(mixed));
    }
  }
  return 0.0;
}

// Ordinary least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

/// Summarizes how fast the tracked observable decays.
///
/// The envelope is the running maximum taken from the end of the series
/// backwards, measured as excess over the observable's relaxed value
/// (purity 1/2, |s| = 0, fidelity against I/2). The decay is complete when
/// that envelope drops below `completion_fraction` of its starting value;
/// only then is half_time reported. half_time is the first crossing of the
/// series midpoint (max + min) / 2, linearly interpolated. rate_estimate is the
/// negative log-linear slope of the envelope over the second half of the
/// decay window. plateau_end is the end of the initial run with
/// purity >= plateau_level.
inline DecaySummary decay_summary(const ObservableSeries& s, Tracked tracked,
                                  const DecayOptions& opts = {}) {
  DecaySummary out;
  out.abrupt_threshold = opts.abrupt_threshold.value_or(
      s.params.gamma_d > 0.0 ? 1.0 / s.params.gamma_d : std::numeric_limits<double>::infinity());
  if (s.empty()) return out;

  const std::size_t n = s.size();
  if (s.purity.front() >= opts.plateau_level) {
    std::size_t k = 0;
    while (k + 1 < n && s.purity[k + 1] >= opts.plateau_level) ++k;
    out.plateau_end = s.tau[k];
  }

  const std::vector<double>& v = detail::tracked_values(s, tracked);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi - *lo <= kPhysicalTolerance) return out;

  const double floor = detail::asymptote(s, tracked);
  std::vector<double> envelope(n);
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t k = n; k-- > 0;) {
    running = std::max(running, v[k] - floor);
    envelope[k] = running;
  }
  const double initial_excess = envelope.front();
  if (!(initial_excess > 0.0)) return out;

  std::size_t end = n - 1;
  bool complete = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (envelope[k] <= opts.completion_fraction * initial_excess) {
      end = k;
      complete = true;
      break;
    }
  }

  if (complete) {
    const double mid = 0.5 * (*hi + *lo);
    for (std::size_t k = 0; k < n; ++k) {
      if (v[k] <= mid) {
        if (k == 0) {
          out.half_time = s.tau[0];
        } else {
          const double frac = (v[k - 1] - mid) / (v[k - 1] - v[k]);
          out.half_time = s.tau[k - 1] + frac * (s.tau[k] - s.tau[k - 1]);
        }
        break;
      }
    }
  }

  const double window_start = 0.5 * s.tau[end];
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k <= end; ++k) {
    if (s.tau[k] >= window_start && envelope[k] > 0.0) {
      xs.push_back(s.tau[k]);
      ys.push_back(std::log(envelope[k]));
    }
  }
  if (xs.size() >= 3) out.rate_estimate = -detail::ls_slope(xs, ys);

  out.classification = out.half_time && *out.half_time < out.abrupt_threshold
                           ? DecayClass::kAbrupt
                           : DecayClass::kGradual;
  return out;
}

}  // namespace kaneq
