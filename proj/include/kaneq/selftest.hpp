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

// Built-in analytic-oracle checks, run by `kaneq selftest`.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kaneq/dynamics.hpp"
#include "kaneq/experiments.hpp"
#include "kaneq/observables.hpp"
#include "kaneq/qubit.hpp"

namespace kaneq {

struct SelfCheck {
  std::string name;
  bool passed{false};
  std::string detail;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline SelfCheck bounded(std::string name, double err, double tol) {
  return {std::move(name), err <= tol, "error " + sci(err) + " (tolerance " + sci(tol) + ")"};
}

}  // namespace detail

inline std::vector<SelfCheck> run_selftest() {
  using std::numbers::pi;
  std::vector<SelfCheck> out;

  // Pure dephasing of a y-polarized state when the field axis is y.
  {
    ModelParams p;
    p.omega = 0.025;
    p.gamma_d = 0.5;
    const Trajectory t = integrate(p, {0, 1, 0}, 20.0, 1e-3);
    double err = 0.0, perr = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double e = std::exp(-0.5 * t.tau[k]);
      err = std::max(err, max_abs_diff(t.states[k], {0.0, e, 0.0}));
      perr = std::max(perr, std::abs(purity(t.states[k]) - 0.5 * (1.0 + e * e)));
    }
    out.push_back(detail::bounded("rk4 exponential dephasing", err, 1e-8));
    out.push_back(detail::bounded("purity (1+e^-tau)/2", perr, 1e-8));
  }

  // Diagonal generator exponentiates componentwise.
  {
    ModelParams p;
    p.gamma_d = 0.7;
    const BlochVector s0{0.3, -0.4, 0.5};
    const BlochVector got = propagate_exact(p, s0, 3.0);
    const double e = std::exp(-2.1);
    out.push_back(detail::bounded("expm diagonal closed form", max_abs_diff(got, {0.3 * e, -0.4 * e, 0.5}), 1e-13));
  }

  // Undamped rotation: norm conserved, full turn after 2 pi / omega.
  {
    ModelParams p;
    p.theta = pi / 3;
    p.omega = 0.8;
    const BlochVector s0{0.0, 0.0, 1.0};
    const Trajectory t = integrate(p, s0, 2.0 * pi / p.omega, 1e-3);
    double drift = 0.0;
    for (const auto& s : t.states) drift = std::max(drift, std::abs(s.norm() - 1.0));
    out.push_back(detail::bounded("unitary norm conservation", drift, 1e-9));
    out.push_back(detail::bounded("rotation period 2 pi / omega", max_abs_diff(t.states.back(), s0), 1e-6));
  }

  // Bloch right-hand side against the commutator form.
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double err = 0.0;
    for (int i = 0; i < 50; ++i) {
      ModelParams p;
      p.theta = 2.0 * pi * u(rng);
      p.omega = u(rng);
      p.gamma_d = u(rng);
      const BlochVector s{0.5 * u(rng), -0.4 * u(rng), 0.6 * u(rng)};
      const BlochVector via_rho = pauli_components(density_rhs_oracle(p, bloch_to_density(s)));
      err = std::max(err, max_abs_diff(via_rho, bloch_rhs(p, s)));
    }
    out.push_back(detail::bounded("density rhs matches Bloch rhs", err, 1e-13));
  }

  // Three solvers agree.
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double err = 0.0;
    for (int i = 0; i < 5; ++i) {
      ModelParams p;
      p.theta = 2.0 * pi * u(rng);
      p.omega = u(rng);
      p.gamma_d = u(rng);
      const BlochVector s0{0.4 * u(rng), 0.4 * u(rng), -0.4 * u(rng)};
      const Trajectory a = integrate(p, s0, 5.0, 1e-3, Method::kRk4);
      const Trajectory b = integrate(p, s0, 5.0, 1e-3, Method::kExact);
      const Trajectory c = integrate(p, s0, 5.0, 1e-3, Method::kOracle);
      for (std::size_t k = 0; k < a.size(); ++k) {
        err = std::max({err, max_abs_diff(a.states[k], b.states[k]),
                        max_abs_diff(a.states[k], c.states[k])});
      }
    }
    out.push_back(detail::bounded("rk4 / exact / density solvers agree", err, 1e-6));
  }

  // Observable reference values.
  {
    const BlochVector half{0.5, 0.0, 0.0};
    out.push_back(detail::bounded("purity at |s| = 1/2", std::abs(purity(half) - 0.625), 1e-15));
    const double s_half = -0.75 * std::log(0.75) - 0.25 * std::log(0.25);
    out.push_back(detail::bounded("entropy at |s| = 1/2", std::abs(entropy(half) - s_half), 1e-15));
    out.push_back(detail::bounded("entropy of I/2 is ln 2", std::abs(entropy({}) - std::numbers::ln2), 1e-15));
    const double f = fidelity(bloch_to_density({0, 1, 0}), bloch_to_density({0, -1, 0}));
    out.push_back(detail::bounded("fidelity of orthogonal pure states", f, 1e-15));
    const double g = fidelity(bloch_to_density({0, 1, 0}), bloch_to_density({}));
    out.push_back(detail::bounded("fidelity of pure state with I/2", std::abs(g - 0.5), 1e-15));
  }

  // Relaxation to the maximally mixed state for preset 1a.
  {
    const ScenarioSpec spec = figure_scenario("1a");
    const auto runs = run_scenario(spec);
    const SaturationReport rep = saturation_check(runs.front().observables, runs.front().params);
    out.push_back({"preset 1a saturates", rep.status == CheckStatus::kPass, rep.message});
  }
  return out;
}

}  // namespace kaneq
