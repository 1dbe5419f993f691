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

// Driven, dephased qubit in scaled time tau.
//
// Density-matrix form:
//   drho/dtau = -i (omega/2) [cos(theta) sigma_y - sin(theta) sigma_x, rho]
//               - (gamma_d/4) [sigma_z, [sigma_z, rho]]
// Bloch form (ds/dtau = M s):
//   ds_x/dtau =  omega cos(theta) s_z - gamma_d s_x
//   ds_y/dtau =  omega sin(theta) s_z - gamma_d s_y
//   ds_z/dtau = -omega (cos(theta) s_x + sin(theta) s_y)
//
// Three independent solver paths are provided: fixed-step RK4 on the Bloch
// ODE, the exact propagator exp(M tau), and RK4 on the density matrix itself.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kaneq/qubit.hpp"

namespace kaneq {

/// How the dimensionless field ratio kappa relates to B_ac / B_z^2.
enum class KappaConvention {
  kText,     // kappa = 4 B_ac / B_z^2      -> omega = kappa / 2
  kCaption,  // kappa = 4 B_ac / (2 B_z^2)  -> omega = kappa
};

inline double omega_from_kappa(double kappa, KappaConvention conv = KappaConvention::kText) {
  return conv == KappaConvention::kText ? 0.5 * kappa : kappa;
}

/// gamma_d = 2 epsilon in units hbar = gamma' = 1.
inline double gamma_from_epsilon(double epsilon) { return 2.0 * epsilon; }

/// Raw field/noise parameters before absorption into omega and gamma_d.
struct RawParams {
  double kappa{0.0};
  double epsilon{0.0};
  KappaConvention convention{KappaConvention::kText};
};

struct ModelParams {
  double theta{0.0};    // field polarization angle, radians in [0, 2 pi)
  double omega{0.0};    // drive rate per unit tau
  double gamma_d{0.0};  // dephasing rate per unit tau
  std::optional<RawParams> raw;

  static ModelParams from_raw(double theta, RawParams raw) {
    ModelParams p;
    p.theta = theta;
    p.omega = omega_from_kappa(raw.kappa, raw.convention);
    p.gamma_d = gamma_from_epsilon(raw.epsilon);
    p.raw = raw;
    return p;
  }

  /// kappa plus an already-scaled dephasing rate; records epsilon = gamma_d / 2.
  static ModelParams from_kappa(double theta, double kappa, double gamma_d,
                                KappaConvention conv = KappaConvention::kText) {
    return from_raw(theta, RawParams{kappa, 0.5 * gamma_d, conv});
  }

  void validate() const {
    if (!std::isfinite(theta) || !std::isfinite(omega) || !std::isfinite(gamma_d)) {
      throw DomainError("model parameters must be finite");
    }
    if (omega < 0.0) throw DomainError("omega must be >= 0");
    if (gamma_d < 0.0) throw DomainError("gamma_d must be >= 0");
    if (theta < 0.0 || theta >= 2.0 * std::numbers::pi) {
      throw DomainError("theta must lie in [0, 2 pi)");
    }
    if (raw) {
      if (std::abs(omega - omega_from_kappa(raw->kappa, raw->convention)) > 1e-15 * (1.0 + omega) ||
          std::abs(gamma_d - gamma_from_epsilon(raw->epsilon)) > 1e-15 * (1.0 + gamma_d)) {
        throw DomainError("raw parameter block is inconsistent with omega/gamma_d");
      }
    }
  }
};

/// Dense 3x3 real matrix, row-major.
struct Matrix3 {
  std::array<double, 9> a{};

  constexpr double& operator()(int r, int c) { return a[static_cast<std::size_t>(3 * r + c)]; }
  constexpr double operator()(int r, int c) const { return a[static_cast<std::size_t>(3 * r + c)]; }

  static constexpr Matrix3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

  constexpr double trace() const { return a[0] + a[4] + a[8]; }

  /// Induced infinity norm (max row sum).
  double norm_inf() const {
    double n = 0.0;
    for (int r = 0; r < 3; ++r) {
      n = std::max(n, std::abs((*this)(r, 0)) + std::abs((*this)(r, 1)) + std::abs((*this)(r, 2)));
    }
    return n;
  }

  friend Matrix3 operator*(const Matrix3& l, const Matrix3& r) {
    Matrix3 out;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        out(i, j) = l(i, 0) * r(0, j) + l(i, 1) * r(1, j) + l(i, 2) * r(2, j);
      }
    }
    return out;
  }
  friend Matrix3 operator+(const Matrix3& l, const Matrix3& r) {
    Matrix3 out;
    for (std::size_t i = 0; i < 9; ++i) out.a[i] = l.a[i] + r.a[i];
    return out;
  }
  friend Matrix3 operator*(double k, const Matrix3& m) {
    Matrix3 out;
    for (std::size_t i = 0; i < 9; ++i) out.a[i] = k * m.a[i];
    return out;
  }
  friend BlochVector operator*(const Matrix3& m, const BlochVector& s) {
    return {m(0, 0) * s.x + m(0, 1) * s.y + m(0, 2) * s.z,
            m(1, 0) * s.x + m(1, 1) * s.y + m(1, 2) * s.z,
            m(2, 0) * s.x + m(2, 1) * s.y + m(2, 2) * s.z};
  }
  friend bool operator==(const Matrix3&, const Matrix3&) = default;
};

/// ds/dtau = m * s
struct Generator {
  Matrix3 m;
};

inline BlochVector bloch_rhs(const ModelParams& p, const BlochVector& s) {
  const double c = std::cos(p.theta);
  const double sn = std::sin(p.theta);
  return {p.omega * c * s.z - p.gamma_d * s.x,
          p.omega * sn * s.z - p.gamma_d * s.y,
          -p.omega * (c * s.x + sn * s.y)};
}

inline Generator generator(const ModelParams& p) {
  const double c = std::cos(p.theta);
  const double sn = std::sin(p.theta);
  return {Matrix3{{-p.gamma_d, 0.0, p.omega * c,
                   0.0, -p.gamma_d, p.omega * sn,
                   -p.omega * c, -p.omega * sn, 0.0}}};
}

/// Matrix exponential by scaling and squaring: the argument is scaled by 2^-k
/// until its infinity norm is <= 0.5, then a degree-13 Taylor polynomial is
/// evaluated and squared k times.
inline Matrix3 expm(const Matrix3& a) {
  constexpr int kDegree = 13;
  const double norm = a.norm_inf();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix3 scaled = std::ldexp(1.0, -squarings) * a;

  // Horner: I + A(I + A/2(I + A/3(... (I + A/13))))
  Matrix3 result = Matrix3::identity();
  for (int k = kDegree; k >= 1; --k) {
    result = Matrix3::identity() + (1.0 / k) * (scaled * result);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// exp(M tau) s0.
inline BlochVector propagate_exact(const ModelParams& p, const BlochVector& s0, double tau) {
  if (!(tau >= 0.0)) throw DomainError("propagate_exact requires tau >= 0");
  return expm(tau * generator(p).m) * s0;
}

/// One classical fourth-order Runge-Kutta step of the Bloch ODE.
inline BlochVector rk4_step(const ModelParams& p, const BlochVector& s, double dtau) {
  if (!(dtau > 0.0)) throw DomainError("rk4_step requires dtau > 0");
  const BlochVector k1 = bloch_rhs(p, s);
  const BlochVector k2 = bloch_rhs(p, s + (0.5 * dtau) * k1);
  const BlochVector k3 = bloch_rhs(p, s + (0.5 * dtau) * k2);
  const BlochVector k4 = bloch_rhs(p, s + dtau * k3);
  return s + (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace detail {

inline Matrix2 density_rhs_unchecked(const ModelParams& p, const Matrix2& rho) {
  const Matrix2 drive =
      Complex{std::cos(p.theta), 0.0} * pauli::y() - Complex{std::sin(p.theta), 0.0} * pauli::x();
  const Matrix2 sz = pauli::z();
  return Complex{0.0, -0.5 * p.omega} * commutator(drive, rho) -
         Complex{0.25 * p.gamma_d, 0.0} * commutator(sz, commutator(sz, rho));
}

inline Matrix2 density_rk4_step(const ModelParams& p, const Matrix2& rho, double dtau) {
  const Matrix2 k1 = density_rhs_unchecked(p, rho);
  const Matrix2 k2 = density_rhs_unchecked(p, rho + Complex{0.5 * dtau} * k1);
  const Matrix2 k3 = density_rhs_unchecked(p, rho + Complex{0.5 * dtau} * k2);
  const Matrix2 k4 = density_rhs_unchecked(p, rho + Complex{dtau} * k3);
  return rho + Complex{dtau / 6.0} * (k1 + Complex{2.0} * k2 + Complex{2.0} * k3 + k4);
}

}  // namespace detail

/// drho/dtau evaluated directly from the commutator form. Serves as an oracle
/// for the Bloch-vector paths.
inline Matrix2 density_rhs_oracle(const ModelParams& p, const DensityMatrix& rho) {
  const ValidationReport rep = validate_density(rho);
  if (!rep.pass) throw DomainError("density_rhs_oracle: invalid density matrix");
  return detail::density_rhs_unchecked(p, rho);
}

enum class Method { kRk4, kExact, kOracle };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kRk4: return "rk4";
    case Method::kExact: return "exact";
    case Method::kOracle: return "oracle";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  if (name == "rk4") return Method::kRk4;
  if (name == "exact") return Method::kExact;
  if (name == "oracle") return Method::kOracle;
  throw DomainError("unknown method '" + std::string(name) + "' (expected rk4, exact or oracle)");
}

/// Worst trace/hermiticity defects seen by the density-matrix path.
struct OracleDefects {
  double max_trace_defect{0.0};
  double max_hermiticity_defect{0.0};
};

struct Trajectory {
  std::vector<double> tau;
  std::vector<BlochVector> states;
  ModelParams params;
  BlochVector initial_state;
  Method method{Method::kRk4};
  std::optional<OracleDefects> oracle_defects;  // set for Method::kOracle

  std::size_t size() const { return tau.size(); }
};

/// Grid {0, dtau, 2 dtau, ..., tau_max}. When tau_max is not a multiple of
/// dtau the last interval is shortened so that the grid ends at tau_max.
inline std::vector<double> make_grid(double tau_max, double dtau) {
  const double ratio = tau_max / dtau;
  auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  if (steps == 0) steps = 1;
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) grid[k] = static_cast<double>(k) * dtau;
  grid[steps] = tau_max;
  return grid;
}

inline Trajectory integrate(const ModelParams& p, const BlochVector& s0, double tau_max,
                            double dtau, Method method = Method::kRk4) {
  p.validate();
  require_physical(s0, "initial state");
  if (!std::isfinite(tau_max) || !(tau_max > 0.0)) throw DomainError("tau_max must be > 0");
  if (!std::isfinite(dtau) || !(dtau > 0.0)) throw DomainError("dtau must be > 0");
  if (dtau > tau_max) throw DomainError("dtau must not exceed tau_max");

  Trajectory traj;
  traj.tau = make_grid(tau_max, dtau);
  traj.params = p;
  traj.initial_state = s0;
  traj.method = method;
  traj.states.reserve(traj.tau.size());
  traj.states.push_back(s0);

  const std::size_t n = traj.tau.size();
  switch (method) {
    case Method::kRk4: {
      BlochVector s = s0;
      for (std::size_t k = 1; k < n; ++k) {
        s = rk4_step(p, s, traj.tau[k] - traj.tau[k - 1]);
        traj.states.push_back(s);
      }
      break;
    }
    case Method::kExact: {
      const Matrix3 m = generator(p).m;
      const Matrix3 step = expm(dtau * m);
      BlochVector s = s0;
      for (std::size_t k = 1; k < n; ++k) {
        const double h = traj.tau[k] - traj.tau[k - 1];
        s = (h == dtau ? step : expm(h * m)) * s;
        traj.states.push_back(s);
      }
      break;
    }
    case Method::kOracle: {
      Matrix2 rho = bloch_to_density(s0);
      OracleDefects defects;
      for (std::size_t k = 1; k < n; ++k) {
        rho = detail::density_rk4_step(p, rho, traj.tau[k] - traj.tau[k - 1]);
        const ValidationReport rep = validate_density(rho);
        defects.max_trace_defect = std::max(defects.max_trace_defect, rep.trace_defect);
        defects.max_hermiticity_defect =
            std::max(defects.max_hermiticity_defect, rep.hermiticity_defect);
        traj.states.push_back(pauli_components(rho));
      }
      traj.oracle_defects = defects;
      break;
    }
  }
  return traj;
}

/// Structure of the stationary set {s : M s = 0} inside the Bloch ball.
enum class FixedPoint { kUniqueOrigin, kZAxisLine, kRotationAxisLine, kWholeBall };

inline std::string_view to_string(FixedPoint f) {
  switch (f) {
    case FixedPoint::kUniqueOrigin: return "unique_origin";
    case FixedPoint::kZAxisLine: return "z_axis_line";
    case FixedPoint::kRotationAxisLine: return "rotation_axis_line";
    case FixedPoint::kWholeBall: return "whole_ball";
  }
  return "?";
}

// With gamma_d > 0 the first two rows force s_x, s_y proportional to s_z, and
// the third row then gives omega^2 s_z / gamma_d = 0. With gamma_d = 0 and
// omega > 0 the null space is the rotation axis (-sin, cos, 0).
inline FixedPoint fixed_point(const ModelParams& p) {
  if (p.omega > 0.0 && p.gamma_d > 0.0) return FixedPoint::kUniqueOrigin;
  if (p.omega == 0.0 && p.gamma_d > 0.0) return FixedPoint::kZAxisLine;
  if (p.omega > 0.0) return FixedPoint::kRotationAxisLine;
  return FixedPoint::kWholeBall;
}

}  // namespace kaneq
