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
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace kaneq {

/// Slack used by every physicality check (norm of s, hermiticity, trace,
/// eigenvalue sign).
inline constexpr double kPhysicalTolerance = 1e-12;

/// Raised when an input violates a physical or domain constraint
/// (unphysical state, negative rate, non-finite parameter, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Complex = std::complex<double>;

/// Coherent (Bloch) vector of a qubit, rho = (1 + s.sigma) / 2.
struct BlochVector {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  constexpr double norm_squared() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_squared()); }
  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }

  friend constexpr BlochVector operator+(const BlochVector& a, const BlochVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr BlochVector operator*(double k, const BlochVector& a) {
    return {k * a.x, k * a.y, k * a.z};
  }
  friend constexpr bool operator==(const BlochVector&, const BlochVector&) = default;
};

constexpr double dot(const BlochVector& a, const BlochVector& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Largest componentwise difference.
inline double max_abs_diff(const BlochVector& a, const BlochVector& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

/// Dense 2x2 complex matrix, row-major.
struct Matrix2 {
  std::array<Complex, 4> a{};

  constexpr Complex& operator()(int r, int c) { return a[static_cast<std::size_t>(2 * r + c)]; }
  constexpr const Complex& operator()(int r, int c) const {
    return a[static_cast<std::size_t>(2 * r + c)];
  }

  Complex trace() const { return a[0] + a[3]; }
  Complex det() const { return a[0] * a[3] - a[1] * a[2]; }
  Matrix2 adjoint() const {
    return {{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}};
  }

  friend Matrix2 operator+(const Matrix2& l, const Matrix2& r) {
    return {{l.a[0] + r.a[0], l.a[1] + r.a[1], l.a[2] + r.a[2], l.a[3] + r.a[3]}};
  }
  friend Matrix2 operator-(const Matrix2& l, const Matrix2& r) {
    return {{l.a[0] - r.a[0], l.a[1] - r.a[1], l.a[2] - r.a[2], l.a[3] - r.a[3]}};
  }
  friend Matrix2 operator*(Complex k, const Matrix2& m) {
    return {{k * m.a[0], k * m.a[1], k * m.a[2], k * m.a[3]}};
  }
  friend Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
    return {{l.a[0] * r.a[0] + l.a[1] * r.a[2], l.a[0] * r.a[1] + l.a[1] * r.a[3],
             l.a[2] * r.a[0] + l.a[3] * r.a[2], l.a[2] * r.a[1] + l.a[3] * r.a[3]}};
  }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Qubit density matrix. Functions that require a physical state validate
/// their argument; the type itself carries no invariant so that it can hold
/// intermediate integrator stages.
using DensityMatrix = Matrix2;

inline Matrix2 commutator(const Matrix2& l, const Matrix2& r) { return l * r - r * l; }

inline double max_abs_diff(const Matrix2& l, const Matrix2& r) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(l.a[i] - r.a[i]));
  return d;
}

namespace pauli {

inline Matrix2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
inline Matrix2 x() { return {{0.0, 1.0, 1.0, 0.0}}; }
inline Matrix2 y() { return {{0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0}}; }
inline Matrix2 z() { return {{1.0, 0.0, 0.0, -1.0}}; }

}  // namespace pauli

struct ValidationReport {
  double hermiticity_defect{0.0};  // max |m(i,j) - conj(m(j,i))|
  double trace_defect{0.0};        // |tr m - 1|
  double min_eigenvalue{0.0};      // of the Hermitian part
  bool pass{false};
};

/// Always returns a report; never throws.
inline ValidationReport validate_density(const DensityMatrix& rho) {
  ValidationReport rep;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      rep.hermiticity_defect =
          std::max(rep.hermiticity_defect, std::abs(rho(i, j) - std::conj(rho(j, i))));
    }
  }
  rep.trace_defect = std::abs(rho.trace() - 1.0);

  // Closed-form eigenvalues of [[a, b], [conj b, d]].
  const double a = rho(0, 0).real();
  const double d = rho(1, 1).real();
  const Complex b = 0.5 * (rho(0, 1) + std::conj(rho(1, 0)));
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(b));
  rep.min_eigenvalue = 0.5 * (a + d) - half_gap;

  rep.pass = rep.hermiticity_defect <= kPhysicalTolerance &&
             rep.trace_defect <= kPhysicalTolerance &&
             rep.min_eigenvalue >= -kPhysicalTolerance;
  return rep;
}

/// Throws DomainError unless |s| <= 1 (+ tolerance) and s is finite.
inline void require_physical(const BlochVector& s, const char* what = "Bloch vector") {
  if (!s.is_finite()) throw DomainError(std::string(what) + " has non-finite components");
  const double n = s.norm();
  if (n > 1.0 + kPhysicalTolerance) {
    throw DomainError(std::string(what) + " is unphysical: |s| = " + std::to_string(n) + " > 1");
  }
}

/// rho = (1 + s_x sigma_x + s_y sigma_y + s_z sigma_z) / 2
inline DensityMatrix bloch_to_density(const BlochVector& s) {
  require_physical(s);
  return {{Complex{0.5 * (1.0 + s.z), 0.0}, Complex{0.5 * s.x, -0.5 * s.y},
           Complex{0.5 * s.x, 0.5 * s.y}, Complex{0.5 * (1.0 - s.z), 0.0}}};
}

/// s_i = tr(m sigma_i) without any validation. Linear in m, so it also maps
/// derivatives dm/dtau to ds/dtau.
inline BlochVector pauli_components(const Matrix2& m) {
  const Complex tx = m(0, 1) + m(1, 0);
  const Complex ty = Complex{0.0, 1.0} * (m(0, 1) - m(1, 0));
  const Complex tz = m(0, 0) - m(1, 1);
  return {tx.real(), ty.real(), tz.real()};
}

/// Inverse of bloch_to_density. Rejects non-Hermitian or non-unit-trace input.
inline BlochVector density_to_bloch(const DensityMatrix& rho) {
  const ValidationReport rep = validate_density(rho);
  if (rep.hermiticity_defect > kPhysicalTolerance) {
    throw DomainError("density matrix is not Hermitian (defect " +
                      std::to_string(rep.hermiticity_defect) + ")");
  }
  if (rep.trace_defect > kPhysicalTolerance) {
    throw DomainError("density matrix trace differs from 1 by " +
                      std::to_string(rep.trace_defect));
  }
  return pauli_components(rho);
}

}  // namespace kaneq
