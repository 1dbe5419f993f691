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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kaneq/observables.hpp"
#include "test_util.hpp"

using namespace kaneq;

namespace {

// Square root of a 2x2 positive semidefinite matrix.
Matrix2 SqrtPsd(const Matrix2& m) {
  const double d = std::sqrt(std::max(0.0, m.det().real()));
  const double t = std::sqrt(m.trace().real() + 2.0 * d);
  if (t == 0.0) return Matrix2{};
  return Complex{1.0 / t} * (m + Complex{d} * pauli::identity());
}

// (tr sqrt(sqrt(a) b sqrt(a)))^2 from explicit eigenvalues.
double UhlmannBruteForce(const Matrix2& a, const Matrix2& b) {
  const Matrix2 ra = SqrtPsd(a);
  const Matrix2 m = ra * b * ra;
  const double tr = m.trace().real();
  const double det = m.det().real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double l1 = std::max(0.0, tr / 2.0 + disc);
  const double l2 = std::max(0.0, tr / 2.0 - disc);
  const double root = std::sqrt(l1) + std::sqrt(l2);
  return root * root;
}

}  // namespace

TEST(Purity, Examples) {
  EXPECT_DOUBLE_EQ(purity({0, 0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(purity({}), 0.5);
  EXPECT_DOUBLE_EQ(purity({0.5, 0, 0}), 0.625);
  EXPECT_THROW(purity({1, 1, 0}), DomainError);
}

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy({0, 1, 0}), 0.0);
  EXPECT_NEAR(entropy({}), std::numbers::ln2, 1e-15);
  EXPECT_NEAR(entropy({0, 0, 0.5}), -0.75 * std::log(0.75) - 0.25 * std::log(0.25), 1e-15);
  EXPECT_THROW(entropy({0, 0, 1.1}), DomainError);
}

TEST(Entropy, MonotoneInNorm) {
  double prev = std::numbers::ln2 + 1e-15;
  for (double r = 0.0; r <= 1.0; r += 0.01) {
    const double s = entropy({0, 0, r});
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Fidelity, Examples) {
  const Matrix2 up = bloch_to_density({0, 0, 1});
  const Matrix2 down = bloch_to_density({0, 0, -1});
  const Matrix2 mixed = bloch_to_density({});
  EXPECT_DOUBLE_EQ(fidelity(up, up), 1.0);
  EXPECT_DOUBLE_EQ(fidelity(up, down), 0.0);
  EXPECT_DOUBLE_EQ(fidelity(up, mixed), 0.5);
  EXPECT_DOUBLE_EQ(fidelity(mixed, mixed), 1.0);
  EXPECT_DOUBLE_EQ(overlap_fidelity(mixed, mixed), 0.5);
}

TEST(Fidelity, RejectsInvalid) {
  const Matrix2 bad{{1.2, 0.0, 0.0, -0.2}};
  EXPECT_THROW(fidelity(bad, bloch_to_density({})), DomainError);
  EXPECT_THROW(overlap_fidelity(bloch_to_density({}), bad), DomainError);
}

TEST(FidelityProperties, MatchesBruteForceUhlmann) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    const Matrix2 a = bloch_to_density(testutil::random_in_ball(rng));
    const Matrix2 b = bloch_to_density(testutil::random_in_ball(rng));
    EXPECT_NEAR(fidelity(a, b), UhlmannBruteForce(a, b), 1e-12);
  }
}

TEST(FidelityProperties, SymmetricBoundedAndPureReduction) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 2000; ++i) {
    const BlochVector s = testutil::random_in_ball(rng);
    const BlochVector t = testutil::random_in_ball(rng);
    const Matrix2 a = bloch_to_density(s), b = bloch_to_density(t);
    const double f = fidelity(a, b);
    EXPECT_NEAR(f, fidelity(b, a), 1e-15);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_GE(f + 1e-15, overlap_fidelity(a, b));
    EXPECT_NEAR(overlap_fidelity(a, b), 0.5 * (1.0 + dot(s, t)), 1e-15);
    // sqrt(det) has unbounded slope at det = 0, so rounding of order 1e-17
    // in a pure state's determinant shows up as ~1e-8 in F.
    const BlochVector pure = (1.0 / s.norm()) * s;
    EXPECT_NEAR(fidelity(bloch_to_density(pure), b), 0.5 * (1.0 + dot(pure, t)), 1e-7);
  }
}

TEST(Series, ColumnsAgreeWithPointwiseObservables) {
  ModelParams p;
  p.theta = 0.3;
  p.omega = 0.4;
  p.gamma_d = 0.2;
  const Trajectory t = integrate(p, {0.6, 0.0, 0.8}, 10.0, 0.01);
  const ObservableSeries s = series(t);
  ASSERT_EQ(s.size(), t.size());
  EXPECT_DOUBLE_EQ(s.fidelity.front(), 1.0);
  const Matrix2 rho0 = bloch_to_density(t.states.front());
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_EQ(s.purity[k], purity(t.states[k]));
    EXPECT_EQ(s.entropy[k], entropy(t.states[k]));
    EXPECT_EQ(s.bloch_norm[k], t.states[k].norm());
    EXPECT_EQ(s.fidelity[k], fidelity(rho0, bloch_to_density(t.states[k])));
  }
  const ObservableSeries o = series(t, FidelityKind::kOverlap);
  EXPECT_NEAR(o.fidelity.back(), 0.5 * (1.0 + dot(t.states.front(), t.states.back())), 1e-15);
}

TEST(Tracked, NamesRoundTrip) {
  for (Tracked t : {Tracked::kPurity, Tracked::kBlochNorm, Tracked::kFidelity}) {
    EXPECT_EQ(parse_tracked(to_string(t)), t);
  }
  EXPECT_THROW(parse_tracked("entropy"), DomainError);
}

TEST(DecaySummary, ExponentialNorm) {
  const auto tau = testutil::linspace(0.0, 10.0, 1001);
  std::vector<double> r;
  for (double t : tau) r.push_back(std::exp(-t));
  const ObservableSeries s = testutil::series_from_norms(tau, r, 1.0);

  const DecaySummary norm = decay_summary(s, Tracked::kBlochNorm);
  ASSERT_TRUE(norm.half_time && norm.rate_estimate);
  EXPECT_NEAR(*norm.half_time, std::log(2.0), 1e-4);
  EXPECT_NEAR(*norm.rate_estimate, 1.0, 1e-9);
  EXPECT_EQ(norm.classification, DecayClass::kAbrupt);
  EXPECT_EQ(norm.abrupt_threshold, 1.0);

  // purity - 1/2 = exp(-2 tau) / 2
  const DecaySummary pur = decay_summary(s, Tracked::kPurity);
  ASSERT_TRUE(pur.half_time && pur.rate_estimate && pur.plateau_end);
  EXPECT_NEAR(*pur.half_time, 0.5 * std::log(2.0), 1e-4);
  EXPECT_NEAR(*pur.rate_estimate, 2.0, 1e-9);
  EXPECT_DOUBLE_EQ(*pur.plateau_end, 0.01);
}

TEST(DecaySummary, IncompleteDecayHasNoHalfTime) {
  const auto tau = testutil::linspace(0.0, 10.0, 501);
  std::vector<double> r;
  for (double t : tau) r.push_back(std::exp(-0.1 * t));
  const DecaySummary d = decay_summary(testutil::series_from_norms(tau, r, 0.1), Tracked::kBlochNorm);
  EXPECT_FALSE(d.half_time.has_value());
  ASSERT_TRUE(d.rate_estimate.has_value());
  EXPECT_NEAR(*d.rate_estimate, 0.1, 1e-9);
  EXPECT_EQ(d.classification, DecayClass::kGradual);
}

TEST(DecaySummary, FlatSeries) {
  const auto tau = testutil::linspace(0.0, 1.0, 11);
  const std::vector<double> r(11, 0.5);
  const DecaySummary d = decay_summary(testutil::series_from_norms(tau, r), Tracked::kPurity);
  EXPECT_FALSE(d.half_time.has_value());
  EXPECT_FALSE(d.rate_estimate.has_value());
  EXPECT_FALSE(d.plateau_end.has_value());
  EXPECT_EQ(d.classification, DecayClass::kGradual);
}

TEST(DecaySummary, OscillatingEnvelope) {
  // Peaks of exp(-tau) (1 + cos 40 tau) / 2 decay at rate 1; the fit window
  // spans many periods so the stepped envelope averages out.
  const auto tau = testutil::linspace(0.0, 12.0, 12001);
  std::vector<double> r;
  for (double t : tau) r.push_back(std::exp(-t) * 0.5 * (1.0 + std::cos(40.0 * t)));
  const DecaySummary d = decay_summary(testutil::series_from_norms(tau, r), Tracked::kBlochNorm);
  ASSERT_TRUE(d.rate_estimate.has_value());
  EXPECT_NEAR(*d.rate_estimate, 1.0, 0.05);
  ASSERT_TRUE(d.half_time.has_value());
  EXPECT_LT(*d.half_time, std::log(2.0));
}

TEST(DecaySummary, ExplicitThreshold) {
  const auto tau = testutil::linspace(0.0, 10.0, 1001);
  std::vector<double> r;
  for (double t : tau) r.push_back(std::exp(-t));
  DecayOptions opts;
  opts.abrupt_threshold = 0.1;
  const DecaySummary d = decay_summary(testutil::series_from_norms(tau, r), Tracked::kBlochNorm, opts);
  EXPECT_EQ(d.classification, DecayClass::kGradual);
  EXPECT_EQ(d.abrupt_threshold, 0.1);
}

TEST(DecaySummaryProperties, HalfTimeScalesInverselyWithRate) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double k = u(rng);
    const auto tau = testutil::linspace(0.0, 10.0 / k, 2001);
    std::vector<double> r;
    for (double t : tau) r.push_back(std::exp(-k * t));
    const DecaySummary d = decay_summary(testutil::series_from_norms(tau, r, k), Tracked::kBlochNorm);
    ASSERT_TRUE(d.half_time && d.rate_estimate);
    EXPECT_NEAR(*d.half_time * k, std::log(2.0), 1e-3);
    EXPECT_NEAR(*d.rate_estimate / k, 1.0, 1e-9);
  }
}
