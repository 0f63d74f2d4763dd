// Copyright 2026 The persweep Authors
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

#include "persweep/steady_state.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"

namespace persweep {
namespace {

using testing::UnitProfile;

const CoverageSet kTwoInterval({{0.2, 0.3}, {0.6, 0.7}});

// Random stabilizing instance: alpha and coverage are redrawn until the
// margin is comfortably positive.
struct Instance {
  ReciprocalProfile profile;
  CoverageSet coverage;
  double p = 1.0;
  double c = 6.0;
};

Instance RandomStabilizing(std::mt19937_64& rng, std::size_t cells, double p, double c) {
  for (;;) {
    Instance in{ReciprocalProfile::Rectangular(testing::RandomAlpha(rng, cells, 0.5, 2.0)),
                testing::RandomCoverage(rng, 4), p, c};
    const double margin = c * in.profile.CoverageTime(in.coverage) - p * in.profile.CycleTime();
    if (margin > 0.01 * p * in.profile.CycleTime()) return in;
  }
}

CoverageSet Shift(const CoverageSet& f, double s) {
  std::vector<ArcInterval> arcs;
  for (const auto& iv : f.intervals()) {
    arcs.push_back({std::fmod(iv.start + s, 1.0), std::fmod(iv.end + s, 1.0)});
  }
  return CoverageSet(std::move(arcs));
}

TEST(ComputeN, TwoIntervalValues) {
  const Decomposition dec = Decompose(kTwoInterval);
  const auto v = UnitProfile();
  EXPECT_NEAR(ComputeN(dec, 1, 1, v, 1.0, 6.0), -0.2, 1e-14);
  EXPECT_NEAR(ComputeN(dec, 0, 1, v, 1.0, 6.0), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(ComputeN(dec, 0, 0, v, 1.0, 6.0), 0.0);
  // A full lap back to the same endpoint nets p T - c tau.
  EXPECT_NEAR(ComputeN(dec, 0, 2, v, 1.0, 6.0), 1.0 - 1.2, 1e-14);
}

TEST(EndpointValues, TwoInterval) {
  const auto y = EndpointValues(UnitProfile(), kTwoInterval, 1.0, 6.0);
  ASSERT_EQ(y.size(), 2u);
  EXPECT_NEAR(y[0], 0.0, 1e-14);
  EXPECT_NEAR(y[1], 0.0, 1e-14);
  for (double z : EndpointValues(UnitProfile(), CoverageSet::Full(), 1.0, 6.0)) EXPECT_EQ(z, 0.0);
}

TEST(MaxH, TwoInterval) {
  const PointSteadyState s = AnalyzePoint(UnitProfile(), kTwoInterval, 1.0, 6.0);
  ASSERT_TRUE(s.stabilizing);
  EXPECT_NEAR(s.h, 0.5, 1e-14);
  EXPECT_NEAR(s.argmax_theta, 0.2, 1e-15);
  EXPECT_NEAR(s.at_x[0], 0.5, 1e-14);
  EXPECT_NEAR(s.at_x[1], 0.3, 1e-14);
}

TEST(MaxH, FullCoverageIsZero) {
  EXPECT_DOUBLE_EQ(MaxH(UnitProfile(), CoverageSet::Full(), 1.0, 6.0), 0.0);
}

TEST(MaxH, DivergentThrowsWithGrowth) {
  try {
    MaxH(UnitProfile(), kTwoInterval, 1.3, 6.0);
    FAIL() << "expected DivergentError";
  } catch (const DivergentError& e) {
    EXPECT_NEAR(e.growth_per_cycle(), 0.1, 1e-14);
  }
  // Zero margin is not stabilizing.
  EXPECT_THROW(MaxH(UnitProfile(), kTwoInterval, 1.2, 6.0), DivergentError);
}

TEST(MaxH, SingleIntervalClosedForm) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = ReciprocalProfile::Rectangular(testing::RandomAlpha(rng, 8, 0.5, 2.0));
    const double a = u(rng);
    const double len = 0.3 + 0.5 * u(rng);
    const CoverageSet f({{a, std::fmod(a + len, 1.0)}});
    const double tau = v.CoverageTime(f);
    const double p = 1.0;
    const double c = 2.0 * v.CycleTime() / tau;  // margin = T
    const PointSteadyState s = AnalyzePoint(v, f, p, c);
    ASSERT_TRUE(s.stabilizing);
    EXPECT_NEAR(s.h, p * (v.CycleTime() - tau), 1e-12);
    EXPECT_NEAR(s.at_y[0], 0.0, 1e-12);
  }
}

TEST(MaxH, RelabelingInvariance) {
  std::mt19937_64 rng(23);
  const std::size_t n = 10;
  for (int trial = 0; trial < 40; ++trial) {
    const Instance in = RandomStabilizing(rng, n, 1.0, 5.0);
    const std::size_t s = 1 + trial % (n - 1);
    std::vector<double> rotated(n);
    for (std::size_t j = 0; j < n; ++j) rotated[(j + s) % n] = in.profile.alpha()[j];
    const double shift = static_cast<double>(s) / static_cast<double>(n);
    const double h0 = MaxH(in.profile, in.coverage, in.p, in.c);
    const double h1 = MaxH(ReciprocalProfile::Rectangular(rotated), Shift(in.coverage, shift), in.p, in.c);
    EXPECT_NEAR(h0, h1, 1e-12 * (1.0 + h0));
  }
}

TEST(MaxH, MaximaSitAtLeftEndpoints) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance in = RandomStabilizing(rng, 12, 3.0, 8.5);
    const PointSteadyState s = AnalyzePoint(in.profile, in.coverage, in.p, in.c);
    const auto& x = s.decomposition.x;
    EXPECT_NE(std::find(x.begin(), x.end(), s.argmax_theta), x.end());
    EXPECT_DOUBLE_EQ(s.h, *std::max_element(s.at_x.begin(), s.at_x.end()));
  }
}

TEST(SteadyStateCurve, MatchesEndpointValuesAndTouchesZero) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance in = RandomStabilizing(rng, 1 + trial % 15, 1.0, 4.0 + trial % 5);
    const PointSteadyState s = AnalyzePoint(in.profile, in.coverage, in.p, in.c);
    const SteadyStateCurve curve(in.profile, in.coverage, in.p, in.c);
    const double tol = 1e-12 * (in.p + in.c) * in.profile.CycleTime();
    for (std::size_t k = 0; k < s.decomposition.size(); ++k) {
      EXPECT_NEAR(curve.ValueAt(s.decomposition.x[k]), s.at_x[k], tol);
      EXPECT_NEAR(curve.ValueAt(s.decomposition.y[k]), s.at_y[k], tol);
    }
    EXPECT_NEAR(curve.Max(), s.h, tol);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& k : curve.knots()) {
      EXPECT_GE(k.value, 0.0);
      lowest = std::min(lowest, k.value);
    }
    EXPECT_EQ(lowest, 0.0);
    EXPECT_EQ(curve.knots().front().theta, 0.0);
    EXPECT_EQ(curve.knots().back().theta, 1.0);
    EXPECT_NEAR(curve.knots().front().value, curve.knots().back().value, tol);
  }
}

TEST(SteadyStateCurve, TwoIntervalShape) {
  const SteadyStateCurve curve(UnitProfile(), kTwoInterval, 1.0, 6.0);
  EXPECT_NEAR(curve.ValueAt(0.0), 0.3, 1e-14);
  EXPECT_NEAR(curve.ValueAt(0.2), 0.5, 1e-14);
  EXPECT_NEAR(curve.ValueAt(0.25), 0.25, 1e-14);
  EXPECT_NEAR(curve.ValueAt(0.3), 0.0, 1e-14);
  EXPECT_NEAR(curve.ValueAt(0.6), 0.3, 1e-14);
  EXPECT_NEAR(curve.ValueAt(0.65), 0.05, 1e-14);
  EXPECT_NEAR(curve.ValueAt(0.66), 0.0, 1e-14);
  EXPECT_NEAR(curve.ValueAt(0.9), 0.2, 1e-14);
  const auto samples = curve.Sample(10);
  EXPECT_GE(samples.size(), 10u);
  EXPECT_TRUE(std::is_sorted(samples.begin(), samples.end(),
                             [](const CurvePoint& a, const CurvePoint& b) { return a.theta < b.theta; }));
}

TEST(AnalyzeAll, ReportsUnstablePoints) {
  auto model = testing::E1Model();
  model.production.push_back(1.3);
  model.robots[0].consumption.push_back(6.0);
  model.robots[0].coverage.push_back(kTwoInterval);
  const SteadyStateReport report = AnalyzeAll(UnitProfile(), model);
  EXPECT_FALSE(report.stabilizing());
  EXPECT_EQ(report.unstable, (std::vector<std::size_t>{1}));
  EXPECT_THROW(MaxHAll(UnitProfile(), model), DivergentError);
}

}  // namespace
}  // namespace persweep
