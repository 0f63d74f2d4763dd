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

#include "persweep/simulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "persweep/steady_state.hpp"
#include "persweep/synthesis.hpp"
#include "test_support.hpp"

namespace persweep {
namespace {

using testing::E1Model;
using testing::UnitProfile;

std::vector<ReciprocalProfile> One(ReciprocalProfile p) { return {std::move(p)}; }

// Max and min of point i over recorded samples with time >= from.
std::pair<double, double> RangeSince(const SimTrace& trace, std::size_t i, double from) {
  double hi = -1.0, lo = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    if (trace.times[s] < from) continue;
    hi = std::max(hi, trace.field[s][i]);
    lo = std::min(lo, trace.field[s][i]);
  }
  return {hi, lo};
}

TEST(Simulate, TwoIntervalReachesPeriodicSteadyState) {
  const auto profiles = One(UnitProfile());
  SimConfig cfg;
  cfg.horizon = 20.0;
  const SimTrace trace = Simulate(E1Model(), profiles, cfg);
  const auto [hi, lo] = RangeSince(trace, 0, 19.0);
  EXPECT_NEAR(hi, 0.5, 1e-12);
  EXPECT_NEAR(lo, 0.0, 1e-12);
  ASSERT_GE(trace.cycles.size(), 19u);
  for (std::size_t k = 3; k < trace.cycles.size(); ++k) {
    EXPECT_NEAR(trace.cycles[k].field[0], trace.cycles[k - 1].field[0], 1e-12);
    EXPECT_NEAR(trace.cycles[k].time - trace.cycles[k - 1].time, 1.0, 1e-12);
  }
  EXPECT_TRUE(trace.summary.converged_periodic());
  EXPECT_GE(trace.summary.cycles, 19u);
}

TEST(Simulate, AlwaysCoveredPointDrains) {
  const auto model = testing::SingleRobotModel({CoverageSet::Full()}, {1.0}, {6.0}, 4, 0.5, 2.0);
  const auto profiles = One(ReciprocalProfile::Rectangular({1, 1, 1, 1}));
  SimConfig cfg;
  cfg.initial_field = {7.0};
  cfg.horizon = 1.3;
  EXPECT_NEAR(Simulate(model, profiles, cfg).final_field[0], 0.5, 1e-12);
  cfg.horizon = 5.0;
  const SimTrace trace = Simulate(model, profiles, cfg);
  EXPECT_EQ(trace.final_field[0], 0.0);
  std::size_t hit = 0;
  while (hit < trace.times.size() && trace.field[hit][0] > 0.0) ++hit;
  ASSERT_LT(hit, trace.times.size());
  EXPECT_NEAR(trace.times[hit], 1.4, 1e-12);
  for (std::size_t s = hit; s < trace.times.size(); ++s) EXPECT_EQ(trace.field[s][0], 0.0);
}

TEST(Simulate, UnstablePointGrowsByItsMarginPerCycle) {
  const auto profiles = One(UnitProfile());
  SimConfig cfg;
  cfg.horizon = 30.0;
  const SimTrace trace = Simulate(E1Model(10, 1.3), profiles, cfg);
  for (std::size_t k = 5; k < trace.cycles.size(); ++k) {
    EXPECT_NEAR(trace.cycles[k].field[0] - trace.cycles[k - 1].field[0], 0.1, 1e-9);
  }
  EXPECT_TRUE(trace.summary.diverging);
  EXPECT_NEAR(trace.summary.growth_rate[0], 0.1, 1e-9);
}

TEST(Simulate, FieldStaysNonNegativeAndThetaAdvances) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = testing::RandomModel(rng, {});
    const auto profiles =
        One(ReciprocalProfile::Rectangular(testing::RandomAlpha(rng, model.robots[0].cells, 0.5, 2.0)));
    SimConfig cfg;
    cfg.horizon = 10.0 * profiles[0].CycleTime();
    cfg.mode = trial % 2 ? SimMode::kFixedStep : SimMode::kEventExact;
    const SimTrace trace = Simulate(model, profiles, cfg);
    double unwrapped = 0.0;
    for (std::size_t s = 0; s < trace.times.size(); ++s) {
      for (double z : trace.field[s]) EXPECT_GE(z, 0.0);
      if (s > 0) {
        EXPECT_GE(trace.times[s], trace.times[s - 1]);
        unwrapped += ForwardArcLength(trace.theta[s - 1][0], trace.theta[s][0]);
      }
    }
    EXPECT_NEAR(unwrapped, 10.0, 1e-6);
  }
}

TEST(Simulate, EventExactMatchesSteadyStateFormulas) {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 25) {
    const auto model = testing::RandomModel(rng, {});
    const auto profile =
        ReciprocalProfile::Rectangular(testing::RandomAlpha(rng, model.robots[0].cells, 0.5, 2.0));
    const SteadyStateReport report = AnalyzeAll(profile, model);
    if (!report.stabilizing()) continue;
    ++checked;
    const double T = profile.CycleTime();
    SimConfig cfg;
    cfg.horizon = 60.0 * T;
    cfg.record_start = cfg.horizon - T;
    const SimTrace trace = Simulate(model, One(profile), cfg);
    for (std::size_t i = 0; i < model.point_count(); ++i) {
      const double p = model.production[i];
      const double c = model.robots[0].consumption[i];
      const double tol = 1e-9 * (p + c) * T;
      const auto [hi, lo] = RangeSince(trace, i, cfg.record_start);
      EXPECT_NEAR(hi, report.points[i].h, tol) << "point " << i;
      EXPECT_NEAR(lo, 0.0, tol);
    }
    EXPECT_TRUE(trace.summary.converged_periodic());
  }
}

TEST(Simulate, FixedStepConvergesToEventExact) {
  const auto profile = ReciprocalProfile::Rectangular({0.7, 1.3, 0.9, 1.8, 0.6, 1.1, 1.4, 0.8, 1.2, 1.0});
  const auto model = E1Model();
  SimConfig cfg;
  cfg.horizon = 12.0;
  cfg.record = false;
  const double exact = Simulate(model, One(profile), cfg).summary.final_window_max;
  cfg.mode = SimMode::kFixedStep;
  double previous_error = std::numeric_limits<double>::infinity();
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    cfg.dt = dt;
    const double err = std::abs(Simulate(model, One(profile), cfg).summary.final_window_max - exact);
    EXPECT_LE(err, 20.0 * dt);
    EXPECT_LE(err, previous_error + 1e-12);
    previous_error = err;
  }
}

TEST(Simulate, SeedDeterminism) {
  const auto profiles = One(UnitProfile());
  SimConfig cfg;
  cfg.horizon = 10.0;
  cfg.mode = SimMode::kFixedStep;
  cfg.noise = 0.3;
  cfg.eta = 0.2;
  cfg.seed = 99;
  const SimTrace a = Simulate(E1Model(), profiles, cfg);
  const SimTrace b = Simulate(E1Model(), profiles, cfg);
  EXPECT_EQ(a.times, b.times);
  EXPECT_EQ(a.field, b.field);
  cfg.seed = 100;
  const SimTrace c = Simulate(E1Model(), profiles, cfg);
  EXPECT_NE(a.field, c.field);
}

TEST(Simulate, MultiRobotPhasesStayBounded) {
  CoverageModel model;
  model.production = {1.0, 1.0};
  for (int r = 0; r < 2; ++r) {
    RobotCoverage rc;
    rc.cells = 4;
    rc.inv_speed_min.assign(4, 0.5);
    rc.inv_speed_max.assign(4, 2.0);
    rc.consumption = {3.0, 3.0};
    rc.coverage = {CoverageSet({{0.1, 0.4}}), CoverageSet({{0.5, 0.8}})};
    model.robots.push_back(rc);
  }
  const auto r = Synthesize(model, LpKind::kMulti);
  ASSERT_TRUE(r.feasible()) << r.message;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 8; ++k) {
    SimConfig cfg;
    cfg.initial_theta = {u(rng), u(rng)};
    cfg.horizon = 40.0 * std::max(r.profiles[0].CycleTime(), r.profiles[1].CycleTime());
    cfg.record = false;
    EXPECT_TRUE(Simulate(model, r.profiles, cfg).summary.converged_periodic());
  }
}

TEST(Simulate, SubnormalFieldEmptiesInsteadOfStalling) {
  // The emptying time of the smallest subnormal rounds to zero.
  const auto model = testing::SingleRobotModel({CoverageSet::Full()}, {1.0}, {3.0}, 4, 1.0, 1.0);
  SimConfig cfg;
  cfg.horizon = 2.0;
  cfg.initial_field = {std::numeric_limits<double>::denorm_min()};
  const SimTrace trace = Simulate(model, One(UnitProfile(4)), cfg);
  EXPECT_EQ(trace.final_field[0], 0.0);
  EXPECT_LT(trace.summary.events, 100u);
}

TEST(Simulate, RejectsBadConfig) {
  const auto profiles = One(UnitProfile());
  SimConfig cfg;
  EXPECT_THROW(Simulate(E1Model(), profiles, cfg), std::invalid_argument);
  cfg.horizon = 1.0;
  cfg.noise = 0.1;
  EXPECT_THROW(Simulate(E1Model(), profiles, cfg), std::invalid_argument);
  cfg.noise = 0.0;
  cfg.eta = -0.1;
  EXPECT_THROW(Simulate(E1Model(), profiles, cfg), std::invalid_argument);
  cfg.eta = 0.0;
  EXPECT_THROW(Simulate(E1Model(), One(testing::UnitProfile(5)), cfg), std::invalid_argument);
}

TEST(Sweep, ZeroNoiseStatisticsCoincide) {
  const auto profiles = One(UnitProfile());
  SimConfig base;
  base.horizon = 20.0;
  const auto rows = NoiseSweep(E1Model(), profiles, base, {0.0}, 20, 5);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].trials, 20u);
  EXPECT_EQ(rows[0].min, rows[0].max);
  EXPECT_EQ(rows[0].mean, rows[0].max);
  EXPECT_EQ(rows[0].stddev, 0.0);
  EXPECT_EQ(rows[0].diverging, 0u);
}

TEST(Sweep, SingleTrialHasZeroStddev) {
  const auto profiles = One(UnitProfile());
  SimConfig base;
  base.horizon = 20.0;
  const auto rows = NoiseSweep(E1Model(), profiles, base, {0.1, 0.2}, 1, 5);
  for (const auto& row : rows) EXPECT_EQ(row.stddev, 0.0);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const auto profiles = One(UnitProfile());
  SimConfig base;
  base.horizon = 10.0;
  SweepOptions opts;
  opts.parameter = SweepParameter::kEta;
  opts.values = {0.0, 0.1, 0.3};
  opts.trials = 4;
  opts.seed = 8;
  opts.threads = 1;
  const auto a = Sweep(E1Model(), profiles, base, opts);
  opts.threads = 3;
  const auto b = Sweep(E1Model(), profiles, base, opts);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].mean, b[k].mean);
    EXPECT_EQ(a[k].stddev, b[k].stddev);
  }
}

TEST(EpsilonThreshold, TwoInterval) {
  const auto profiles = One(UnitProfile());
  EXPECT_NEAR(AnalyticEpsilonThreshold(E1Model(), profiles), 0.2, 1e-14);
  SimConfig base;
  base.horizon = 40.0;
  const EpsilonScan scan = EpsilonThreshold(E1Model(), profiles, base, {0.0, 0.1, 0.19, 0.25, 0.4});
  EXPECT_EQ(scan.diverging, (std::vector<bool>{false, false, false, true, true}));
  ASSERT_TRUE(scan.largest_stable);
  EXPECT_DOUBLE_EQ(*scan.largest_stable, 0.19);

  SimConfig cfg = base;
  cfg.epsilon = 0.4;
  const SimTrace trace = Simulate(E1Model(), profiles, cfg);
  EXPECT_FALSE(trace.summary.converged_periodic());
  EXPECT_NEAR(trace.summary.growth_rate[0], 0.2, 1e-9);
}

}  // namespace
}  // namespace persweep
