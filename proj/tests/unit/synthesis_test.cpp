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

#include "persweep/synthesis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "persweep/steady_state.hpp"
#include "test_support.hpp"

namespace persweep {
namespace {

using testing::E1Model;
using testing::SingleRobotModel;

double SumX(const Decomposition& dec, std::size_t k, std::size_t b, std::size_t cells) {
  const Basis basis{cells, false};
  double s = 0.0;
  for (std::size_t j = 0; j < cells; ++j) s += ComputeX(dec, k, b, basis, j, 1.0, 6.0);
  return s;
}

CoverageModel TwoRobotModel(double measure_a, double measure_b) {
  CoverageModel model;
  model.production = {1.0};
  for (double measure : {measure_a, measure_b}) {
    RobotCoverage rc;
    rc.cells = 1;
    rc.inv_speed_min = {0.01};
    rc.inv_speed_max = {100.0};
    rc.consumption = {6.0};
    rc.coverage = {measure > 0 ? CoverageSet({{0.0, measure}}) : CoverageSet{}};
    model.robots.push_back(rc);
  }
  return model;
}

// Minimum of max H over a grid of per-cell values, skipping divergent points.
double GridMinimum(const CoverageModel& model, std::size_t levels) {
  const RobotCoverage& rc = model.robots[0];
  const std::size_t n = rc.cells;
  std::vector<std::size_t> idx(n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<double> alpha(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = static_cast<double>(idx[j]) / static_cast<double>(levels - 1);
      alpha[j] = rc.inv_speed_min[j] + t * (rc.inv_speed_max[j] - rc.inv_speed_min[j]);
    }
    try {
      best = std::min(best, MaxHAll(ReciprocalProfile::Rectangular(alpha), model));
    } catch (const DivergentError&) {
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] == levels) idx[j++] = 0;
    if (j == n) break;
  }
  return best;
}

TEST(ComputeK, Examples) {
  const Basis basis{4, false};
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(ComputeK(CoverageSet::Full(), basis, j, 1.0, 2.0), 0.125);
    EXPECT_DOUBLE_EQ(ComputeK(CoverageSet{}, basis, j, 1.0, 2.0), -0.125);
  }
  EXPECT_NEAR(ComputeK(CoverageSet({{0.1, 0.3}}), Basis{10, false}, 1, 1.0, 2.0), 0.05, 1e-15);
}

TEST(ComputeKr, Examples) {
  EXPECT_DOUBLE_EQ(ComputeKr(CoverageSet{}, Basis{5, true}, 2, 6.0), 0.0);
  // Normalized cells integrate to 1, so a fully covered cell contributes c.
  EXPECT_NEAR(ComputeKr(CoverageSet({{0.1, 0.3}}), Basis{10, true}, 1, 6.0), 6.0, 1e-12);
  EXPECT_NEAR(ComputeKr(CoverageSet({{0.15, 0.3}}), Basis{10, true}, 1, 6.0), 3.0, 1e-12);
}

TEST(ComputeX, TwoIntervalValues) {
  const Decomposition dec = Decompose(CoverageSet({{0.2, 0.3}, {0.6, 0.7}}));
  EXPECT_NEAR(SumX(dec, 0, 0, 10), 0.3, 1e-14);
  EXPECT_NEAR(SumX(dec, 1, 0, 10), 0.5, 1e-14);
  EXPECT_NEAR(SumX(dec, 0, 1, 10), 0.3, 1e-14);
  EXPECT_NEAR(SumX(dec, 1, 1, 10), 0.3, 1e-14);
  EXPECT_THROW(ComputeX(dec, 2, 0, Basis{10, false}, 0, 1.0, 6.0), std::out_of_range);
  EXPECT_THROW(ComputeX(Decompose(CoverageSet::Full()), 0, 0, Basis{10, false}, 0, 1.0, 6.0),
               std::out_of_range);
}

TEST(ComputeX, ConsumptionDominatedRowCanBeNegative) {
  const Decomposition dec = Decompose(CoverageSet({{0.0, 0.45}, {0.5, 0.95}}));
  EXPECT_LT(SumX(dec, 0, 1, 20), 0.0);
}

TEST(Synthesize, FeasibilityExamples) {
  const auto full = SingleRobotModel({CoverageSet::Full()}, {1.0}, {2.0}, 4, 0.5, 10.0);
  const auto r = Synthesize(full, LpKind::kFeasibility);
  ASSERT_TRUE(r.feasible()) << r.message;
  EXPECT_GT(StabilityMargins(r.profiles[0], full)[0], 0.0);
  const auto empty = SingleRobotModel({CoverageSet{}}, {1.0}, {2.0}, 4, 0.5, 10.0);
  EXPECT_EQ(Synthesize(empty, LpKind::kFeasibility).status, SynthesisStatus::kInfeasible);
}

TEST(Synthesize, MarginFullCircle) {
  const auto model = SingleRobotModel({CoverageSet::Full()}, {1.0}, {2.0}, 4, 0.5, 10.0);
  const auto r = Synthesize(model, LpKind::kMargin);
  ASSERT_TRUE(r.feasible());
  ASSERT_TRUE(r.objective);
  EXPECT_NEAR(*r.objective, 5.0, 1e-9);
  for (double a : r.profiles[0].alpha()) EXPECT_NEAR(a, 10.0, 1e-9);
}

TEST(Synthesize, MarginDiagnosesUncoveredPoint) {
  const auto model = SingleRobotModel({CoverageSet::Full(), CoverageSet{}}, {1.0, 1.0}, {2.0, 2.0},
                                      4, 0.5, 10.0);
  const auto r = Synthesize(model, LpKind::kMargin);
  ASSERT_TRUE(r.feasible());
  EXPECT_LT(*r.objective, 0.0);
  ASSERT_EQ(r.point_slack.size(), 2u);
  EXPECT_LT(r.point_slack[1], r.point_slack[0]);
}

TEST(RobustnessBound, Examples) {
  SynthesisResult r;
  r.status = SynthesisStatus::kFeasible;
  r.kind = LpKind::kMargin;
  r.profiles = {testing::UnitProfile()};
  r.objective = 0.2;
  EXPECT_NEAR(RobustnessBoundScalar(r, E1Model()), 1.2, 1e-14);
  r.objective = 0.0;
  EXPECT_DOUBLE_EQ(RobustnessBoundScalar(r, E1Model()), 0.0);
  r.objective = -0.1;
  EXPECT_THROW(RobustnessBound(r, E1Model()), std::invalid_argument);
}

TEST(Synthesize, MinMaxFullCircleIsZero) {
  const auto model = SingleRobotModel({CoverageSet::Full()}, {1.0}, {2.0}, 4, 0.5, 10.0);
  const auto r = Synthesize(model, LpKind::kMinMax);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(*r.objective, 0.0, 1e-9);
}

TEST(Synthesize, MinMaxTwoInterval) {
  const auto model = E1Model();
  const auto r = Synthesize(model, LpKind::kMinMax);
  ASSERT_TRUE(r.feasible()) << r.message;
  EXPECT_NEAR(*r.objective, MaxHAll(r.profiles[0], model), 1e-6);
  // At full speed the two gaps take 0.15 and 0.25.
  EXPECT_NEAR(*r.objective, 0.25, 1e-9);
}

TEST(BuildMinMaxLp, Size) {
  const auto model = SingleRobotModel(
      {CoverageSet({{0.2, 0.3}, {0.6, 0.7}}), CoverageSet({{0.1, 0.15}, {0.4, 0.5}, {0.8, 0.9}}),
       CoverageSet::Full()},
      {1.0, 1.0, 1.0}, {6.0, 6.0, 6.0}, 7, 0.5, 2.0);
  const auto program = BuildMinMaxLp(model);
  EXPECT_EQ(program.lp.variable_count(), 7u + 1u);
  EXPECT_EQ(program.minmax_rows, 4u + 9u);
  EXPECT_EQ(program.lp.row_count(), 3u + 4u + 9u);
  EXPECT_THROW(BuildMinMaxLp(TwoRobotModel(0.2, 0.1)), std::invalid_argument);
}

TEST(Synthesize, MinMaxMatchesGridSearch) {
  std::mt19937_64 rng(31);
  testing::RandomTaskOptions opts;
  opts.max_points = 3;
  opts.max_cells = 4;
  opts.min_cells = 2;
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 8; ++trial) {
    const auto model = testing::RandomModel(rng, opts);
    const auto r = Synthesize(model, LpKind::kMinMax);
    if (!r.feasible()) continue;
    ++checked;
    const double h = MaxHAll(r.profiles[0], model);
    EXPECT_NEAR(*r.objective, h, 1e-6 * (1.0 + h));
    EXPECT_GE(GridMinimum(model, 5), *r.objective - 1e-6);
  }
  EXPECT_GE(checked, 4);
}

TEST(Synthesize, FeasibleResultsSatisfyTheirConstraints) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto model = testing::RandomModel(rng, {});
    for (LpKind kind : {LpKind::kFeasibility, LpKind::kMargin}) {
      const auto r = Synthesize(model, kind);
      ASSERT_NE(r.status, SynthesisStatus::kNumericalFailure) << r.message;
      if (!r.feasible()) continue;
      EXPECT_TRUE(WithinSpeedBounds(r.profiles[0], model.robots[0], 1e-8));
      const auto margins = StabilityMargins(r.profiles[0], model);
      if (kind == LpKind::kFeasibility) {
        for (double m : margins) EXPECT_GT(m, 0.0);
      } else {
        // The optimal margin is the smallest normalized slack.
        double worst = std::numeric_limits<double>::infinity();
        for (double s : r.point_slack) worst = std::min(worst, s);
        EXPECT_NEAR(worst, *r.objective, 1e-8);
      }
    }
  }
}

TEST(Synthesize, MultiRowValue) {
  const auto model = TwoRobotModel(0.2, 0.1);
  const auto r = Synthesize(model, LpKind::kMulti);
  ASSERT_TRUE(r.feasible()) << r.message;
  ASSERT_EQ(r.point_slack.size(), 1u);
  EXPECT_NEAR(r.point_slack[0] + 1.0, 1.8, 1e-12);
  EXPECT_NEAR(MultiRobotMargins(r.profiles, model)[0], 0.8, 1e-12);
}

TEST(Synthesize, MultiUncoveredPointIsInfeasible) {
  auto model = TwoRobotModel(0.2, 0.1);
  model.production.push_back(1.0);
  for (auto& rc : model.robots) {
    rc.consumption.push_back(6.0);
    rc.coverage.push_back(CoverageSet{});
  }
  EXPECT_EQ(Synthesize(model, LpKind::kMulti).status, SynthesisStatus::kInfeasible);
}

TEST(Synthesize, MultiWithOneRobotAgreesWithSingleRobot) {
  std::mt19937_64 rng(53);
  int compared = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto model = testing::RandomModel(rng, {});
    const auto margin = Synthesize(model, LpKind::kMargin);
    ASSERT_TRUE(margin.feasible());
    // Skip instances sitting on the feasibility boundary.
    const double scale = *std::max_element(model.production.begin(), model.production.end());
    if (std::abs(*margin.objective) < 1e-3 * scale) continue;
    ++compared;
    const bool single = Synthesize(model, LpKind::kFeasibility).feasible();
    const auto multi = Synthesize(model, LpKind::kMulti);
    EXPECT_EQ(single, multi.feasible()) << "trial " << trial;
    EXPECT_EQ(single, *margin.objective > 0.0);
    if (multi.feasible()) {
      EXPECT_TRUE(WithinSpeedBounds(multi.profiles[0], model.robots[0], 1e-8));
      for (double m : MultiRobotMargins(multi.profiles, model)) EXPECT_GT(m, 0.0);
    }
  }
  EXPECT_GT(compared, 40);
}

TEST(Synthesize, MultiStatusInvariantToSpeedScaling) {
  std::mt19937_64 rng(59);
  testing::RandomTaskOptions opts;
  opts.robots = 2;
  opts.inv_lo = 1e-3;
  opts.inv_hi = 1e3;
  for (int trial = 0; trial < 30; ++trial) {
    auto model = testing::RandomModel(rng, opts);
    for (auto& rc : model.robots) {
      for (double& c : rc.consumption) c *= 0.4;  // make coverage by both robots matter
    }
    const auto base = Synthesize(model, LpKind::kMultiMargin);
    ASSERT_TRUE(base.feasible());
    if (std::abs(*base.objective) < 1e-3) continue;
    auto scaled = model;
    for (double& v : scaled.robots[1].inv_speed_min) v *= 10.0;
    for (double& v : scaled.robots[1].inv_speed_max) v *= 10.0;
    EXPECT_EQ(Synthesize(model, LpKind::kMulti).feasible(),
              Synthesize(scaled, LpKind::kMulti).feasible());
  }
}

TEST(Synthesize, MultiMarginRobustnessIsTheMargin) {
  const auto model = TwoRobotModel(0.2, 0.1);
  const auto r = Synthesize(model, LpKind::kMultiMargin);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(*r.objective, 0.8, 1e-9);
  EXPECT_NEAR(RobustnessBoundScalar(r, model), 0.8, 1e-9);
}

TEST(LpKind, NamesRoundTrip) {
  for (LpKind k : {LpKind::kFeasibility, LpKind::kMargin, LpKind::kMinMax, LpKind::kMulti,
                   LpKind::kMultiMargin}) {
    EXPECT_EQ(ParseLpKind(ToString(k)), k);
  }
  EXPECT_FALSE(ParseLpKind("fastest").has_value());
}

}  // namespace
}  // namespace persweep
