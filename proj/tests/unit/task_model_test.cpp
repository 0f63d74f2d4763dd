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

#include "persweep/task_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace persweep {
namespace {

PersistentTask SquareTask() {
  PersistentTask task;
  RobotModel robot;
  robot.footprint = DiskFootprint{1.0};
  robot.v_min.assign(4, 0.5);
  robot.v_max.assign(4, 2.0);
  task.robots.push_back(robot);
  task.paths.emplace_back(std::vector<Vec2>{{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  task.cells.push_back(4);
  task.points.push_back({{0, 2}, 1.0, 3.0});
  task.points.push_back({{4, 2}, 0.5, 2.0});
  return task;
}

TEST(PathSpec, ClosesAndNormalizes) {
  const PathSpec path(std::vector<Vec2>{{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  EXPECT_EQ(path.vertices().front(), path.vertices().back());
  EXPECT_DOUBLE_EQ(path.length(), 16.0);
  EXPECT_DOUBLE_EQ(path.cumulative().front(), 0.0);
  EXPECT_DOUBLE_EQ(path.cumulative().back(), 1.0);
  for (std::size_t i = 1; i < path.cumulative().size(); ++i) {
    EXPECT_GT(path.cumulative()[i], path.cumulative()[i - 1]);
  }
}

TEST(PathSpec, PoseIsArcLengthParametrized) {
  const PathSpec path(std::vector<Vec2>{{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const Pose a = path.PoseAt(0.125);
  EXPECT_NEAR(a.position.x, 2.0, 1e-12);
  EXPECT_NEAR(a.position.y, 0.0, 1e-12);
  EXPECT_NEAR(a.heading, 0.0, 1e-12);
  const Pose b = path.PoseAt(0.375);
  EXPECT_NEAR(b.position.x, 4.0, 1e-12);
  EXPECT_NEAR(b.position.y, 2.0, 1e-12);
  EXPECT_NEAR(b.heading, std::numbers::pi / 2, 1e-12);
  const Pose c = path.PoseAt(1.125);
  EXPECT_NEAR(c.position.x, 2.0, 1e-12);
}

TEST(Validate, WellFormedTaskHasNoViolations) {
  EXPECT_TRUE(Validate(SquareTask()).empty());
}

TEST(Validate, ConsumptionEqualToProductionIsRejected) {
  PersistentTask task = SquareTask();
  task.points[0].production = 1.0;
  task.points[0].consumption = 1.0;
  const auto v = Validate(task);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].ToString().find("c > p > 0"), std::string::npos);
  EXPECT_NE(v[0].field.find("points[0]"), std::string::npos);
}

TEST(Validate, RobotPathCountMismatch) {
  PersistentTask task = SquareTask();
  task.robots.push_back(task.robots[0]);
  task.cells.push_back(4);
  const auto v = Validate(task);
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v[0].constraint.find("length mismatch"), std::string::npos);
}

TEST(Validate, SpeedAndFootprintInvariants) {
  PersistentTask task = SquareTask();
  task.robots[0].v_min[2] = 3.0;
  task.robots[0].footprint = DiskFootprint{0.0};
  const auto v = Validate(task);
  ASSERT_EQ(v.size(), 2u);
  bool speed = false;
  bool radius = false;
  for (const auto& x : v) {
    speed |= x.constraint.find("v_min(j) <= v_max(j)") != std::string::npos;
    radius |= x.constraint == "radius > 0";
  }
  EXPECT_TRUE(speed);
  EXPECT_TRUE(radius);
}

TEST(Validate, SelfIntersectingPolygonFootprint) {
  PersistentTask task = SquareTask();
  task.robots[0].footprint = PolygonFootprint{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
  const auto v = Validate(task);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].constraint.find("simple"), std::string::npos);
}

TEST(Validate, MultiRobotNeedsOnlyPositiveConsumption) {
  PersistentTask task = SquareTask();
  task.robots.push_back(task.robots[0]);
  task.paths.push_back(task.paths[0]);
  task.cells.push_back(4);
  task.points[0].consumption = 0.5;  // below p, fine when several robots share the point
  EXPECT_TRUE(Validate(task).empty());
  task.points[0].consumption = 0.0;
  EXPECT_FALSE(Validate(task).empty());
}

TEST(Validate, IsPure) {
  PersistentTask task = SquareTask();
  task.points[1].production = -1.0;
  const auto a = Validate(task);
  const auto b = Validate(task);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].ToString(), b[i].ToString());
}

TEST(StepTable, CellInfAndSup) {
  const StepTable table{{0.0, 0.25, 0.6}, {2.0, 1.0, 3.0}};
  EXPECT_EQ(table.CellInf(2), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(table.CellSup(2), (std::vector<double>{2.0, 3.0}));
  EXPECT_EQ(table.CellInf(4), (std::vector<double>{2.0, 1.0, 1.0, 3.0}));
  EXPECT_EQ(StepTable::Constant(1.5).CellSup(3), (std::vector<double>(3, 1.5)));
}

TEST(Geometry, PointInPolygon) {
  const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_TRUE(PointInPolygon(square, {0.5, 0.5}));
  EXPECT_FALSE(PointInPolygon(square, {1.5, 0.5}));
  EXPECT_TRUE(IsSimplePolygon(square));
  EXPECT_FALSE(IsSimplePolygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
}

}  // namespace
}  // namespace persweep
