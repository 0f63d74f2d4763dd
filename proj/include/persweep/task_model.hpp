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

#ifndef PERSWEEP_TASK_MODEL_HPP_
#define PERSWEEP_TASK_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace persweep {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double Norm(Vec2 v);
double Cross(Vec2 a, Vec2 b);

// Position on the plane plus the tangent heading (radians) of the path there.
struct Pose {
  Vec2 position;
  double heading = 0.0;
};

// Closed polyline parametrized by normalized arc length theta in [0, 1).
//
// The constructor appends the first vertex if the input is not already
// closed. Degenerate input (fewer than two distinct vertices, repeated
// consecutive vertices) is accepted here and reported by Validate().
class PathSpec {
 public:
  PathSpec() = default;
  explicit PathSpec(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  double length() const { return length_; }

  // theta is taken modulo 1.
  Pose PoseAt(double theta) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<double> cumulative_;
  double length_ = 0.0;
};

struct DiskFootprint {
  double radius = 0.0;
};

// Vertices in the robot body frame (x forward along the path tangent).
struct PolygonFootprint {
  std::vector<Vec2> vertices;
};

using Footprint = std::variant<DiskFootprint, PolygonFootprint>;

// Piecewise-constant function of theta: values[i] holds on
// [breakpoints[i], breakpoints[i+1]), the last entry up to 1.
struct StepTable {
  std::vector<double> breakpoints;
  std::vector<double> values;

  static StepTable Constant(double value) { return {{0.0}, {value}}; }

  // Infimum / supremum of the table over each of `cells` equal cells.
  std::vector<double> CellInf(std::size_t cells) const;
  std::vector<double> CellSup(std::size_t cells) const;
};

// Speeds are physical (m/s) and stored per basis cell.
struct RobotModel {
  Footprint footprint;
  std::vector<double> v_min;
  std::vector<double> v_max;
  // Per-point consumption c_r(q). Empty means "use the point's own rate".
  std::vector<double> consumption;
};

struct InterestPoint {
  Vec2 position;
  double production = 0.0;
  double consumption = 0.0;
};

struct PersistentTask {
  std::vector<RobotModel> robots;
  std::vector<PathSpec> paths;
  std::vector<InterestPoint> points;
  std::vector<std::size_t> cells;

  std::size_t robot_count() const { return robots.size(); }
  std::size_t point_count() const { return points.size(); }

  // Rate at which robot r consumes the field at point i.
  double ConsumptionRate(std::size_t robot, std::size_t point) const;
};

struct Violation {
  std::string field;
  std::string constraint;

  std::string ToString() const { return field + ": " + constraint; }
};

// Empty result iff every type invariant holds.
std::vector<Violation> Validate(const PersistentTask& task);

bool PointInPolygon(const std::vector<Vec2>& polygon, Vec2 q);
bool IsSimplePolygon(const std::vector<Vec2>& polygon);

}  // namespace persweep

#endif  // PERSWEEP_TASK_MODEL_HPP_
