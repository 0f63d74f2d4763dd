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

#ifndef PERSWEEP_COVERAGE_HPP_
#define PERSWEEP_COVERAGE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "persweep/task_model.hpp"

namespace persweep {

inline constexpr double kEndpointTolerance = 1e-6;

// Closed arc [start, end] of the unit circle. start > end means the arc
// wraps through theta = 1 -> 0.
struct ArcInterval {
  double start = 0.0;
  double end = 0.0;

  bool wraps() const { return start > end; }
  double length() const;
};

// Length of the forward arc from a to b (a == b gives 0).
double ForwardArcLength(double a, double b);

// The set F(q) of path parameters from which a point is covered.
class CoverageSet {
 public:
  CoverageSet() = default;
  // Intervals must be pairwise disjoint on the circle; they are sorted by start.
  explicit CoverageSet(std::vector<ArcInterval> intervals);
  static CoverageSet Full();

  bool empty() const { return !full_ && intervals_.empty(); }
  bool full() const { return full_; }
  const std::vector<ArcInterval>& intervals() const { return intervals_; }

  double Measure() const;
  bool Contains(double theta) const;
  // Measure of F(q) intersected with [lo, hi), 0 <= lo <= hi <= 1.
  double OverlapWith(double lo, double hi) const;

 private:
  std::vector<ArcInterval> intervals_;
  bool full_ = false;
};

// Endpoints x_1..x_l, y_1..y_l in circular order (y_k > x_k > y_{k-1}).
// Index arithmetic on these is modulo l.
struct Decomposition {
  std::vector<double> x;
  std::vector<double> y;
  bool full_circle = false;

  std::size_t size() const { return x.size(); }
  std::size_t Wrap(std::ptrdiff_t k) const;
};

// Throws std::invalid_argument on empty coverage.
Decomposition Decompose(const CoverageSet& coverage);

bool PointInFootprint(const Footprint& footprint, const Pose& pose, Vec2 q);

// Samples the path at `samples` equally spaced parameters and refines every
// membership transition by bisection down to kEndpointTolerance.
CoverageSet ComputeCoverageSet(const PathSpec& path, const Footprint& footprint, Vec2 q,
                               std::size_t samples);

// Set when the sample spacing is not small against the footprint size.
std::optional<std::string> ResolutionWarning(const PathSpec& path, const Footprint& footprint,
                                             std::size_t samples);

// Coverage-level view of one robot, with speeds already converted to
// reciprocal normalized units (seconds per unit theta).
struct RobotCoverage {
  std::size_t cells = 0;
  std::vector<double> inv_speed_min;  // L / v_max(j)
  std::vector<double> inv_speed_max;  // L / v_min(j)
  std::vector<double> consumption;    // c_r(q_i)
  std::vector<CoverageSet> coverage;  // F_r(q_i)
};

// Everything the analytic modules need: coverage sets and rates. Paths and
// footprints only matter through this.
struct CoverageModel {
  std::vector<RobotCoverage> robots;
  std::vector<double> production;

  std::size_t point_count() const { return production.size(); }
  std::size_t robot_count() const { return robots.size(); }
};

// samples == 0 selects 10 * n_r samples per robot.
CoverageModel BuildCoverageModel(const PersistentTask& task, std::size_t samples = 0,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace persweep

#endif  // PERSWEEP_COVERAGE_HPP_
