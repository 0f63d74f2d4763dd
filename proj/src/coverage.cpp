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

#include "persweep/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

namespace persweep {

double ArcInterval::length() const { return wraps() ? 1.0 - start + end : end - start; }

double ForwardArcLength(double a, double b) { return b >= a ? b - a : 1.0 - a + b; }

CoverageSet::CoverageSet(std::vector<ArcInterval> intervals) : intervals_(std::move(intervals)) {
  std::sort(intervals_.begin(), intervals_.end(),
            [](const ArcInterval& a, const ArcInterval& b) { return a.start < b.start; });
}

CoverageSet CoverageSet::Full() {
  CoverageSet set;
  set.full_ = true;
  return set;
}

double CoverageSet::Measure() const {
  if (full_) return 1.0;
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool CoverageSet::Contains(double theta) const {
  if (full_) return true;
  theta -= std::floor(theta);
  for (const auto& iv : intervals_) {
    if (iv.wraps() ? (theta >= iv.start || theta <= iv.end)
                   : (theta >= iv.start && theta <= iv.end)) {
      return true;
    }
  }
  return false;
}

double CoverageSet::OverlapWith(double lo, double hi) const {
  if (full_) return hi - lo;
  auto piece = [lo, hi](double a, double b) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); };
  double total = 0.0;
  for (const auto& iv : intervals_) {
    total += iv.wraps() ? piece(iv.start, 1.0) + piece(0.0, iv.end) : piece(iv.start, iv.end);
  }
  return total;
}

std::size_t Decomposition::Wrap(std::ptrdiff_t k) const {
  const auto l = static_cast<std::ptrdiff_t>(size());
  return static_cast<std::size_t>(((k % l) + l) % l);
}

Decomposition Decompose(const CoverageSet& coverage) {
  if (coverage.empty()) throw std::invalid_argument("Decompose: empty coverage set");
  Decomposition out;
  if (coverage.full()) {
    out.full_circle = true;
    return out;
  }
  for (const auto& iv : coverage.intervals()) {
    out.x.push_back(iv.start);
    out.y.push_back(iv.end);
  }
  return out;
}

bool PointInFootprint(const Footprint& footprint, const Pose& pose, Vec2 q) {
  const Vec2 d = q - pose.position;
  if (const auto* disk = std::get_if<DiskFootprint>(&footprint)) {
    return d.x * d.x + d.y * d.y <= disk->radius * disk->radius;
  }
  // Rotate into the body frame.
  const double c = std::cos(pose.heading), s = std::sin(pose.heading);
  const Vec2 body{c * d.x + s * d.y, -s * d.x + c * d.y};
  return PointInPolygon(std::get<PolygonFootprint>(footprint).vertices, body);
}

namespace {

double Wrap01(double theta) {
  theta -= std::floor(theta);
  return theta >= 1.0 ? 0.0 : theta;
}

// Bisection on the unwrapped bracket [lo, hi], membership(lo) == inside_at_lo.
double RefineTransition(const PathSpec& path, const Footprint& footprint, Vec2 q, double lo,
                        double hi, bool inside_at_lo) {
  while (hi - lo > kEndpointTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (PointInFootprint(footprint, path.PoseAt(mid), q) == inside_at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Wrap01(0.5 * (lo + hi));
}

double FootprintDiameter(const Footprint& footprint) {
  if (const auto* disk = std::get_if<DiskFootprint>(&footprint)) return 2.0 * disk->radius;
  const auto& v = std::get<PolygonFootprint>(footprint).vertices;
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) d = std::max(d, Norm(v[i] - v[j]));
  }
  return d;
}

}  // namespace

CoverageSet ComputeCoverageSet(const PathSpec& path, const Footprint& footprint, Vec2 q,
                               std::size_t samples) {
  if (samples == 0) throw std::invalid_argument("ComputeCoverageSet: samples must be positive");
  const double step = 1.0 / static_cast<double>(samples);
  std::vector<char> inside(samples);
  std::size_t count = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    inside[i] = PointInFootprint(footprint, path.PoseAt(static_cast<double>(i) * step), q);
    count += inside[i] ? 1 : 0;
  }
  if (count == 0) return CoverageSet{};
  if (count == samples) return CoverageSet::Full();

  // Walk the circle starting from an uncovered sample so every run closes.
  std::size_t origin = 0;
  while (inside[origin]) ++origin;
  std::vector<ArcInterval> intervals;
  double start = 0.0;
  for (std::size_t s = 1; s <= samples; ++s) {
    const std::size_t prev = (origin + s - 1) % samples;
    const std::size_t cur = (origin + s) % samples;
    if (inside[prev] == inside[cur]) continue;
    const double lo = static_cast<double>(origin + s - 1) * step;
    const double hi = lo + step;
    const double edge = RefineTransition(path, footprint, q, lo, hi, inside[prev]);
    if (inside[cur]) {
      start = edge;
    } else {
      intervals.push_back({start, edge});
    }
  }
  return CoverageSet(std::move(intervals));
}

std::optional<std::string> ResolutionWarning(const PathSpec& path, const Footprint& footprint,
                                             std::size_t samples) {
  const double spacing = path.length() / static_cast<double>(std::max<std::size_t>(samples, 1));
  const double diameter = FootprintDiameter(footprint);
  if (diameter < 10.0 * spacing) {
    return "coverage sampling is coarse: footprint diameter " + std::to_string(diameter) +
           " m vs. sample spacing " + std::to_string(spacing) + " m";
  }
  return std::nullopt;
}

CoverageModel BuildCoverageModel(const PersistentTask& task, std::size_t samples,
                                 std::vector<std::string>* warnings) {
  CoverageModel model;
  model.production.reserve(task.points.size());
  for (const auto& q : task.points) model.production.push_back(q.production);

  for (std::size_t r = 0; r < task.robots.size(); ++r) {
    const RobotModel& robot = task.robots[r];
    const PathSpec& path = task.paths[r];
    const std::size_t n = task.cells[r];
    const std::size_t count = samples == 0 ? 10 * n : samples;
    if (count < n) throw std::invalid_argument("coverage samples must be at least the basis size");
    if (warnings) {
      if (auto w = ResolutionWarning(path, robot.footprint, count)) {
        warnings->push_back("robot " + std::to_string(r) + ": " + *w);
      }
    }

    RobotCoverage rc;
    rc.cells = n;
    rc.inv_speed_min.resize(n);
    rc.inv_speed_max.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      rc.inv_speed_min[j] = path.length() / robot.v_max[j];
      rc.inv_speed_max[j] = path.length() / robot.v_min[j];
    }
    for (std::size_t i = 0; i < task.points.size(); ++i) {
      rc.consumption.push_back(task.ConsumptionRate(r, i));
      rc.coverage.push_back(ComputeCoverageSet(path, robot.footprint, task.points[i].position, count));
    }
    model.robots.push_back(std::move(rc));
  }
  return model;
}

}  // namespace persweep
