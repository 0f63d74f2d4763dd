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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace persweep {

double Norm(Vec2 v) { return std::hypot(v.x, v.y); }

double Cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

PathSpec::PathSpec(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) return;
  if (!(vertices_.front() == vertices_.back())) vertices_.push_back(vertices_.front());
  std::vector<double> arc(vertices_.size(), 0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    arc[i] = arc[i - 1] + Norm(vertices_[i] - vertices_[i - 1]);
  }
  length_ = arc.back();
  cumulative_.resize(arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) {
    cumulative_[i] = length_ > 0.0 ? arc[i] / length_ : 0.0;
  }
  if (length_ > 0.0) cumulative_.back() = 1.0;
}

Pose PathSpec::PoseAt(double theta) const {
  theta -= std::floor(theta);
  // Segment s spans [cumulative_[s], cumulative_[s+1]).
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), theta);
  std::size_t s = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  s = std::clamp<std::size_t>(s, 1, cumulative_.size() - 1) - 1;
  const double span = cumulative_[s + 1] - cumulative_[s];
  const double u = span > 0.0 ? (theta - cumulative_[s]) / span : 0.0;
  const Vec2 a = vertices_[s];
  const Vec2 d = vertices_[s + 1] - a;
  return {a + u * d, std::atan2(d.y, d.x)};
}

namespace {

// Index range of cells touched by the half-open piece [lo, hi).
void ForEachCell(double lo, double hi, std::size_t cells, auto&& fn) {
  const double n = static_cast<double>(cells);
  auto first = static_cast<std::size_t>(std::floor(lo * n));
  auto last = static_cast<std::size_t>(std::ceil(hi * n));
  first = std::min(first, cells - 1);
  last = std::clamp<std::size_t>(last, first + 1, cells);
  for (std::size_t j = first; j < last; ++j) fn(j);
}

std::vector<double> CellReduce(const StepTable& table, std::size_t cells, bool take_min) {
  const double fill = take_min ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
  std::vector<double> out(cells, fill);
  if (cells == 0) return out;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    const double lo = table.breakpoints[i];
    const double hi = i + 1 < table.breakpoints.size() ? table.breakpoints[i + 1] : 1.0;
    if (hi <= lo) continue;
    ForEachCell(lo, hi, cells, [&](std::size_t j) {
      const double cell_lo = static_cast<double>(j) / static_cast<double>(cells);
      const double cell_hi = static_cast<double>(j + 1) / static_cast<double>(cells);
      if (std::min(hi, cell_hi) <= std::max(lo, cell_lo)) return;
      out[j] = take_min ? std::min(out[j], table.values[i]) : std::max(out[j], table.values[i]);
    });
  }
  return out;
}

bool SegmentsIntersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    const double v = Cross(q - p, r - p);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

std::string Indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

std::vector<double> StepTable::CellInf(std::size_t cells) const {
  return CellReduce(*this, cells, true);
}

std::vector<double> StepTable::CellSup(std::size_t cells) const {
  return CellReduce(*this, cells, false);
}

double PersistentTask::ConsumptionRate(std::size_t robot, std::size_t point) const {
  const auto& c = robots[robot].consumption;
  return c.empty() ? points[point].consumption : c[point];
}

bool PointInPolygon(const std::vector<Vec2>& polygon, Vec2 q) {
  bool inside = false;
  const std::size_t k = polygon.size();
  for (std::size_t i = 0, j = k - 1; i < k; j = i++) {
    const Vec2 a = polygon[i], b = polygon[j];
    if ((a.y > q.y) != (b.y > q.y)) {
      const double x_cross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool IsSimplePolygon(const std::vector<Vec2>& polygon) {
  const std::size_t k = polygon.size();
  if (k < 3) return false;
  for (std::size_t i = 0; i < k; ++i) {
    if (polygon[i] == polygon[(i + 1) % k]) return false;
    for (std::size_t j = i + 1; j < k; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == k - 1);
      if (adjacent) continue;
      if (SegmentsIntersect(polygon[i], polygon[(i + 1) % k], polygon[j], polygon[(j + 1) % k])) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Violation> Validate(const PersistentTask& task) {
  std::vector<Violation> out;
  const std::size_t n_robots = task.robots.size();
  if (n_robots == 0) out.push_back({"robots", "at least one robot (N >= 1)"});
  if (task.paths.size() != n_robots || task.cells.size() != n_robots) {
    out.push_back({"robots/paths/cells",
                   "length mismatch: " + std::to_string(n_robots) + " robots, " +
                       std::to_string(task.paths.size()) + " paths, " +
                       std::to_string(task.cells.size()) + " basis sizes"});
  }
  if (task.points.empty()) out.push_back({"points", "at least one interest point (m >= 1)"});

  for (std::size_t r = 0; r < task.paths.size(); ++r) {
    const PathSpec& path = task.paths[r];
    const std::string name = Indexed("paths", r);
    if (path.vertices().size() < 3) {
      out.push_back({name + ".vertices", "closed polyline needs at least two distinct vertices"});
      continue;
    }
    if (!(path.vertices().front() == path.vertices().back())) {
      out.push_back({name + ".vertices", "first and last vertex identical"});
    }
    if (!(path.length() > 0.0)) out.push_back({name + ".length", "length > 0"});
    const auto& cum = path.cumulative();
    bool increasing = cum.front() == 0.0 && cum.back() == 1.0;
    for (std::size_t i = 1; i < cum.size(); ++i) increasing = increasing && cum[i] > cum[i - 1];
    if (!increasing) {
      out.push_back({name + ".cumulative", "strictly increasing from 0 to 1"});
    }
  }

  for (std::size_t r = 0; r < n_robots; ++r) {
    const RobotModel& robot = task.robots[r];
    const std::string name = Indexed("robots", r);
    if (const auto* disk = std::get_if<DiskFootprint>(&robot.footprint)) {
      if (!(disk->radius > 0.0)) out.push_back({name + ".footprint.radius", "radius > 0"});
    } else {
      const auto& poly = std::get<PolygonFootprint>(robot.footprint).vertices;
      if (poly.size() < 3) {
        out.push_back({name + ".footprint.polygon", "at least 3 vertices"});
      } else if (!IsSimplePolygon(poly)) {
        out.push_back({name + ".footprint.polygon", "simple (non-self-intersecting)"});
      }
    }
    if (r < task.cells.size()) {
      const std::size_t n = task.cells[r];
      if (n == 0) out.push_back({Indexed("cells", r), "basis size n >= 1"});
      if (robot.v_min.size() != n || robot.v_max.size() != n) {
        out.push_back({name + ".v_min/v_max", "one speed limit per basis cell"});
      }
    }
    const std::size_t cells = std::min(robot.v_min.size(), robot.v_max.size());
    for (std::size_t j = 0; j < cells; ++j) {
      if (!(robot.v_min[j] > 0.0 && robot.v_min[j] <= robot.v_max[j])) {
        out.push_back({name + Indexed(".v_min/v_max", j), "0 < v_min(j) <= v_max(j)"});
      }
    }
    if (!robot.consumption.empty() && robot.consumption.size() != task.points.size()) {
      out.push_back({name + ".consumption", "one consumption rate per interest point"});
    }
  }

  const bool single = n_robots == 1;
  for (std::size_t i = 0; i < task.points.size(); ++i) {
    const InterestPoint& q = task.points[i];
    const std::string name = Indexed("points", i);
    if (!(q.production > 0.0)) out.push_back({name + ".production", "p > 0"});
    for (std::size_t r = 0; r < n_robots; ++r) {
      const auto& c = task.robots[r].consumption;
      if (!c.empty() && c.size() != task.points.size()) continue;
      const double rate = task.ConsumptionRate(r, i);
      if (single) {
        if (!(rate > q.production && q.production > 0.0)) {
          out.push_back({name + ".consumption", "c > p > 0"});
        }
      } else if (!(rate > 0.0)) {
        out.push_back({name + ".consumption" + Indexed("", r), "c_r > 0"});
      }
    }
  }
  return out;
}

}  // namespace persweep
