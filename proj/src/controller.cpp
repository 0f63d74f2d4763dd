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

#include "persweep/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace persweep {

std::size_t Basis::CellOf(double theta) const {
  theta -= std::floor(theta);
  auto j = static_cast<std::size_t>(theta * static_cast<double>(cells));
  return std::min(j, cells - 1);
}

double Basis::Integral(std::size_t j, double lo, double hi) const {
  const double overlap = std::min(hi, CellEnd(j)) - std::max(lo, CellStart(j));
  return overlap > 0.0 ? height() * overlap : 0.0;
}

double Basis::Integral(std::size_t j, const CoverageSet& coverage) const {
  return height() * coverage.OverlapWith(CellStart(j), CellEnd(j));
}

ReciprocalProfile ReciprocalProfile::Rectangular(std::vector<double> alpha) {
  if (alpha.empty()) throw std::invalid_argument("ReciprocalProfile: no coefficients");
  ReciprocalProfile p;
  p.basis_ = Basis{alpha.size(), false};
  p.alpha_ = std::move(alpha);
  p.Rebuild();
  return p;
}

ReciprocalProfile ReciprocalProfile::Normalized(std::vector<double> alpha, double frequency) {
  if (alpha.empty()) throw std::invalid_argument("ReciprocalProfile: no coefficients");
  if (!(frequency > 0.0)) throw std::invalid_argument("ReciprocalProfile: frequency must be > 0");
  ReciprocalProfile p;
  p.basis_ = Basis{alpha.size(), true};
  p.alpha_ = std::move(alpha);
  p.frequency_ = frequency;
  p.Rebuild();
  return p;
}

void ReciprocalProfile::Rebuild() {
  const std::size_t n = basis_.cells;
  const double scale = basis_.normalized ? basis_.height() / *frequency_ : 1.0;
  cell_values_.resize(n);
  prefix_.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    cell_values_[j] = alpha_[j] * scale;
    prefix_[j + 1] = prefix_[j] + cell_values_[j] * (basis_.CellEnd(j) - basis_.CellStart(j));
  }
}

double ReciprocalProfile::Eval(double theta) const { return cell_values_[basis_.CellOf(theta)]; }

double ReciprocalProfile::Primitive(double theta) const {
  if (theta >= 1.0) return prefix_.back();
  if (theta <= 0.0) return 0.0;
  const std::size_t j = basis_.CellOf(theta);
  return prefix_[j] + cell_values_[j] * (theta - basis_.CellStart(j));
}

double ReciprocalProfile::Integral(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  // Within one cell the subtraction of primitives loses precision needlessly.
  const std::size_t j = basis_.CellOf(lo);
  if (hi <= basis_.CellEnd(j)) return cell_values_[j] * (hi - lo);
  return Primitive(hi) - Primitive(lo);
}

double ReciprocalProfile::ArcIntegral(double from, double to) const {
  if (to >= from) return Integral(from, to);
  return Integral(from, 1.0) + Integral(0.0, to);
}

double ReciprocalProfile::CoverageTime(const CoverageSet& coverage) const {
  if (coverage.full()) return CycleTime();
  double total = 0.0;
  for (const auto& iv : coverage.intervals()) total += ArcIntegral(iv.start, iv.end);
  return total;
}

ReciprocalProfile ReciprocalProfile::Scaled(double factor) const {
  std::vector<double> alpha = alpha_;
  if (basis_.normalized) return Normalized(std::move(alpha), *frequency_ / factor);
  for (double& a : alpha) a *= factor;
  return Rectangular(std::move(alpha));
}

std::vector<double> StabilityMargins(const ReciprocalProfile& profile, const CoverageModel& model,
                                     std::size_t robot) {
  const RobotCoverage& rc = model.robots.at(robot);
  const double period = profile.CycleTime();
  std::vector<double> margins(model.point_count());
  for (std::size_t i = 0; i < margins.size(); ++i) {
    margins[i] = rc.consumption[i] * profile.CoverageTime(rc.coverage[i]) -
                 model.production[i] * period;
  }
  return margins;
}

std::vector<double> MultiRobotMargins(std::span<const ReciprocalProfile> profiles,
                                      const CoverageModel& model) {
  if (profiles.size() != model.robot_count()) {
    throw std::invalid_argument("MultiRobotMargins: one profile per robot required");
  }
  std::vector<double> margins(model.point_count());
  for (std::size_t i = 0; i < margins.size(); ++i) {
    double consumed = 0.0;
    for (std::size_t r = 0; r < profiles.size(); ++r) {
      const RobotCoverage& rc = model.robots[r];
      consumed += rc.consumption[i] * profiles[r].CoverageTime(rc.coverage[i]) /
                  profiles[r].CycleTime();
    }
    margins[i] = consumed - model.production[i];
  }
  return margins;
}

double MinMargin(std::span<const double> margins) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : margins) m = std::min(m, v);
  return m;
}

bool WithinSpeedBounds(const ReciprocalProfile& profile, const RobotCoverage& robot,
                       double rel_tol) {
  if (profile.cells() != robot.cells) return false;
  for (std::size_t j = 0; j < robot.cells; ++j) {
    const double v = profile.CellValue(j);
    if (v < robot.inv_speed_min[j] * (1.0 - rel_tol)) return false;
    if (v > robot.inv_speed_max[j] * (1.0 + rel_tol)) return false;
  }
  return true;
}

ReciprocalProfile AverageControllers(std::span<const ReciprocalProfile> profiles) {
  if (profiles.empty()) throw std::invalid_argument("AverageControllers: no profiles");
  const std::size_t n = profiles.front().cells();
  std::vector<double> mean(n, 0.0);
  for (const auto& p : profiles) {
    if (p.cells() != n) throw std::invalid_argument("AverageControllers: mismatched bases");
    for (std::size_t j = 0; j < n; ++j) mean[j] += p.CellValue(j);
  }
  for (double& v : mean) v /= static_cast<double>(profiles.size());
  return ReciprocalProfile::Rectangular(std::move(mean));
}

}  // namespace persweep
