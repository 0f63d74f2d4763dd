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

#ifndef PERSWEEP_CONTROLLER_HPP_
#define PERSWEEP_CONTROLLER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "persweep/coverage.hpp"

namespace persweep {

// Rectangular basis on [0, 1): cell j covers [j/n, (j+1)/n). Normalized bases
// have height n so that every function integrates to 1; otherwise height 1.
struct Basis {
  std::size_t cells = 1;
  bool normalized = false;

  double height() const { return normalized ? static_cast<double>(cells) : 1.0; }
  double CellStart(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(cells); }
  double CellEnd(std::size_t j) const {
    return j + 1 == cells ? 1.0 : static_cast<double>(j + 1) / static_cast<double>(cells);
  }
  std::size_t CellOf(double theta) const;
  // Integral of beta_j over [lo, hi), 0 <= lo <= hi <= 1.
  double Integral(std::size_t j, double lo, double hi) const;
  // Integral of beta_j over F(q).
  double Integral(std::size_t j, const CoverageSet& coverage) const;

  friend bool operator==(const Basis&, const Basis&) = default;
};

// Reciprocal speed v^{-1}(theta) = sum_j alpha_j beta_j(theta).
//
// Plain profiles use a height-1 basis and alpha in seconds per unit theta.
// Normalized profiles (multi-robot form) carry sum(alpha) = 1 on a height-n
// basis plus a frequency f = 1/T, so that v = f * vbar.
class ReciprocalProfile {
 public:
  ReciprocalProfile() = default;
  static ReciprocalProfile Rectangular(std::vector<double> alpha);
  static ReciprocalProfile Normalized(std::vector<double> alpha, double frequency);

  const Basis& basis() const { return basis_; }
  const std::vector<double>& alpha() const { return alpha_; }
  std::optional<double> frequency() const { return frequency_; }
  bool normalized() const { return basis_.normalized; }
  std::size_t cells() const { return basis_.cells; }

  // Reciprocal speed on cell j, seconds per unit theta.
  double CellValue(std::size_t j) const { return cell_values_[j]; }
  const std::vector<double>& CellValues() const { return cell_values_; }

  double Eval(double theta) const;
  double CycleTime() const { return prefix_.back(); }
  // Time spent on [lo, hi), 0 <= lo <= hi <= 1.
  double Integral(double lo, double hi) const;
  // Time spent on the forward arc from `from` to `to` (wraps through 1 -> 0).
  double ArcIntegral(double from, double to) const;
  double CoverageTime(const CoverageSet& coverage) const;

  // Same speeds expressed on the plain height-1 basis.
  ReciprocalProfile Plain() const { return Rectangular(cell_values_); }
  ReciprocalProfile Scaled(double factor) const;

 private:
  void Rebuild();
  double Primitive(double theta) const;

  Basis basis_;
  std::vector<double> alpha_;
  std::optional<double> frequency_;
  std::vector<double> cell_values_;
  std::vector<double> prefix_{0.0};
};

// c(q) tau(q) - p(q) T for every point of one robot. Positive everywhere iff
// the controller keeps the field bounded.
std::vector<double> StabilityMargins(const ReciprocalProfile& profile, const CoverageModel& model,
                                     std::size_t robot = 0);

// sum_r c_r(q) tau_r(q) / T_r - p(q) for every point.
std::vector<double> MultiRobotMargins(std::span<const ReciprocalProfile> profiles,
                                      const CoverageModel& model);

double MinMargin(std::span<const double> margins);

bool WithinSpeedBounds(const ReciprocalProfile& profile, const RobotCoverage& robot,
                       double rel_tol = 1e-9);

// Per-cycle averaging of k controllers: v^{-1} is the mean of the inputs'
// reciprocal speeds. Throws std::invalid_argument on an empty list or
// mismatched cell counts.
ReciprocalProfile AverageControllers(std::span<const ReciprocalProfile> profiles);

}  // namespace persweep

#endif  // PERSWEEP_CONTROLLER_HPP_
