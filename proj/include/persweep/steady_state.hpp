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

#ifndef PERSWEEP_STEADY_STATE_HPP_
#define PERSWEEP_STEADY_STATE_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "persweep/controller.hpp"
#include "persweep/coverage.hpp"

namespace persweep {

// Raised when a steady state is requested for a profile that does not
// stabilize the point.
class DivergentError : public std::domain_error {
 public:
  DivergentError(const std::string& what, double growth_per_cycle)
      : std::domain_error(what), growth_per_cycle_(growth_per_cycle) {}
  double growth_per_cycle() const { return growth_per_cycle_; }

 private:
  double growth_per_cycle_;
};

// N_{k-b,k}: net field change from y_{k-b} to y_k when the point never
// empties in between. k is 0-based, b in [0, l]; b = l wraps the whole cycle.
double ComputeN(const Decomposition& dec, std::size_t k, std::size_t b,
                const ReciprocalProfile& profile, double production, double consumption);

struct PointSteadyState {
  bool stabilizing = false;
  double margin = 0.0;            // c tau - p T
  double growth_per_cycle = 0.0;  // p T - c tau when not stabilizing, else 0
  Decomposition decomposition;    // empty x/y for full or empty coverage
  std::vector<double> at_x;       // steady field at x_k
  std::vector<double> at_y;       // steady field at y_k
  double h = 0.0;                 // max over the cycle
  double argmax_theta = 0.0;
};

// Endpoint values and H(q, v) for one point. Full coverage gives an
// identically zero steady state; a zero margin counts as not stabilizing.
PointSteadyState AnalyzePoint(const ReciprocalProfile& profile, const CoverageSet& coverage,
                              double production, double consumption);

// Steady field at y_k for every k. Throws DivergentError when not stabilizing.
std::vector<double> EndpointValues(const ReciprocalProfile& profile, const CoverageSet& coverage,
                                   double production, double consumption);

// H(q, v). Throws DivergentError when not stabilizing.
double MaxH(const ReciprocalProfile& profile, const CoverageSet& coverage, double production,
            double consumption);

struct SteadyStateReport {
  std::vector<PointSteadyState> points;
  std::vector<std::size_t> unstable;  // indices of non-stabilized points
  double h = 0.0;                     // H(v); meaningful only when unstable is empty
  std::size_t argmax_point = 0;

  bool stabilizing() const { return unstable.empty(); }
};

SteadyStateReport AnalyzeAll(const ReciprocalProfile& profile, const CoverageModel& model,
                             std::size_t robot = 0);

// H(v). Throws DivergentError naming the first unstable point.
double MaxHAll(const ReciprocalProfile& profile, const CoverageModel& model, std::size_t robot = 0);

struct CurvePoint {
  double theta = 0.0;
  double value = 0.0;
};

// One period of the steady field over theta in [0, 1]. Knots include every
// cell boundary, coverage endpoint, and emptying point, so linear
// interpolation between knots is exact.
class SteadyStateCurve {
 public:
  SteadyStateCurve(const ReciprocalProfile& profile, const CoverageSet& coverage, double production,
                   double consumption);

  const std::vector<CurvePoint>& knots() const { return knots_; }
  double ValueAt(double theta) const;
  double Max() const;
  // Knot values plus `resolution` evenly spaced samples, sorted by theta.
  std::vector<CurvePoint> Sample(std::size_t resolution) const;

 private:
  std::vector<CurvePoint> knots_;
};

}  // namespace persweep

#endif  // PERSWEEP_STEADY_STATE_HPP_
