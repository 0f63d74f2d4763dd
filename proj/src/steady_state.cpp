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

#include "persweep/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace persweep {

double ComputeN(const Decomposition& dec, std::size_t k, std::size_t b,
                const ReciprocalProfile& profile, double production, double consumption) {
  const std::size_t l = dec.size();
  if (b == 0) return 0.0;
  if (l == 0 || k >= l || b > l) throw std::out_of_range("ComputeN: index out of range");
  const auto sk = static_cast<std::ptrdiff_t>(k);
  const double span = b == l ? profile.CycleTime()
                             : profile.ArcIntegral(dec.y[dec.Wrap(sk - static_cast<std::ptrdiff_t>(b))],
                                                   dec.y[k]);
  double value = production * span;
  for (std::size_t w = 0; w < b; ++w) {
    const std::size_t m = dec.Wrap(sk - static_cast<std::ptrdiff_t>(w));
    value -= consumption * profile.ArcIntegral(dec.x[m], dec.y[m]);
  }
  return value;
}

PointSteadyState AnalyzePoint(const ReciprocalProfile& profile, const CoverageSet& coverage,
                              double production, double consumption) {
  PointSteadyState out;
  out.margin = consumption * profile.CoverageTime(coverage) - production * profile.CycleTime();
  out.stabilizing = out.margin > 0.0;
  if (!out.stabilizing) {
    out.growth_per_cycle = -out.margin;
    return out;
  }
  if (coverage.full()) return out;

  out.decomposition = Decompose(coverage);
  const Decomposition& dec = out.decomposition;
  const std::size_t l = dec.size();
  out.at_y.assign(l, 0.0);
  out.at_x.assign(l, 0.0);
  for (std::size_t k = 0; k < l; ++k) {
    double best = 0.0;
    for (std::size_t b = 1; b < l; ++b) {
      best = std::max(best, ComputeN(dec, k, b, profile, production, consumption));
    }
    out.at_y[k] = best;
  }
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t next = dec.Wrap(static_cast<std::ptrdiff_t>(k) + 1);
    out.at_x[next] = out.at_y[k] + production * profile.ArcIntegral(dec.y[k], dec.x[next]);
  }
  out.h = -1.0;
  for (std::size_t k = 0; k < l; ++k) {
    if (out.at_x[k] > out.h) {
      out.h = out.at_x[k];
      out.argmax_theta = dec.x[k];
    }
    if (out.at_y[k] > out.h) {
      out.h = out.at_y[k];
      out.argmax_theta = dec.y[k];
    }
  }
  return out;
}

namespace {

[[noreturn]] void ThrowDivergent(const PointSteadyState& s, const std::string& where) {
  throw DivergentError(where + ": profile does not stabilize the point (growth " +
                           std::to_string(s.growth_per_cycle) + " per cycle)",
                       s.growth_per_cycle);
}

}  // namespace

std::vector<double> EndpointValues(const ReciprocalProfile& profile, const CoverageSet& coverage,
                                   double production, double consumption) {
  PointSteadyState s = AnalyzePoint(profile, coverage, production, consumption);
  if (!s.stabilizing) ThrowDivergent(s, "EndpointValues");
  return s.at_y;
}

double MaxH(const ReciprocalProfile& profile, const CoverageSet& coverage, double production,
            double consumption) {
  PointSteadyState s = AnalyzePoint(profile, coverage, production, consumption);
  if (!s.stabilizing) ThrowDivergent(s, "MaxH");
  return s.h;
}

SteadyStateReport AnalyzeAll(const ReciprocalProfile& profile, const CoverageModel& model,
                             std::size_t robot) {
  const RobotCoverage& rc = model.robots.at(robot);
  SteadyStateReport report;
  for (std::size_t i = 0; i < model.point_count(); ++i) {
    report.points.push_back(
        AnalyzePoint(profile, rc.coverage[i], model.production[i], rc.consumption[i]));
    const PointSteadyState& s = report.points.back();
    if (!s.stabilizing) {
      report.unstable.push_back(i);
    } else if (i == 0 || s.h > report.h) {
      report.h = s.h;
      report.argmax_point = i;
    }
  }
  return report;
}

double MaxHAll(const ReciprocalProfile& profile, const CoverageModel& model, std::size_t robot) {
  const SteadyStateReport report = AnalyzeAll(profile, model, robot);
  if (!report.stabilizing()) {
    const std::size_t i = report.unstable.front();
    ThrowDivergent(report.points[i], "MaxHAll: point " + std::to_string(i));
  }
  return report.h;
}

SteadyStateCurve::SteadyStateCurve(const ReciprocalProfile& profile, const CoverageSet& coverage,
                                   double production, double consumption) {
  const PointSteadyState s = AnalyzePoint(profile, coverage, production, consumption);
  if (!s.stabilizing) ThrowDivergent(s, "SteadyStateCurve");
  if (coverage.full()) {
    knots_ = {{0.0, 0.0}, {1.0, 0.0}};
    return;
  }

  // Start from an endpoint where the steady field is zero.
  const auto anchor = static_cast<std::size_t>(
      std::min_element(s.at_y.begin(), s.at_y.end()) - s.at_y.begin());
  const double theta0 = s.decomposition.y[anchor];

  std::vector<double> cuts{0.0, 1.0};
  const std::size_t n = profile.cells();
  const Basis& basis = profile.basis();
  for (std::size_t j = 0; j < n; ++j) cuts.push_back(ForwardArcLength(theta0, basis.CellStart(j)));
  for (std::size_t k = 0; k < s.decomposition.size(); ++k) {
    cuts.push_back(ForwardArcLength(theta0, s.decomposition.x[k]));
    cuts.push_back(ForwardArcLength(theta0, s.decomposition.y[k]));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto to_theta = [theta0](double arc) {
    const double t = theta0 + arc;
    return t >= 1.0 ? t - 1.0 : t;
  };

  std::vector<CurvePoint> walk;  // in arc coordinates from theta0
  double z = s.at_y[anchor];
  walk.push_back({0.0, z});
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    const double mid = to_theta(0.5 * (a + b));
    const double inv = profile.Eval(mid);
    const double rate = (coverage.Contains(mid) ? production - consumption : production) * inv;
    const double end = z + rate * (b - a);
    if (end < 0.0) {
      if (z > 0.0) walk.push_back({a + z / -rate, 0.0});
      z = 0.0;
    } else {
      z = end;
    }
    walk.push_back({b, z});
  }

  // Unroll the arc coordinate back onto [0, 1], splitting at theta = 0.
  const double wrap_at = theta0 == 0.0 ? 1.0 : ForwardArcLength(theta0, 0.0);
  double wrap_value = walk.back().value;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (walk[i].theta == wrap_at) wrap_value = walk[i].value;
  }
  for (const CurvePoint& w : walk) {
    if (w.theta < wrap_at) {
      knots_.push_back({std::min(theta0 + w.theta, 1.0), w.value});
    } else if (w.theta > wrap_at) {
      knots_.push_back({w.theta - wrap_at, w.value});
    }
  }
  knots_.push_back({0.0, wrap_value});
  knots_.push_back({1.0, wrap_value});
  std::stable_sort(knots_.begin(), knots_.end(),
                   [](const CurvePoint& a, const CurvePoint& b) { return a.theta < b.theta; });
}

double SteadyStateCurve::ValueAt(double theta) const {
  theta -= std::floor(theta);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), theta,
                                   [](double t, const CurvePoint& k) { return t < k.theta; });
  if (it == knots_.begin()) return knots_.front().value;
  if (it == knots_.end()) return knots_.back().value;
  const CurvePoint& lo = *(it - 1);
  const CurvePoint& hi = *it;
  if (hi.theta <= lo.theta) return hi.value;
  return lo.value + (hi.value - lo.value) * (theta - lo.theta) / (hi.theta - lo.theta);
}

double SteadyStateCurve::Max() const {
  double m = 0.0;
  for (const CurvePoint& k : knots_) m = std::max(m, k.value);
  return m;
}

std::vector<CurvePoint> SteadyStateCurve::Sample(std::size_t resolution) const {
  std::vector<CurvePoint> out = knots_;
  for (std::size_t i = 0; i < resolution; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(resolution);
    out.push_back({t, ValueAt(t)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CurvePoint& a, const CurvePoint& b) { return a.theta < b.theta; });
  return out;
}

}  // namespace persweep
