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

#include "persweep/function_basis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace persweep {

namespace {

// Five-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kNodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                       0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kWeights{0.2369268850561891, 0.4786286704993665,
                                         0.5688888888888889, 0.4786286704993665,
                                         0.2369268850561891};

}  // namespace

FunctionBasis::FunctionBasis(std::vector<Function> functions, std::size_t panels)
    : functions_(std::move(functions)), panels_(std::max<std::size_t>(panels, 1)) {
  if (functions_.empty()) throw std::invalid_argument("FunctionBasis: no functions");
}

FunctionBasis FunctionBasis::Fourier(std::size_t harmonics) {
  std::vector<Function> fns{[](double) { return 1.0; }};
  for (std::size_t k = 1; k <= harmonics; ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
    fns.push_back([w](double t) { return std::cos(w * t); });
    fns.push_back([w](double t) { return std::sin(w * t); });
  }
  return FunctionBasis(std::move(fns));
}

FunctionBasis FunctionBasis::Gaussian(std::size_t count, double width) {
  if (count == 0 || !(width > 0.0)) throw std::invalid_argument("FunctionBasis: bad Gaussian basis");
  std::vector<Function> fns;
  for (std::size_t i = 0; i < count; ++i) {
    const double centre = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    fns.push_back([centre, width](double t) {
      double d = t - centre;
      d -= std::round(d);
      return std::exp(-0.5 * d * d / (width * width));
    });
  }
  return FunctionBasis(std::move(fns));
}

double FunctionBasis::Eval(std::size_t j, double theta) const { return functions_[j](theta); }

double FunctionBasis::Combine(const std::vector<double>& alpha, double theta) const {
  double v = 0.0;
  for (std::size_t j = 0; j < functions_.size(); ++j) v += alpha[j] * functions_[j](theta);
  return v;
}

double FunctionBasis::Integral(std::size_t j, double lo, double hi) const {
  if (hi <= lo) return 0.0;
  const auto panels = static_cast<std::size_t>(
      std::ceil(static_cast<double>(panels_) * (hi - lo)));
  const double h = (hi - lo) / static_cast<double>(std::max<std::size_t>(panels, 1));
  double total = 0.0;
  for (std::size_t p = 0; p < std::max<std::size_t>(panels, 1); ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t q = 0; q < kNodes.size(); ++q) {
      total += kWeights[q] * functions_[j](mid + 0.5 * h * kNodes[q]);
    }
  }
  return 0.5 * h * total;
}

double FunctionBasis::Integral(std::size_t j, const CoverageSet& coverage) const {
  if (coverage.full()) return Integral(j, 0.0, 1.0);
  double total = 0.0;
  for (const ArcInterval& iv : coverage.intervals()) {
    total += iv.wraps() ? Integral(j, iv.start, 1.0) + Integral(j, 0.0, iv.end)
                        : Integral(j, iv.start, iv.end);
  }
  return total;
}

SampledSynthesisResult SynthesizeSampled(const FunctionBasis& basis, const CoverageModel& model,
                                         const SampledSynthesisOptions& options,
                                         const LpSolver& solver) {
  if (model.robot_count() != 1) {
    throw std::invalid_argument("SynthesizeSampled: exactly one robot required");
  }
  const RobotCoverage& rc = model.robots.front();
  const Basis cells{rc.cells, false};
  const std::size_t nb = basis.size();

  std::vector<double> samples = options.samples;
  if (samples.empty()) {
    for (std::size_t s = 0; s < options.sample_count; ++s) {
      samples.push_back((static_cast<double>(s) + 0.5) / static_cast<double>(options.sample_count));
    }
  }

  std::vector<double> whole(nb);
  for (std::size_t j = 0; j < nb; ++j) whole[j] = basis.Integral(j, 0.0, 1.0);
  std::vector<std::vector<double>> k_rows(model.point_count(), std::vector<double>(nb));
  for (std::size_t i = 0; i < model.point_count(); ++i) {
    const double ratio = model.production[i] / rc.consumption[i];
    for (std::size_t j = 0; j < nb; ++j) {
      k_rows[i][j] = basis.Integral(j, rc.coverage[i]) - ratio * whole[j];
    }
  }

  double pmax = 0.0, mean_bound = 0.0;
  for (double p : model.production) pmax = std::max(pmax, p);
  for (std::size_t j = 0; j < rc.cells; ++j) mean_bound += rc.inv_speed_min[j] + rc.inv_speed_max[j];
  mean_bound /= 2.0 * static_cast<double>(rc.cells);
  const double delta = options.delta >= 0.0 ? options.delta : 1e-6 * pmax;

  SampledSynthesisResult result;
  double xi = 0.0;
  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    result.rounds = round + 1;
    LinearProgram lp(options.maximize_margin ? ObjectiveSense::kMaximize
                                             : ObjectiveSense::kMinimize);
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < nb; ++j) cols.push_back(lp.AddVariable("a_0_" + std::to_string(j), -kInf, kInf));
    std::optional<std::size_t> bound;
    if (options.maximize_margin) bound = lp.AddVariable("B", -kInf, kInf, 1.0);
    for (std::size_t i = 0; i < model.point_count(); ++i) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < nb; ++j) terms.push_back({cols[j], k_rows[i][j]});
      if (bound) terms.push_back({*bound, -1.0});
      lp.AddRow("stab_" + std::to_string(i), std::move(terms), RowSense::kGreaterEqual,
                bound ? 0.0 : delta);
    }
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const std::size_t cell = cells.CellOf(samples[s]);
      std::vector<Term> terms;
      for (std::size_t j = 0; j < nb; ++j) terms.push_back({cols[j], basis.Eval(j, samples[s])});
      const std::string tag = std::to_string(s);
      lp.AddRow("lo_" + tag, terms, RowSense::kGreaterEqual, rc.inv_speed_min[cell] + xi);
      lp.AddRow("hi_" + tag, std::move(terms), RowSense::kLessEqual, rc.inv_speed_max[cell] - xi);
    }

    const LpSolution sol = solver.Solve(lp);
    switch (sol.status) {
      case LpStatus::kOptimal: result.status = SynthesisStatus::kFeasible; break;
      case LpStatus::kInfeasible: result.status = SynthesisStatus::kInfeasible; break;
      case LpStatus::kUnbounded: result.status = SynthesisStatus::kUnbounded; break;
      case LpStatus::kNumericalFailure: result.status = SynthesisStatus::kNumericalFailure; break;
    }
    result.xi = xi;
    if (result.status != SynthesisStatus::kFeasible) return result;

    result.alpha.assign(nb, 0.0);
    for (std::size_t j = 0; j < nb; ++j) result.alpha[j] = sol.x[cols[j]];
    result.margin = bound ? std::optional<double>(sol.x[*bound]) : std::nullopt;

    bool ok = true;
    for (std::size_t g = 0; g < options.check_resolution && ok; ++g) {
      const double t = (static_cast<double>(g) + 0.5) / static_cast<double>(options.check_resolution);
      const std::size_t cell = cells.CellOf(t);
      const double v = basis.Combine(result.alpha, t);
      ok = v >= rc.inv_speed_min[cell] * (1.0 - 1e-9) && v <= rc.inv_speed_max[cell] * (1.0 + 1e-9);
    }
    if (ok) {
      result.bounds_hold = true;
      std::vector<double> avg(rc.cells);
      for (std::size_t c = 0; c < rc.cells; ++c) {
        const double lo = cells.CellStart(c), hi = cells.CellEnd(c);
        double total = 0.0;
        for (std::size_t j = 0; j < nb; ++j) total += result.alpha[j] * basis.Integral(j, lo, hi);
        avg[c] = total / (hi - lo);
      }
      result.projected = ReciprocalProfile::Rectangular(std::move(avg));
      return result;
    }
    xi = xi == 0.0 ? options.xi_step * mean_bound : xi * options.xi_growth;
  }
  return result;
}

}  // namespace persweep
