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

#ifndef PERSWEEP_FUNCTION_BASIS_HPP_
#define PERSWEEP_FUNCTION_BASIS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "persweep/controller.hpp"
#include "persweep/coverage.hpp"
#include "persweep/synthesis.hpp"

namespace persweep {

// Arbitrary basis functions on the unit circle, integrated numerically.
class FunctionBasis {
 public:
  using Function = std::function<double(double)>;

  explicit FunctionBasis(std::vector<Function> functions, std::size_t panels = 256);

  // 1, cos(2 pi k theta), sin(2 pi k theta) for k = 1..harmonics.
  static FunctionBasis Fourier(std::size_t harmonics);
  // Periodic Gaussian bumps centred at (i + 1/2) / count.
  static FunctionBasis Gaussian(std::size_t count, double width);

  std::size_t size() const { return functions_.size(); }
  double Eval(std::size_t j, double theta) const;
  double Combine(const std::vector<double>& alpha, double theta) const;
  // Composite Gauss-Legendre integral over [lo, hi] within [0, 1].
  double Integral(std::size_t j, double lo, double hi) const;
  double Integral(std::size_t j, const CoverageSet& coverage) const;

 private:
  std::vector<Function> functions_;
  std::size_t panels_;
};

struct SampledSynthesisOptions {
  std::vector<double> samples;     // theta values for the speed rows
  std::size_t sample_count = 200;  // used when samples is empty
  double delta = -1.0;             // as SynthesisOptions::delta
  double xi_step = 1e-3;           // first nonzero tightening, relative to the mean bound
  double xi_growth = 2.0;
  std::size_t check_resolution = 20000;
  std::size_t max_rounds = 40;
  bool maximize_margin = true;
};

struct SampledSynthesisResult {
  SynthesisStatus status = SynthesisStatus::kNumericalFailure;
  std::vector<double> alpha;
  std::optional<double> margin;
  double xi = 0.0;           // tightening that made the bounds hold
  bool bounds_hold = false;  // on the fine check grid
  std::size_t rounds = 0;
  // Cell averages of the synthesized reciprocal speed on the task's cells.
  std::optional<ReciprocalProfile> projected;
};

// Single-robot synthesis on a general basis. Speed limits are imposed at
// sample points tightened by xi; xi grows until a fine grid check passes.
SampledSynthesisResult SynthesizeSampled(const FunctionBasis& basis, const CoverageModel& model,
                                         const SampledSynthesisOptions& options = {},
                                         const LpSolver& solver = DenseSimplexSolver{});

}  // namespace persweep

#endif  // PERSWEEP_FUNCTION_BASIS_HPP_
