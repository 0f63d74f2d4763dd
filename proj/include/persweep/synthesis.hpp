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

#ifndef PERSWEEP_SYNTHESIS_HPP_
#define PERSWEEP_SYNTHESIS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "persweep/controller.hpp"
#include "persweep/coverage.hpp"
#include "persweep/linear_program.hpp"

namespace persweep {

// Strict inequalities are enforced as ">= delta". A negative delta selects
// the default 1e-6 * max_q p(q).
struct SynthesisOptions {
  double delta = -1.0;
  double delta_f = 1e-9;
};

enum class LpKind { kFeasibility, kMargin, kMinMax, kMulti, kMultiMargin };

const char* ToString(LpKind kind);
std::optional<LpKind> ParseLpKind(const std::string& name);

// A program together with the meaning of its columns and rows.
struct SynthesisLp {
  LpKind kind = LpKind::kFeasibility;
  LinearProgram lp;
  std::vector<std::vector<std::size_t>> alpha;  // [robot][cell] -> column
  std::vector<std::size_t> frequency;           // [robot] -> column (multi only)
  std::optional<std::size_t> bound;             // column of B
  std::vector<std::size_t> point_rows;          // stability row of each point
  std::size_t minmax_rows = 0;                  // number of steady-state rows
  std::vector<double> production;               // p(q_i), multi only
};

enum class SynthesisStatus { kFeasible, kInfeasible, kUnbounded, kNumericalFailure };

const char* ToString(SynthesisStatus status);

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::kNumericalFailure;
  LpKind kind = LpKind::kFeasibility;
  std::vector<ReciprocalProfile> profiles;
  std::optional<double> objective;  // B for margin and min-max programs
  // Per point: sum_j alpha_j K(q_i, beta_j) for single-robot programs,
  // sum_r sum_j alpha_rj K_r(q_i, beta_j) - p(q_i) for multi-robot ones.
  std::vector<double> point_slack;
  std::size_t iterations = 0;
  std::string message;

  bool feasible() const { return status == SynthesisStatus::kFeasible; }
};

// K(q, beta_j) = int_F beta_j - (p/c) int_0^1 beta_j.
double ComputeK(const CoverageSet& coverage, const Basis& basis, std::size_t j, double production,
                double consumption);

// K_r(q, beta_j) = c_r int_{F_r} beta_j on the normalized basis.
double ComputeKr(const CoverageSet& coverage, const Basis& basis, std::size_t j,
                 double consumption);

// X_{k,b}(q, beta_j): coefficient of alpha_j in the steady-state value at
// x_{k+1} reached after b covered intervals. k is 0-based; b in [0, l).
// Throws std::out_of_range for b outside that range or full-circle coverage.
double ComputeX(const Decomposition& dec, std::size_t k, std::size_t b, const Basis& basis,
                std::size_t j, double production, double consumption);

// All n coefficients X_{k,b}(q, beta_j) at once.
std::vector<double> XCoefficients(const Decomposition& dec, std::size_t k, std::size_t b,
                                  const Basis& basis, double production, double consumption);

// Single-robot programs; the model must hold exactly one robot.
SynthesisLp BuildFeasibilityLp(const CoverageModel& model, const SynthesisOptions& options = {});
SynthesisLp BuildMarginLp(const CoverageModel& model, const SynthesisOptions& options = {});
SynthesisLp BuildMinMaxLp(const CoverageModel& model, const SynthesisOptions& options = {});

// Normalized multi-robot program; with maximize_margin the stability rows
// become ">= p + B" and B is maximized.
SynthesisLp BuildMultiLp(const CoverageModel& model, bool maximize_margin,
                         const SynthesisOptions& options = {});

SynthesisResult Solve(const SynthesisLp& program, const LpSolver& solver);
SynthesisResult Solve(const SynthesisLp& program);

// Builds and solves; min-max runs the feasibility program first.
SynthesisResult Synthesize(const CoverageModel& model, LpKind kind,
                           const SynthesisOptions& options = {});

// Tolerable production offset per point: B c(q_i) / T. Throws
// std::invalid_argument when the result carries a negative margin.
std::vector<double> RobustnessBound(const SynthesisResult& result, const CoverageModel& model);
double RobustnessBoundScalar(const SynthesisResult& result, const CoverageModel& model);

}  // namespace persweep

#endif  // PERSWEEP_SYNTHESIS_HPP_
