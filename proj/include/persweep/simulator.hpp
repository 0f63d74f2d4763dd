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

#ifndef PERSWEEP_SIMULATOR_HPP_
#define PERSWEEP_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persweep/controller.hpp"
#include "persweep/coverage.hpp"

namespace persweep {

enum class SimMode { kEventExact, kFixedStep };

const char* ToString(SimMode mode);
std::optional<SimMode> ParseSimMode(const std::string& name);

struct SimConfig {
  double horizon = 0.0;
  SimMode mode = SimMode::kEventExact;
  double dt = 0.0;                    // fixed-step only; 0 selects DefaultTimeStep
  std::vector<double> initial_field;  // per point; empty means all zero
  std::vector<double> initial_theta;  // per robot; empty means all zero
  double noise = 0.0;                 // production noise half-width n_max
  double epsilon = 0.0;               // constant production offset
  double eta = 0.0;                   // speed factor drawn from [1 - eta, 1 + eta] per cell
  std::uint64_t seed = 0;

  bool record = true;
  double record_start = 0.0;
  double record_interval = 0.0;  // 0 records every event or step
};

struct SimSummary {
  double max_field = 0.0;            // over the whole run and all points
  double previous_window_max = 0.0;  // over [H/2, 3H/4]
  double final_window_max = 0.0;     // over [3H/4, H]
  // A point diverges when its final-quarter max exceeds the previous quarter's
  // by more than 1%, the max rises by more than 1% across each eighth of the
  // second half, and the field never empties in the final quarter.
  bool diverging = false;
  std::vector<double> point_previous_max;
  std::vector<double> point_final_max;
  std::vector<bool> point_diverging;
  // Field growth per second over the second half of the run, measured
  // between cycle completions of robot 0.
  std::vector<double> growth_rate;
  std::size_t cycles = 0;  // completed by robot 0
  std::size_t events = 0;  // events or steps taken

  bool converged_periodic() const { return !diverging; }
};

struct CycleSample {
  double time = 0.0;
  std::vector<double> field;
};

struct SimTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> theta;  // [sample][robot]
  std::vector<std::vector<double>> field;  // [sample][point]
  std::vector<CycleSample> cycles;         // robot 0 returning to its start
  std::vector<double> final_field;
  SimSummary summary;
};

// Integrates the field under the given controllers, one per robot. Noise
// requires fixed-step mode. Throws std::invalid_argument on bad input.
SimTrace Simulate(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
                  const SimConfig& config);

// A tenth of the shortest cell transit time over all robots.
double DefaultTimeStep(std::span<const ReciprocalProfile> profiles);

enum class SweepParameter { kNoise, kEpsilon, kEta };

const char* ToString(SweepParameter parameter);
std::optional<SweepParameter> ParseSweepParameter(const std::string& name);

struct SweepStats {
  double value = 0.0;
  std::size_t trials = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::size_t diverging = 0;
};

struct SweepOptions {
  SweepParameter parameter = SweepParameter::kNoise;
  std::vector<double> values;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 uses the hardware concurrency
};

// Seed of one sweep trial, derived from (base seed, level index, trial index).
std::uint64_t TrialSeed(std::uint64_t base, std::size_t level, std::size_t trial);

// Statistics of the per-run maximum field for every parameter value. Noise
// sweeps run in fixed-step mode.
std::vector<SweepStats> Sweep(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
                              const SimConfig& base, const SweepOptions& options);

std::vector<SweepStats> NoiseSweep(const CoverageModel& model,
                                   std::span<const ReciprocalProfile> profiles,
                                   const SimConfig& base, std::vector<double> levels,
                                   std::size_t trials, std::uint64_t seed = 0);

// Largest epsilon for which sum_r c_r tau_r / T_r - p - epsilon stays
// positive at every point.
double AnalyticEpsilonThreshold(const CoverageModel& model,
                                std::span<const ReciprocalProfile> profiles);

struct EpsilonScan {
  std::vector<double> epsilons;
  std::vector<bool> diverging;
  std::optional<double> largest_stable;  // before the first divergent value
  double analytic_threshold = 0.0;
};

EpsilonScan EpsilonThreshold(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
                             const SimConfig& base, std::vector<double> grid);

}  // namespace persweep

#endif  // PERSWEEP_SIMULATOR_HPP_
