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

#ifndef PERSWEEP_SCENARIO_HPP_
#define PERSWEEP_SCENARIO_HPP_

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "persweep/controller.hpp"
#include "persweep/coverage.hpp"
#include "persweep/simulator.hpp"
#include "persweep/steady_state.hpp"
#include "persweep/synthesis.hpp"
#include "persweep/task_model.hpp"

namespace persweep {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A task as read from JSON. Geometric scenarios fill `task`; scenarios that
// give coverage intervals directly fill `explicit_model` instead.
struct Scenario {
  std::string name;
  PersistentTask task;
  std::optional<CoverageModel> explicit_model;
  std::size_t coverage_samples = 0;
  SynthesisOptions lp;

  std::size_t robot_count() const;
  std::size_t point_count() const;
};

// Throws ScenarioError on malformed JSON or a task failing validation.
Scenario ParseScenario(const std::string& text);
Scenario LoadScenario(const std::string& path);

CoverageModel BuildModel(const Scenario& scenario, std::vector<std::string>* warnings = nullptr);

// Controller files: one profile per robot plus synthesis diagnostics.
struct ControllerFile {
  std::string objective;
  std::string status;
  std::vector<ReciprocalProfile> profiles;
  std::optional<double> bound;
  std::optional<double> robustness_bound;
  std::vector<double> point_slack;
};

ControllerFile MakeControllerFile(const SynthesisResult& result, const CoverageModel& model);
std::string WriteControllerJson(const ControllerFile& file);
ControllerFile ParseController(const std::string& text);
ControllerFile LoadController(const std::string& path);

// CSV tables.
void WriteTraceCsv(std::ostream& os, const SimTrace& trace, bool max_only);
void WriteSweepCsv(std::ostream& os, const std::string& parameter, std::span<const SweepStats> rows);
// Steady-state curves sampled at theta = k / resolution, k = 0..resolution.
void WriteCurveCsv(std::ostream& os, std::span<const std::size_t> points,
                   std::span<const SteadyStateCurve> curves, std::size_t resolution);

std::string SummaryJson(const SimSummary& summary, std::span<const double> margins);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace persweep

#endif  // PERSWEEP_SCENARIO_HPP_
