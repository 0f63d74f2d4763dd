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

// persweep: synthesize, analyze and simulate speed controllers for
// persistent sweeping tasks.
//
// Exit codes: 0 success or feasible, 2 infeasible, 3 divergent, 4 input error,
// 1 anything else.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "persweep/controller.hpp"
#include "persweep/scenario.hpp"
#include "persweep/simulator.hpp"
#include "persweep/steady_state.hpp"
#include "persweep/synthesis.hpp"

namespace {

using namespace persweep;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitDivergent = 3;
constexpr int kExitInput = 4;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CoverageModel LoadModel(const Scenario& scenario) {
  std::vector<std::string> warnings;
  CoverageModel model = BuildModel(scenario, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return model;
}

std::vector<ReciprocalProfile> LoadProfiles(const std::string& path, const CoverageModel& model) {
  ControllerFile file = LoadController(path);
  if (file.profiles.size() != model.robot_count()) {
    throw InputError("controller has " + std::to_string(file.profiles.size()) +
                     " robots, scenario has " + std::to_string(model.robot_count()));
  }
  for (std::size_t r = 0; r < file.profiles.size(); ++r) {
    if (file.profiles[r].cells() != model.robots[r].cells) {
      throw InputError("controller robot " + std::to_string(r) + " has " +
                       std::to_string(file.profiles[r].cells()) + " cells, scenario has " +
                       std::to_string(model.robots[r].cells));
    }
  }
  return file.profiles;
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("not a number: \"" + item + "\"");
    }
  }
  if (out.empty()) throw InputError("empty value list");
  return out;
}

void WriteOrPrint(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    WriteFile(path, contents);
  }
}

// --- synthesize -------------------------------------------------------------

struct SynthesizeArgs {
  std::string scenario;
  std::string objective;  // empty: margin for one robot, multi-margin otherwise
  std::string output;
  std::string lp_dump;
};

// Names the point with the smallest margin under the margin program.
void ReportOffender(const CoverageModel& model, const SynthesisOptions& options, LpKind kind) {
  const bool multi = kind == LpKind::kMulti || kind == LpKind::kMultiMargin;
  const SynthesisResult diag = Synthesize(model, multi ? LpKind::kMultiMargin : LpKind::kMargin, options);
  if (!diag.feasible() || diag.point_slack.empty()) return;
  const auto it = std::min_element(diag.point_slack.begin(), diag.point_slack.end());
  std::cout << "offending point: " << (it - diag.point_slack.begin()) << " (best margin " << *it
            << ")\n";
}

int RunSynthesize(const SynthesizeArgs& args) {
  const Scenario scenario = LoadScenario(args.scenario);
  std::string objective = args.objective;
  if (objective.empty()) objective = scenario.robot_count() == 1 ? "margin" : "multi-margin";
  const auto kind = ParseLpKind(objective);
  if (!kind) throw InputError("unknown objective \"" + objective + "\"");
  const bool multi = *kind == LpKind::kMulti || *kind == LpKind::kMultiMargin;
  if (!multi && scenario.robot_count() != 1) {
    throw InputError("objective \"" + objective + "\" requires exactly one robot");
  }
  const CoverageModel model = LoadModel(scenario);

  const auto start = std::chrono::steady_clock::now();
  if (!args.lp_dump.empty()) {
    SynthesisLp lp;
    switch (*kind) {
      case LpKind::kFeasibility: lp = BuildFeasibilityLp(model, scenario.lp); break;
      case LpKind::kMargin: lp = BuildMarginLp(model, scenario.lp); break;
      case LpKind::kMinMax: lp = BuildMinMaxLp(model, scenario.lp); break;
      case LpKind::kMulti: lp = BuildMultiLp(model, false, scenario.lp); break;
      case LpKind::kMultiMargin: lp = BuildMultiLp(model, true, scenario.lp); break;
    }
    std::ostringstream os;
    lp.lp.WriteLpFormat(os);
    WriteFile(args.lp_dump, os.str());
  }
  const SynthesisResult result = Synthesize(model, *kind, scenario.lp);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "status: " << ToString(result.status) << '\n';
  std::cout << "objective: " << ToString(result.kind) << '\n';
  std::cout << "points: " << model.point_count() << ", robots: " << model.robot_count() << '\n';
  std::cout << "solve_seconds: " << seconds << '\n';
  if (result.status == SynthesisStatus::kInfeasible) {
    ReportOffender(model, scenario.lp, *kind);
    return kExitInfeasible;
  }
  if (!result.feasible()) {
    std::cerr << "error: solver reported " << ToString(result.status) << ": " << result.message << '\n';
    return kExitFailure;
  }
  const ControllerFile file = MakeControllerFile(result, model);
  if (file.bound) std::cout << "bound: " << *file.bound << '\n';
  if (file.robustness_bound) std::cout << "robustness_bound: " << *file.robustness_bound << '\n';
  for (std::size_t r = 0; r < result.profiles.size(); ++r) {
    std::cout << "cycle_time[" << r << "]: " << result.profiles[r].CycleTime() << '\n';
  }
  if (!args.output.empty()) WriteFile(args.output, WriteControllerJson(file));
  return kExitOk;
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::string scenario;
  std::string controller;
  std::string output;
  std::string curves_output;
  std::vector<std::size_t> curve_points;
  std::size_t resolution = 1000;
};

int RunAnalyze(const AnalyzeArgs& args) {
  const Scenario scenario = LoadScenario(args.scenario);
  if (scenario.robot_count() != 1) throw InputError("analyze requires a single-robot scenario");
  const CoverageModel model = LoadModel(scenario);
  const ReciprocalProfile profile = LoadProfiles(args.controller, model).front().Plain();
  const SteadyStateReport report = AnalyzeAll(profile, model);

  std::ostringstream csv;
  csv.precision(17);
  csv << "point,margin,stabilizing,h,argmax_theta\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const PointSteadyState& s = report.points[i];
    csv << i << ',' << s.margin << ',' << (s.stabilizing ? 1 : 0) << ',';
    if (s.stabilizing) {
      csv << s.h << ',' << s.argmax_theta;
    } else {
      csv << ',';
    }
    csv << '\n';
  }
  if (!args.output.empty()) WriteFile(args.output, csv.str());

  std::cout.precision(12);
  std::cout << "cycle_time: " << profile.CycleTime() << '\n';
  if (!report.stabilizing()) {
    std::cout << "divergent: " << report.unstable.size() << " of " << model.point_count()
              << " points are not stabilized\n";
    for (std::size_t i : report.unstable) {
      std::cout << "  point " << i << ": growth " << report.points[i].growth_per_cycle
                << " per cycle\n";
    }
    return kExitDivergent;
  }
  std::cout << "H: " << report.h << " (point " << report.argmax_point << ", theta "
            << report.points[report.argmax_point].argmax_theta << ")\n";

  if (!args.curves_output.empty()) {
    std::vector<std::size_t> points = args.curve_points;
    if (points.empty()) points.push_back(report.argmax_point);
    std::vector<SteadyStateCurve> curves;
    for (std::size_t i : points) {
      if (i >= model.point_count()) throw InputError("no point " + std::to_string(i));
      const RobotCoverage& rc = model.robots.front();
      curves.emplace_back(profile, rc.coverage[i], model.production[i], rc.consumption[i]);
    }
    std::ostringstream os;
    WriteCurveCsv(os, points, curves, args.resolution);
    WriteFile(args.curves_output, os.str());
  }
  return kExitOk;
}

// --- simulate / sweep ---------------------------------------------------------

struct SimArgs {
  std::string scenario;
  std::string controller;
  double horizon = 0.0;
  double cycles = 40.0;
  double dt = 0.0;
  std::string mode;
  double noise = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  double initial_field = 0.0;
  std::string theta;
  std::string trace;
  std::string summary;
  bool max_only = false;
  double record_interval = 0.0;
};

SimConfig MakeConfig(const SimArgs& args, const CoverageModel& model,
                     const std::vector<ReciprocalProfile>& profiles) {
  SimConfig cfg;
  double period = 0.0;
  for (const auto& p : profiles) period = std::max(period, p.CycleTime());
  cfg.horizon = args.horizon > 0.0 ? args.horizon : args.cycles * period;
  if (args.mode.empty()) {
    cfg.mode = args.noise > 0.0 ? SimMode::kFixedStep : SimMode::kEventExact;
  } else {
    const auto mode = ParseSimMode(args.mode);
    if (!mode) throw InputError("unknown mode \"" + args.mode + "\" (event or fixed)");
    cfg.mode = *mode;
  }
  cfg.dt = args.dt;
  cfg.noise = args.noise;
  cfg.epsilon = args.epsilon;
  cfg.eta = args.eta;
  cfg.seed = args.seed;
  if (args.initial_field != 0.0) cfg.initial_field.assign(model.point_count(), args.initial_field);
  if (!args.theta.empty()) cfg.initial_theta = ParseList(args.theta);
  cfg.record = !args.trace.empty();
  cfg.record_interval = args.record_interval;
  return cfg;
}

int RunSimulate(const SimArgs& args) {
  const Scenario scenario = LoadScenario(args.scenario);
  const CoverageModel model = LoadModel(scenario);
  const auto profiles = LoadProfiles(args.controller, model);
  const SimConfig cfg = MakeConfig(args, model, profiles);
  const SimTrace trace = Simulate(model, profiles, cfg);

  if (!args.trace.empty()) {
    std::ostringstream os;
    WriteTraceCsv(os, trace, args.max_only);
    WriteOrPrint(args.trace, os.str());
  }
  const auto margins = MultiRobotMargins(profiles, model);
  const std::string summary = SummaryJson(trace.summary, margins);
  if (!args.summary.empty()) {
    WriteFile(args.summary, summary);
  } else if (args.trace != "-") {
    std::cout << summary;
  }
  return trace.summary.diverging ? kExitDivergent : kExitOk;
}

struct SweepArgs {
  SimArgs sim;
  std::string param = "noise";
  std::string values;
  std::size_t trials = 20;
  std::size_t threads = 0;
  std::string output;
};

int RunSweep(const SweepArgs& args) {
  const Scenario scenario = LoadScenario(args.sim.scenario);
  const CoverageModel model = LoadModel(scenario);
  const auto profiles = LoadProfiles(args.sim.controller, model);
  const SimConfig cfg = MakeConfig(args.sim, model, profiles);
  SweepOptions options;
  const auto param = ParseSweepParameter(args.param);
  if (!param) throw InputError("unknown sweep parameter \"" + args.param + "\"");
  options.parameter = *param;
  options.values = ParseList(args.values);
  options.trials = args.trials;
  options.seed = args.sim.seed;
  options.threads = args.threads;
  const auto stats = Sweep(model, profiles, cfg, options);
  std::ostringstream os;
  WriteSweepCsv(os, args.param, stats);
  WriteOrPrint(args.output, os.str());
  return kExitOk;
}

void AddSimOptions(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--scenario", a.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--controller", a.controller, "Controller JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--horizon", a.horizon, "Simulated seconds (default: --cycles slowest cycles)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cycles", a.cycles, "Horizon in cycles of the slowest robot")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dt", a.dt, "Fixed step (default: shortest cell transit / 10)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--mode", a.mode, "event or fixed (default: event, fixed with noise)");
  cmd->add_option("--noise", a.noise, "Production noise half-width")->check(CLI::NonNegativeNumber);
  cmd->add_option("--epsilon", a.epsilon, "Production offset")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eta", a.eta, "Speed perturbation half-width")->check(CLI::Range(0.0, 0.999999));
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--initial-field", a.initial_field, "Initial field at every point")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--theta", a.theta, "Initial path parameters, comma separated");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speed controller synthesis and simulation for persistent sweeping tasks"};
  app.require_subcommand(1);

  SynthesizeArgs syn;
  auto* syn_cmd = app.add_subcommand("synthesize", "Solve a synthesis program and write a controller");
  syn_cmd->add_option("--scenario", syn.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  syn_cmd->add_option("--objective", syn.objective, "feasible, margin, minmax, multi, multi-margin (default: margin, or multi-margin for several robots)");
  syn_cmd->add_option("--output,-o", syn.output, "Controller JSON to write");
  syn_cmd->add_option("--lp-dump", syn.lp_dump, "Write the program in LP text format");

  AnalyzeArgs ana;
  auto* ana_cmd = app.add_subcommand("analyze", "Steady-state analysis of a single-robot controller");
  ana_cmd->add_option("--scenario", ana.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  ana_cmd->add_option("--controller", ana.controller, "Controller JSON")->required()->check(CLI::ExistingFile);
  ana_cmd->add_option("--output,-o", ana.output, "Per-point CSV");
  ana_cmd->add_option("--curves-output", ana.curves_output, "Steady-state curve CSV");
  ana_cmd->add_option("--points", ana.curve_points, "Points to include in the curve CSV");
  ana_cmd->add_option("--resolution", ana.resolution, "Curve samples per cycle")->check(CLI::PositiveNumber);

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate the field under a controller");
  AddSimOptions(sim_cmd, sim);
  sim_cmd->add_option("--trace", sim.trace, "Trace CSV (- for stdout)");
  sim_cmd->add_option("--summary", sim.summary, "Summary JSON (default: stdout)");
  sim_cmd->add_flag("--max-only", sim.max_only, "Trace only the largest field value");
  sim_cmd->add_option("--record-interval", sim.record_interval, "Minimum spacing of trace rows")
      ->check(CLI::NonNegativeNumber);

  SweepArgs swp;
  auto* swp_cmd = app.add_subcommand("sweep", "Max-field statistics over repeated seeded runs");
  AddSimOptions(swp_cmd, swp.sim);
  swp_cmd->add_option("--param", swp.param, "noise, epsilon or eta");
  swp_cmd->add_option("--values", swp.values, "Comma-separated parameter values")->required();
  swp_cmd->add_option("--trials", swp.trials, "Runs per value")->check(CLI::PositiveNumber);
  swp_cmd->add_option("--threads", swp.threads, "Worker threads (0: all cores)");
  swp_cmd->add_option("--output,-o", swp.output, "Stats CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*syn_cmd) return RunSynthesize(syn);
    if (*ana_cmd) return RunAnalyze(ana);
    if (*sim_cmd) return RunSimulate(sim);
    if (*swp_cmd) return RunSweep(swp);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
