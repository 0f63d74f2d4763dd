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

#include "persweep/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace persweep {

const char* ToString(SimMode mode) {
  return mode == SimMode::kEventExact ? "event" : "fixed";
}

std::optional<SimMode> ParseSimMode(const std::string& name) {
  if (name == "event") return SimMode::kEventExact;
  if (name == "fixed") return SimMode::kFixedStep;
  return std::nullopt;
}

const char* ToString(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kNoise: return "noise";
    case SweepParameter::kEpsilon: return "epsilon";
    case SweepParameter::kEta: return "eta";
  }
  return "unknown";
}

std::optional<SweepParameter> ParseSweepParameter(const std::string& name) {
  for (SweepParameter p : {SweepParameter::kNoise, SweepParameter::kEpsilon, SweepParameter::kEta}) {
    if (name == ToString(p)) return p;
  }
  return std::nullopt;
}

double DefaultTimeStep(std::span<const ReciprocalProfile> profiles) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& profile : profiles) {
    const Basis& basis = profile.basis();
    for (std::size_t j = 0; j < profile.cells(); ++j) {
      best = std::min(best, profile.CellValue(j) * (basis.CellEnd(j) - basis.CellStart(j)));
    }
  }
  return best / 10.0;
}

namespace {

// Stretch of the path between consecutive breakpoints: constant speed and
// constant set of covered points.
struct Segment {
  double start = 0.0;
  double end = 0.0;
  double inv_speed = 0.0;
  std::size_t cell = 0;
  std::vector<std::size_t> covered;
};

struct Robot {
  std::vector<Segment> segments;
  std::size_t seg = 0;
  std::size_t origin_seg = 0;
  double theta = 0.0;
  double factor = 1.0;
  std::vector<char> covering;  // per point, under the current segment

  const Segment& current() const { return segments[seg]; }
  double TimeToBoundary() const { return (current().end - theta) * current().inv_speed / factor; }
};

Robot BuildRobot(const RobotCoverage& rc, const ReciprocalProfile& profile, double theta0,
                 std::size_t points) {
  const Basis& basis = profile.basis();
  std::vector<double> cuts;
  for (std::size_t j = 0; j < basis.cells; ++j) cuts.push_back(basis.CellStart(j));
  for (const CoverageSet& cov : rc.coverage) {
    for (const ArcInterval& iv : cov.intervals()) {
      cuts.push_back(iv.start);
      cuts.push_back(iv.end);
    }
  }
  cuts.push_back(theta0);
  for (double& c : cuts) {
    if (c >= 1.0) c -= 1.0;
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Robot robot;
  robot.covering.assign(points, 0);
  for (std::size_t s = 0; s < cuts.size(); ++s) {
    Segment seg;
    seg.start = cuts[s];
    seg.end = s + 1 < cuts.size() ? cuts[s + 1] : 1.0;
    const double mid = 0.5 * (seg.start + seg.end);
    seg.cell = basis.CellOf(mid);
    seg.inv_speed = profile.CellValue(seg.cell);
    for (std::size_t i = 0; i < points; ++i) {
      if (rc.coverage[i].Contains(mid)) seg.covered.push_back(i);
    }
    if (seg.start == theta0) robot.origin_seg = s;
    robot.segments.push_back(std::move(seg));
  }
  robot.seg = robot.origin_seg;
  robot.theta = theta0;
  for (std::size_t i : robot.current().covered) robot.covering[i] = 1;
  return robot;
}

class Engine {
 public:
  Engine(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
         const SimConfig& config)
      : model_(model), config_(config), rng_(config.seed) {
    const std::size_t m = model.point_count();
    for (std::size_t r = 0; r < model.robot_count(); ++r) {
      double theta0 = config.initial_theta.empty() ? 0.0 : config.initial_theta[r];
      theta0 -= std::floor(theta0);
      if (theta0 >= 1.0) theta0 = 0.0;
      robots_.push_back(BuildRobot(model.robots[r], profiles[r], theta0, m));
      if (config.eta > 0.0) robots_.back().factor = DrawFactor();
    }
    z_ = config.initial_field.empty() ? std::vector<double>(m, 0.0) : config.initial_field;
    rate_.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) UpdateRate(i);

    half_ = 0.5 * config.horizon;
    three_quarter_ = 0.75 * config.horizon;
    for (std::size_t k = 0; k <= kWindows; ++k) {
      window_edge_[k] = half_ + static_cast<double>(k) * config.horizon / (2.0 * kWindows);
    }
    window_max_.assign(m, std::array<double, kWindows>{});
    final_zero_.assign(m, 0);
    trace_.summary.point_previous_max.assign(m, 0.0);
    trace_.summary.point_final_max.assign(m, 0.0);
    trace_.summary.point_diverging.assign(m, false);
    trace_.summary.growth_rate.assign(m, 0.0);
    Observe();
  }

  SimTrace Run() {
    if (config_.mode == SimMode::kEventExact) {
      RunEventExact();
    } else {
      RunFixedStep();
    }
    Finish();
    return std::move(trace_);
  }

 private:
  double DrawFactor() {
    std::uniform_real_distribution<double> dist(1.0 - config_.eta, 1.0 + config_.eta);
    return dist(rng_);
  }

  void UpdateRate(std::size_t i) {
    double rate = model_.production[i] + config_.epsilon;
    for (std::size_t r = 0; r < robots_.size(); ++r) {
      if (robots_[r].covering[i]) rate -= model_.robots[r].consumption[i];
    }
    rate_[i] = rate;
  }

  double EmptyingTime(std::size_t i) const { return z_[i] / -rate_[i]; }

  // Moves robot r onto its next segment; theta snaps to the breakpoint.
  void Cross(std::size_t r) {
    Robot& robot = robots_[r];
    const std::size_t old_cell = robot.current().cell;
    const std::vector<std::size_t>& old_cov = robot.current().covered;
    for (std::size_t i : old_cov) robot.covering[i] = 0;
    robot.seg = robot.seg + 1 == robot.segments.size() ? 0 : robot.seg + 1;
    robot.theta = robot.current().start;
    for (std::size_t i : robot.current().covered) robot.covering[i] = 1;
    for (std::size_t i : old_cov) UpdateRate(i);
    for (std::size_t i : robot.current().covered) UpdateRate(i);
    if (config_.eta > 0.0 && robot.current().cell != old_cell) robot.factor = DrawFactor();
    if (r == 0 && robot.seg == robot.origin_seg) {
      ++trace_.summary.cycles;
      cycle_pending_ = true;
    }
  }

  // Advances robot r by dt without reaching its segment end.
  void Drift(Robot& robot, double dt) {
    robot.theta += dt * robot.factor / robot.current().inv_speed;
    robot.theta = std::min(robot.theta, robot.current().end);
  }

  void RunEventExact() {
    const double horizon = config_.horizon;
    const std::span<const double> forced(window_edge_.data(), kWindows);
    std::vector<std::size_t> crossing;
    while (t_ < horizon) {
      double step = horizon - t_;
      bool forced_hit = false;
      double forced_time = horizon;
      for (double f : forced) {
        if (f > t_ && f - t_ <= step) {
          step = f - t_;
          forced_time = f;
          forced_hit = true;
        }
      }
      for (const Robot& robot : robots_) step = std::min(step, robot.TimeToBoundary());
      for (std::size_t i = 0; i < z_.size(); ++i) {
        if (z_[i] > 0.0 && rate_[i] < 0.0) step = std::min(step, EmptyingTime(i));
      }

      crossing.clear();
      for (std::size_t r = 0; r < robots_.size(); ++r) {
        if (robots_[r].TimeToBoundary() <= step) crossing.push_back(r);
      }
      for (std::size_t i = 0; i < z_.size(); ++i) {
        if (rate_[i] == 0.0) continue;
        // Points whose emptying time is the step land exactly on zero.
        if (rate_[i] < 0.0 && (EmptyingTime(i) <= step || z_[i] <= -rate_[i] * step)) {
          z_[i] = 0.0;
        } else {
          z_[i] += rate_[i] * step;
        }
      }
      for (std::size_t r = 0; r < robots_.size(); ++r) {
        if (std::find(crossing.begin(), crossing.end(), r) == crossing.end()) Drift(robots_[r], step);
      }
      for (std::size_t r : crossing) Cross(r);

      if (step == horizon - t_) {
        t_ = horizon;
      } else if (forced_hit && step == forced_time - t_) {
        t_ = forced_time;
      } else {
        t_ += step;
      }
      Observe();
    }
  }

  void RunFixedStep() {
    const double horizon = config_.horizon;
    const double dt = config_.dt;
    std::uniform_real_distribution<double> noise(-config_.noise, config_.noise);
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    for (std::size_t s = 0; s < steps; ++s) {
      const double h = std::min(dt, horizon - t_);
      if (h <= 0.0) break;
      for (std::size_t i = 0; i < z_.size(); ++i) {
        double rate = rate_[i];
        if (config_.noise > 0.0) rate += noise(rng_);
        z_[i] = std::max(0.0, z_[i] + rate * h);
      }
      for (std::size_t r = 0; r < robots_.size(); ++r) {
        double remaining = h;
        while (remaining > 0.0) {
          const double to_end = robots_[r].TimeToBoundary();
          if (to_end <= remaining) {
            remaining -= to_end;
            Cross(r);
          } else {
            Drift(robots_[r], remaining);
            remaining = 0.0;
          }
        }
      }
      t_ = s + 1 == steps ? horizon : t_ + h;
      Observe();
    }
  }

  void Observe() {
    SimSummary& sum = trace_.summary;
    ++sum.events;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      sum.max_field = std::max(sum.max_field, z_[i]);
      if (t_ >= half_ && t_ <= three_quarter_) {
        sum.point_previous_max[i] = std::max(sum.point_previous_max[i], z_[i]);
      }
      if (t_ >= three_quarter_) {
        sum.point_final_max[i] = std::max(sum.point_final_max[i], z_[i]);
        if (z_[i] == 0.0) final_zero_[i] = 1;
      }
      for (std::size_t k = 0; k < kWindows; ++k) {
        if (t_ >= window_edge_[k] && t_ <= window_edge_[k + 1]) {
          window_max_[i][k] = std::max(window_max_[i][k], z_[i]);
        }
      }
    }
    if (cycle_pending_) {
      cycle_pending_ = false;
      if (t_ >= half_) {
        if (!first_half_cycle_) first_half_cycle_ = CycleSample{t_, z_};
        last_cycle_ = CycleSample{t_, z_};
      }
      if (config_.record) trace_.cycles.push_back({t_, z_});
    }
    if (config_.record && t_ >= config_.record_start &&
        (config_.record_interval <= 0.0 || trace_.times.empty() ||
         t_ - trace_.times.back() >= config_.record_interval || t_ >= config_.horizon)) {
      trace_.times.push_back(t_);
      std::vector<double> theta;
      for (const Robot& robot : robots_) theta.push_back(robot.theta >= 1.0 ? 0.0 : robot.theta);
      trace_.theta.push_back(std::move(theta));
      trace_.field.push_back(z_);
    }
  }

  void Finish() {
    SimSummary& sum = trace_.summary;
    trace_.final_field = z_;
    const double quarter = config_.horizon / 4.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      const double prev = sum.point_previous_max[i];
      const double last = sum.point_final_max[i];
      sum.previous_window_max = std::max(sum.previous_window_max, prev);
      sum.final_window_max = std::max(sum.final_window_max, last);
      // Growth must show between the quarters and persist across every
      // eighth of the second half, and a growing field never empties.
      sum.point_diverging[i] = Grows(prev, last) && !final_zero_[i];
      for (std::size_t k = 0; k + 1 < kWindows; ++k) {
        if (!Grows(window_max_[i][k], window_max_[i][k + 1])) sum.point_diverging[i] = false;
      }
      if (first_half_cycle_ && last_cycle_ && last_cycle_->time > first_half_cycle_->time) {
        sum.growth_rate[i] = (last_cycle_->field[i] - first_half_cycle_->field[i]) /
                             (last_cycle_->time - first_half_cycle_->time);
      } else {
        sum.growth_rate[i] = (last - prev) / quarter;
      }
      if (sum.point_diverging[i]) sum.diverging = true;
    }
  }

  static bool Grows(double before, double after) {
    return after > 1.01 * before + 1e-12 * (1.0 + before);
  }

  static constexpr std::size_t kWindows = 4;

  const CoverageModel& model_;
  const SimConfig& config_;
  std::mt19937_64 rng_;
  std::vector<Robot> robots_;
  std::vector<double> z_;
  std::vector<double> rate_;
  double t_ = 0.0;
  double half_ = 0.0;
  double three_quarter_ = 0.0;
  std::array<double, kWindows + 1> window_edge_{};
  std::vector<std::array<double, kWindows>> window_max_;
  std::vector<char> final_zero_;  // field reached zero in the final quarter
  bool cycle_pending_ = false;
  std::optional<CycleSample> first_half_cycle_;
  std::optional<CycleSample> last_cycle_;
  SimTrace trace_;
};

void CheckInputs(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
                 const SimConfig& config) {
  if (profiles.size() != model.robot_count()) {
    throw std::invalid_argument("Simulate: one profile per robot required");
  }
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    if (profiles[r].cells() != model.robots[r].cells) {
      throw std::invalid_argument("Simulate: profile cell count does not match the task");
    }
  }
  if (!(config.horizon > 0.0)) throw std::invalid_argument("Simulate: horizon must be > 0");
  if (config.mode == SimMode::kFixedStep && config.dt < 0.0) {
    throw std::invalid_argument("Simulate: dt must be > 0");
  }
  if (config.noise < 0.0 || config.epsilon < 0.0 || config.eta < 0.0) {
    throw std::invalid_argument("Simulate: noise, epsilon and eta must be >= 0");
  }
  if (config.eta >= 1.0) throw std::invalid_argument("Simulate: eta must be < 1");
  if (config.noise > 0.0 && config.mode != SimMode::kFixedStep) {
    throw std::invalid_argument("Simulate: noise requires fixed-step mode");
  }
  if (!config.initial_field.empty() && config.initial_field.size() != model.point_count()) {
    throw std::invalid_argument("Simulate: initial field size does not match the point count");
  }
  for (double z : config.initial_field) {
    if (!(z >= 0.0)) throw std::invalid_argument("Simulate: initial field must be >= 0");
  }
  if (!config.initial_theta.empty() && config.initial_theta.size() != model.robot_count()) {
    throw std::invalid_argument("Simulate: initial theta size does not match the robot count");
  }
}

}  // namespace

SimTrace Simulate(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
                  const SimConfig& config) {
  CheckInputs(model, profiles, config);
  SimConfig effective = config;
  if (effective.mode == SimMode::kFixedStep && effective.dt == 0.0) {
    effective.dt = DefaultTimeStep(profiles);
  }
  return Engine(model, profiles, effective).Run();
}

std::uint64_t TrialSeed(std::uint64_t base, std::size_t level, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(level), static_cast<std::uint32_t>(trial)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<SweepStats> Sweep(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
                              const SimConfig& base, const SweepOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("Sweep: trials must be >= 1");
  const std::size_t levels = options.values.size();
  const std::size_t jobs = levels * options.trials;
  std::vector<double> peak(jobs, 0.0);
  std::vector<char> diverged(jobs, 0);

  SimConfig proto = base;
  proto.record = false;
  if (options.parameter == SweepParameter::kNoise) {
    proto.mode = SimMode::kFixedStep;
    if (proto.dt == 0.0) proto.dt = DefaultTimeStep(profiles);
  }
  CheckInputs(model, profiles, proto);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t level = job / options.trials;
      const std::size_t trial = job % options.trials;
      SimConfig cfg = proto;
      const double v = options.values[level];
      switch (options.parameter) {
        case SweepParameter::kNoise: cfg.noise = v; break;
        case SweepParameter::kEpsilon: cfg.epsilon = v; break;
        case SweepParameter::kEta: cfg.eta = v; break;
      }
      cfg.seed = TrialSeed(options.seed, level, trial);
      const SimTrace trace = Simulate(model, profiles, cfg);
      peak[job] = trace.summary.max_field;
      diverged[job] = trace.summary.diverging ? 1 : 0;
    }
  };
  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max<std::size_t>(1, std::min(threads, jobs));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<SweepStats> out;
  for (std::size_t level = 0; level < levels; ++level) {
    SweepStats s;
    s.value = options.values[level];
    s.trials = options.trials;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      const double v = peak[level * options.trials + trial];
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
      s.diverging += static_cast<std::size_t>(diverged[level * options.trials + trial]);
    }
    // Offsets from the minimum keep the mean exact when every trial agrees.
    double offset = 0.0;
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      offset += peak[level * options.trials + trial] - s.min;
    }
    s.mean = std::min(s.max, s.min + offset / static_cast<double>(options.trials));
    double var = 0.0;
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      const double d = peak[level * options.trials + trial] - s.mean;
      var += d * d;
    }
    s.stddev = options.trials > 1 ? std::sqrt(var / static_cast<double>(options.trials)) : 0.0;
    out.push_back(s);
  }
  return out;
}

std::vector<SweepStats> NoiseSweep(const CoverageModel& model,
                                   std::span<const ReciprocalProfile> profiles,
                                   const SimConfig& base, std::vector<double> levels,
                                   std::size_t trials, std::uint64_t seed) {
  SweepOptions options;
  options.parameter = SweepParameter::kNoise;
  options.values = std::move(levels);
  options.trials = trials;
  options.seed = seed;
  return Sweep(model, profiles, base, options);
}

double AnalyticEpsilonThreshold(const CoverageModel& model,
                                std::span<const ReciprocalProfile> profiles) {
  return MinMargin(MultiRobotMargins(profiles, model));
}

EpsilonScan EpsilonThreshold(const CoverageModel& model, std::span<const ReciprocalProfile> profiles,
                             const SimConfig& base, std::vector<double> grid) {
  std::sort(grid.begin(), grid.end());
  EpsilonScan scan;
  scan.analytic_threshold = AnalyticEpsilonThreshold(model, profiles);
  bool stable_so_far = true;
  for (double eps : grid) {
    SimConfig cfg = base;
    cfg.epsilon = eps;
    cfg.record = false;
    const bool div = Simulate(model, profiles, cfg).summary.diverging;
    scan.epsilons.push_back(eps);
    scan.diverging.push_back(div);
    if (div) stable_so_far = false;
    if (stable_so_far) scan.largest_stable = eps;
  }
  return scan;
}

}  // namespace persweep
