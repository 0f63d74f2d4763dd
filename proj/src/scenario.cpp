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

#include "persweep/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace persweep {

using nlohmann::json;

namespace {

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) Fail(where, std::string("missing \"") + key + "\"");
  return obj.at(key);
}

double Number(const json& v, const std::string& where) {
  if (!v.is_number()) Fail(where, "expected a number");
  return v.get<double>();
}

std::size_t Count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) Fail(where, "expected a non-negative integer");
  return v.get<std::size_t>();
}

Vec2 Point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) Fail(where, "expected [x, y]");
  return {Number(v[0], where), Number(v[1], where)};
}

std::vector<Vec2> Points(const json& v, const std::string& where) {
  if (!v.is_array()) Fail(where, "expected an array of [x, y]");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Point(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> Numbers(const json& v, const std::string& where) {
  if (!v.is_array()) Fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(Number(x, where));
  return out;
}

// Scalar, per-cell array, or {"breakpoints": [...], "values": [...]}.
std::vector<double> SpeedTable(const json& v, std::size_t cells, bool lower, const std::string& where) {
  if (v.is_number()) return std::vector<double>(cells, v.get<double>());
  if (v.is_array()) {
    std::vector<double> out = Numbers(v, where);
    if (out.size() != cells) Fail(where, "expected one value per cell");
    return out;
  }
  if (v.is_object()) {
    StepTable table{Numbers(Require(v, "breakpoints", where), where + ".breakpoints"),
                    Numbers(Require(v, "values", where), where + ".values")};
    if (table.breakpoints.empty() || table.breakpoints.size() != table.values.size()) {
      Fail(where, "breakpoints and values must be non-empty and of equal length");
    }
    if (!std::is_sorted(table.breakpoints.begin(), table.breakpoints.end()) ||
        table.breakpoints.front() != 0.0) {
      Fail(where, "breakpoints must start at 0 and increase");
    }
    // v_min takes the largest value on a cell, v_max the smallest, so the
    // cell limits hold everywhere on the cell.
    return lower ? table.CellSup(cells) : table.CellInf(cells);
  }
  Fail(where, "expected a number, an array, or a breakpoint table");
}

Footprint ParseFootprint(const json& v, const std::string& where) {
  const std::string type = Require(v, "type", where).get<std::string>();
  if (type == "disk") return DiskFootprint{Number(Require(v, "radius", where), where + ".radius")};
  if (type == "polygon") return PolygonFootprint{Points(Require(v, "vertices", where), where + ".vertices")};
  Fail(where, "unknown footprint type \"" + type + "\"");
}

CoverageSet ParseCoverage(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "full") return CoverageSet::Full();
    Fail(where, "expected \"full\" or a list of [start, end]");
  }
  if (!v.is_array()) Fail(where, "expected \"full\" or a list of [start, end]");
  std::vector<ArcInterval> arcs;
  for (const auto& iv : v) {
    const auto ends = Numbers(iv, where);
    if (ends.size() != 2) Fail(where, "expected [start, end]");
    if (ends[0] < 0.0 || ends[0] >= 1.0 || ends[1] < 0.0 || ends[1] > 1.0) {
      Fail(where, "interval endpoints must lie in [0, 1]");
    }
    if (ends[0] == 0.0 && ends[1] == 1.0) return CoverageSet::Full();
    arcs.push_back({ends[0], ends[1]});
  }
  return CoverageSet(std::move(arcs));
}

void ExpandGrid(const json& grid, std::vector<InterestPoint>& points) {
  const std::string where = "grid";
  const std::size_t nx = Count(Require(grid, "nx", where), "grid.nx");
  const std::size_t ny = Count(Require(grid, "ny", where), "grid.ny");
  const auto bounds = Numbers(Require(grid, "bounds", where), "grid.bounds");
  if (nx == 0 || ny == 0) Fail(where, "nx and ny must be >= 1");
  if (bounds.size() != 4 || bounds[2] <= bounds[0] || bounds[3] <= bounds[1]) {
    Fail(where, "bounds must be [xmin, ymin, xmax, ymax] with xmin < xmax and ymin < ymax");
  }
  auto field = [&](const char* key) {
    const json& v = Require(grid, key, where);
    if (v.is_number()) return std::vector<double>(nx * ny, v.get<double>());
    auto out = Numbers(v, std::string("grid.") + key);
    if (out.size() != nx * ny) Fail(std::string("grid.") + key, "expected nx * ny values");
    return out;
  };
  const auto p = field("production");
  const auto c = field("consumption");
  const double dx = (bounds[2] - bounds[0]) / static_cast<double>(nx);
  const double dy = (bounds[3] - bounds[1]) / static_cast<double>(ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = iy * nx + ix;
      points.push_back({{bounds[0] + (static_cast<double>(ix) + 0.5) * dx,
                         bounds[1] + (static_cast<double>(iy) + 0.5) * dy},
                        p[k],
                        c[k]});
    }
  }
}

void CheckExplicit(const CoverageModel& model) {
  for (std::size_t i = 0; i < model.point_count(); ++i) {
    if (!(model.production[i] > 0.0)) Fail("points[" + std::to_string(i) + "].production", "p > 0");
  }
  for (std::size_t r = 0; r < model.robot_count(); ++r) {
    const RobotCoverage& rc = model.robots[r];
    const std::string where = "robots[" + std::to_string(r) + "]";
    for (std::size_t j = 0; j < rc.cells; ++j) {
      if (!(rc.inv_speed_min[j] > 0.0) || !(rc.inv_speed_min[j] <= rc.inv_speed_max[j]) ||
          !std::isfinite(rc.inv_speed_max[j])) {
        Fail(where, "0 < v_min <= v_max on every cell");
      }
    }
    for (std::size_t i = 0; i < model.point_count(); ++i) {
      const double c = rc.consumption[i];
      if (model.robot_count() == 1 ? !(c > model.production[i]) : !(c > 0.0)) {
        Fail(where + ".consumption[" + std::to_string(i) + "]",
             model.robot_count() == 1 ? "c > p > 0" : "c_r > 0");
      }
    }
  }
}

// Shortest text that reads back to the same double.
std::string Num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::size_t Scenario::robot_count() const {
  return explicit_model ? explicit_model->robot_count() : task.robot_count();
}

std::size_t Scenario::point_count() const {
  return explicit_model ? explicit_model->point_count() : task.point_count();
}

Scenario ParseScenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) Fail("scenario", "expected a JSON object");

  Scenario sc;
  try {
    sc.name = doc.value("name", "");
    if (doc.contains("coverage_samples")) sc.coverage_samples = Count(doc["coverage_samples"], "coverage_samples");
    if (doc.contains("lp")) {
      const json& lp = doc["lp"];
      if (lp.contains("delta")) sc.lp.delta = Number(lp["delta"], "lp.delta");
      if (lp.contains("delta_f")) sc.lp.delta_f = Number(lp["delta_f"], "lp.delta_f");
    }

    std::vector<InterestPoint> points;
    if (doc.contains("points")) {
      const json& pts = doc["points"];
      if (!pts.is_array()) Fail("points", "expected an array");
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string where = "points[" + std::to_string(i) + "]";
        InterestPoint q;
        if (pts[i].contains("position")) q.position = Point(pts[i]["position"], where + ".position");
        q.production = Number(Require(pts[i], "production", where), where + ".production");
        if (pts[i].contains("consumption")) {
          q.consumption = Number(pts[i]["consumption"], where + ".consumption");
        }
        points.push_back(q);
      }
    }
    if (doc.contains("grid")) ExpandGrid(doc["grid"], points);

    const json& robots = Require(doc, "robots", "scenario");
    if (!robots.is_array() || robots.empty()) Fail("robots", "expected a non-empty array");
    const bool explicit_cov = robots[0].contains("coverage");
    const std::size_t default_cells = doc.contains("cells") ? Count(doc["cells"], "cells") : 0;

    CoverageModel model;
    for (const InterestPoint& q : points) model.production.push_back(q.production);
    for (std::size_t r = 0; r < robots.size(); ++r) {
      const json& rj = robots[r];
      const std::string where = "robots[" + std::to_string(r) + "]";
      if (rj.contains("coverage") != explicit_cov) {
        Fail(where, "either every robot gives \"coverage\" or none does");
      }
      const std::size_t cells = rj.contains("cells") ? Count(rj["cells"], where + ".cells") : default_cells;
      if (cells == 0) Fail(where, "cells must be >= 1");

      RobotModel robot;
      robot.v_min = SpeedTable(Require(rj, "v_min", where), cells, true, where + ".v_min");
      robot.v_max = SpeedTable(Require(rj, "v_max", where), cells, false, where + ".v_max");
      if (rj.contains("consumption")) {
        const json& c = rj["consumption"];
        robot.consumption = c.is_number() ? std::vector<double>(points.size(), c.get<double>())
                                          : Numbers(c, where + ".consumption");
      }
      for (std::size_t i = 0; i < points.size() && robot.consumption.empty(); ++i) {
        if (!(points[i].consumption > 0.0)) {
          Fail("points[" + std::to_string(i) + "].consumption",
               "required when a robot gives no consumption");
        }
      }

      if (explicit_cov) {
        const double length = Number(Require(rj, "path_length", where), where + ".path_length");
        if (!(length > 0.0)) Fail(where + ".path_length", "must be > 0");
        const json& cov = rj["coverage"];
        if (!cov.is_array() || cov.size() != points.size()) {
          Fail(where + ".coverage", "expected one entry per point");
        }
        if (!robot.consumption.empty() && robot.consumption.size() != points.size()) {
          Fail(where + ".consumption", "expected one value per point");
        }
        RobotCoverage rc;
        rc.cells = cells;
        for (std::size_t j = 0; j < cells; ++j) {
          rc.inv_speed_min.push_back(length / robot.v_max[j]);
          rc.inv_speed_max.push_back(length / robot.v_min[j]);
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
          rc.consumption.push_back(robot.consumption.empty() ? points[i].consumption
                                                             : robot.consumption[i]);
          rc.coverage.push_back(
              ParseCoverage(cov[i], where + ".coverage[" + std::to_string(i) + "]"));
        }
        model.robots.push_back(std::move(rc));
      } else {
        robot.footprint = ParseFootprint(Require(rj, "footprint", where), where + ".footprint");
        sc.task.paths.emplace_back(Points(Require(rj, "path", where), where + ".path"));
        sc.task.cells.push_back(cells);
      }
      sc.task.robots.push_back(std::move(robot));
    }
    sc.task.points = std::move(points);

    if (explicit_cov) {
      if (model.point_count() == 0) Fail("points", "at least one point required");
      CheckExplicit(model);
      sc.explicit_model = std::move(model);
    } else {
      const auto violations = Validate(sc.task);
      if (!violations.empty()) {
        std::string msg = "invalid task:";
        for (const auto& v : violations) msg += "\n  " + v.ToString();
        throw ScenarioError(msg);
      }
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  return sc;
}

Scenario LoadScenario(const std::string& path) { return ParseScenario(ReadFile(path)); }

CoverageModel BuildModel(const Scenario& scenario, std::vector<std::string>* warnings) {
  if (scenario.explicit_model) return *scenario.explicit_model;
  return BuildCoverageModel(scenario.task, scenario.coverage_samples, warnings);
}

ControllerFile MakeControllerFile(const SynthesisResult& result, const CoverageModel& model) {
  ControllerFile file;
  file.objective = ToString(result.kind);
  file.status = ToString(result.status);
  file.profiles = result.profiles;
  file.bound = result.objective;
  file.point_slack = result.point_slack;
  if (result.feasible() && result.objective && *result.objective >= 0.0 &&
      (result.kind == LpKind::kMargin || result.kind == LpKind::kMultiMargin)) {
    file.robustness_bound = RobustnessBoundScalar(result, model);
  }
  return file;
}

std::string WriteControllerJson(const ControllerFile& file) {
  json doc;
  doc["objective"] = file.objective;
  doc["status"] = file.status;
  doc["robots"] = json::array();
  for (const auto& p : file.profiles) {
    json r;
    r["n"] = p.cells();
    r["normalized"] = p.normalized();
    r["alpha"] = p.alpha();
    r["frequency"] = p.frequency() ? json(*p.frequency()) : json(nullptr);
    r["period_s"] = p.CycleTime();
    r["inv_speed"] = p.CellValues();
    doc["robots"].push_back(std::move(r));
  }
  doc["bound"] = file.bound ? json(*file.bound) : json(nullptr);
  doc["robustness_bound"] = file.robustness_bound ? json(*file.robustness_bound) : json(nullptr);
  doc["point_slack"] = file.point_slack;
  return doc.dump(2) + "\n";
}

ControllerFile ParseController(const std::string& text) {
  ControllerFile file;
  try {
    const json doc = json::parse(text);
    file.objective = doc.value("objective", "");
    file.status = doc.value("status", "");
    const json& robots = Require(doc, "robots", "controller");
    if (!robots.is_array() || robots.empty()) Fail("controller.robots", "expected a non-empty array");
    for (std::size_t r = 0; r < robots.size(); ++r) {
      const std::string where = "controller.robots[" + std::to_string(r) + "]";
      auto alpha = Numbers(Require(robots[r], "alpha", where), where + ".alpha");
      if (robots[r].contains("n") && Count(robots[r]["n"], where + ".n") != alpha.size()) {
        Fail(where, "n does not match the number of coefficients");
      }
      if (robots[r].value("normalized", false)) {
        file.profiles.push_back(ReciprocalProfile::Normalized(
            std::move(alpha), Number(Require(robots[r], "frequency", where), where + ".frequency")));
      } else {
        file.profiles.push_back(ReciprocalProfile::Rectangular(std::move(alpha)));
      }
    }
    if (doc.contains("bound") && doc["bound"].is_number()) file.bound = doc["bound"].get<double>();
    if (doc.contains("robustness_bound") && doc["robustness_bound"].is_number()) {
      file.robustness_bound = doc["robustness_bound"].get<double>();
    }
    if (doc.contains("point_slack")) file.point_slack = Numbers(doc["point_slack"], "point_slack");
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("controller: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("controller: ") + e.what());
  }
  return file;
}

ControllerFile LoadController(const std::string& path) { return ParseController(ReadFile(path)); }

void WriteTraceCsv(std::ostream& os, const SimTrace& trace, bool max_only) {
  const std::size_t robots = trace.theta.empty() ? 0 : trace.theta.front().size();
  const std::size_t points = trace.field.empty() ? 0 : trace.field.front().size();
  os << "t";
  for (std::size_t r = 0; r < robots; ++r) os << ",theta_" << r;
  if (max_only) {
    os << ",z_max";
  } else {
    for (std::size_t i = 0; i < points; ++i) os << ",z_" << i;
  }
  os << '\n';
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    os << Num(trace.times[s]);
    for (double th : trace.theta[s]) os << ',' << Num(th);
    if (max_only) {
      double m = 0.0;
      for (double z : trace.field[s]) m = std::max(m, z);
      os << ',' << Num(m);
    } else {
      for (double z : trace.field[s]) os << ',' << Num(z);
    }
    os << '\n';
  }
}

void WriteSweepCsv(std::ostream& os, const std::string& parameter, std::span<const SweepStats> rows) {
  os << parameter << ",trials,mean,min,max,stddev,diverging\n";
  for (const SweepStats& s : rows) {
    os << Num(s.value) << ',' << s.trials << ',' << Num(s.mean) << ',' << Num(s.min) << ',' << Num(s.max)
       << ',' << Num(s.stddev) << ',' << s.diverging << '\n';
  }
}

void WriteCurveCsv(std::ostream& os, std::span<const std::size_t> points,
                   std::span<const SteadyStateCurve> curves, std::size_t resolution) {
  os << "theta";
  for (std::size_t i : points) os << ",z_" << i;
  os << '\n';
  for (std::size_t k = 0; k <= resolution; ++k) {
    const double theta = static_cast<double>(k) / static_cast<double>(resolution);
    os << Num(theta);
    for (const SteadyStateCurve& c : curves) os << ',' << Num(k == resolution ? c.ValueAt(0.0) : c.ValueAt(theta));
    os << '\n';
  }
}

std::string SummaryJson(const SimSummary& summary, std::span<const double> margins) {
  json doc;
  doc["max_field"] = summary.max_field;
  doc["previous_window_max"] = summary.previous_window_max;
  doc["final_window_max"] = summary.final_window_max;
  doc["converged_periodic"] = summary.converged_periodic();
  doc["cycles"] = summary.cycles;
  json diverging = json::array();
  for (std::size_t i = 0; i < summary.point_diverging.size(); ++i) {
    if (!summary.point_diverging[i]) continue;
    diverging.push_back({{"point", i}, {"growth_rate", summary.growth_rate[i]}});
  }
  doc["diverging_points"] = std::move(diverging);
  doc["margins"] = std::vector<double>(margins.begin(), margins.end());
  return doc.dump(2) + "\n";
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write " + path);
  out << contents;
  if (!out) throw ScenarioError("error writing " + path);
}

}  // namespace persweep
