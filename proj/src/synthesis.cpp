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

#include "persweep/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace persweep {

const char* ToString(LpKind kind) {
  switch (kind) {
    case LpKind::kFeasibility: return "feasible";
    case LpKind::kMargin: return "margin";
    case LpKind::kMinMax: return "minmax";
    case LpKind::kMulti: return "multi";
    case LpKind::kMultiMargin: return "multi-margin";
  }
  return "unknown";
}

std::optional<LpKind> ParseLpKind(const std::string& name) {
  for (LpKind k : {LpKind::kFeasibility, LpKind::kMargin, LpKind::kMinMax, LpKind::kMulti,
                   LpKind::kMultiMargin}) {
    if (name == ToString(k)) return k;
  }
  return std::nullopt;
}

const char* ToString(SynthesisStatus status) {
  switch (status) {
    case SynthesisStatus::kFeasible: return "feasible";
    case SynthesisStatus::kInfeasible: return "infeasible";
    case SynthesisStatus::kUnbounded: return "unbounded";
    case SynthesisStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

// Integral of beta_j over the forward arc from `from` to `to`.
double ArcBasisIntegral(const Basis& basis, std::size_t j, double from, double to) {
  if (to >= from) return basis.Integral(j, from, to);
  return basis.Integral(j, from, 1.0) + basis.Integral(j, 0.0, to);
}

double Delta(const CoverageModel& model, const SynthesisOptions& options) {
  if (options.delta >= 0.0) return options.delta;
  double pmax = 0.0;
  for (double p : model.production) pmax = std::max(pmax, p);
  return 1e-6 * pmax;
}

const RobotCoverage& SingleRobot(const CoverageModel& model) {
  if (model.robot_count() != 1) {
    throw std::invalid_argument("single-robot program requires exactly one robot");
  }
  return model.robots.front();
}

std::string AlphaName(std::size_t r, std::size_t j) {
  return "a_" + std::to_string(r) + "_" + std::to_string(j);
}

std::vector<std::size_t> AddAlphaColumns(LinearProgram& lp, const RobotCoverage& rc) {
  std::vector<std::size_t> cols(rc.cells);
  for (std::size_t j = 0; j < rc.cells; ++j) {
    cols[j] = lp.AddVariable(AlphaName(0, j), rc.inv_speed_min[j], rc.inv_speed_max[j]);
  }
  return cols;
}

// Rows sum_j alpha_j K(q_i, beta_j) - B >= rhs; B omitted when absent.
void AddStabilityRows(SynthesisLp& out, const RobotCoverage& rc,
                      const std::vector<double>& production, double rhs) {
  const Basis basis{rc.cells, false};
  for (std::size_t i = 0; i < production.size(); ++i) {
    std::vector<Term> terms;
    terms.reserve(rc.cells + 1);
    for (std::size_t j = 0; j < rc.cells; ++j) {
      const double k = ComputeK(rc.coverage[i], basis, j, production[i], rc.consumption[i]);
      if (k != 0.0) terms.push_back({out.alpha[0][j], k});
    }
    if (out.bound) terms.push_back({*out.bound, -1.0});
    out.point_rows.push_back(out.lp.AddRow("stab_" + std::to_string(i), std::move(terms),
                                           RowSense::kGreaterEqual, rhs));
  }
}

}  // namespace

double ComputeK(const CoverageSet& coverage, const Basis& basis, std::size_t j, double production,
                double consumption) {
  const double whole = basis.Integral(j, 0.0, 1.0);
  return basis.Integral(j, coverage) - (production / consumption) * whole;
}

double ComputeKr(const CoverageSet& coverage, const Basis& basis, std::size_t j,
                 double consumption) {
  return consumption * basis.Integral(j, coverage);
}

double ComputeX(const Decomposition& dec, std::size_t k, std::size_t b, const Basis& basis,
                std::size_t j, double production, double consumption) {
  const std::size_t l = dec.size();
  if (dec.full_circle || l == 0) throw std::out_of_range("ComputeX: no gaps in coverage");
  if (k >= l || b >= l) throw std::out_of_range("ComputeX: index outside 0..l-1");
  const auto idx = [&](std::ptrdiff_t i) { return dec.Wrap(i); };
  const auto sk = static_cast<std::ptrdiff_t>(k);
  const auto sb = static_cast<std::ptrdiff_t>(b);
  double value = production * ArcBasisIntegral(basis, j, dec.y[idx(sk - sb)], dec.x[idx(sk + 1)]);
  for (std::ptrdiff_t w = 0; w < sb; ++w) {
    const std::size_t m = idx(sk - w);
    value -= consumption * ArcBasisIntegral(basis, j, dec.x[m], dec.y[m]);
  }
  return value;
}

std::vector<double> XCoefficients(const Decomposition& dec, std::size_t k, std::size_t b,
                                  const Basis& basis, double production, double consumption) {
  std::vector<double> out(basis.cells);
  for (std::size_t j = 0; j < basis.cells; ++j) {
    out[j] = ComputeX(dec, k, b, basis, j, production, consumption);
  }
  return out;
}

SynthesisLp BuildFeasibilityLp(const CoverageModel& model, const SynthesisOptions& options) {
  const RobotCoverage& rc = SingleRobot(model);
  SynthesisLp out;
  out.kind = LpKind::kFeasibility;
  out.alpha.push_back(AddAlphaColumns(out.lp, rc));
  AddStabilityRows(out, rc, model.production, Delta(model, options));
  return out;
}

SynthesisLp BuildMarginLp(const CoverageModel& model, const SynthesisOptions&) {
  const RobotCoverage& rc = SingleRobot(model);
  SynthesisLp out;
  out.kind = LpKind::kMargin;
  out.lp = LinearProgram(ObjectiveSense::kMaximize);
  out.alpha.push_back(AddAlphaColumns(out.lp, rc));
  out.bound = out.lp.AddVariable("B", -kInf, kInf, 1.0);
  AddStabilityRows(out, rc, model.production, 0.0);
  return out;
}

SynthesisLp BuildMinMaxLp(const CoverageModel& model, const SynthesisOptions& options) {
  const RobotCoverage& rc = SingleRobot(model);
  SynthesisLp out;
  out.kind = LpKind::kMinMax;
  out.lp = LinearProgram(ObjectiveSense::kMinimize);
  out.alpha.push_back(AddAlphaColumns(out.lp, rc));
  const std::size_t bound = out.lp.AddVariable("B", 0.0, kInf, 1.0);

  AddStabilityRows(out, rc, model.production, Delta(model, options));
  out.bound = bound;

  const Basis basis{rc.cells, false};
  for (std::size_t i = 0; i < model.point_count(); ++i) {
    const CoverageSet& cov = rc.coverage[i];
    if (cov.empty() || cov.full()) continue;
    const Decomposition dec = Decompose(cov);
    for (std::size_t k = 0; k < dec.size(); ++k) {
      for (std::size_t b = 0; b < dec.size(); ++b) {
        const auto x = XCoefficients(dec, k, b, basis, model.production[i], rc.consumption[i]);
        std::vector<Term> terms;
        terms.reserve(x.size() + 1);
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (x[j] != 0.0) terms.push_back({out.alpha[0][j], x[j]});
        }
        terms.push_back({bound, -1.0});
        out.lp.AddRow("ss_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(b),
                      std::move(terms), RowSense::kLessEqual, 0.0);
        ++out.minmax_rows;
      }
    }
  }
  return out;
}

SynthesisLp BuildMultiLp(const CoverageModel& model, bool maximize_margin,
                         const SynthesisOptions& options) {
  if (model.robot_count() == 0) throw std::invalid_argument("BuildMultiLp: no robots");
  SynthesisLp out;
  out.kind = maximize_margin ? LpKind::kMultiMargin : LpKind::kMulti;
  out.lp = LinearProgram(maximize_margin ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize);

  for (std::size_t r = 0; r < model.robot_count(); ++r) {
    const RobotCoverage& rc = model.robots[r];
    std::vector<std::size_t> cols(rc.cells);
    for (std::size_t j = 0; j < rc.cells; ++j) cols[j] = out.lp.AddVariable(AlphaName(r, j), 0.0, kInf);
    out.alpha.push_back(std::move(cols));
    out.frequency.push_back(out.lp.AddVariable("f_" + std::to_string(r), options.delta_f, kInf));
  }
  if (maximize_margin) out.bound = out.lp.AddVariable("B", -kInf, kInf, 1.0);

  const double delta = maximize_margin ? 0.0 : Delta(model, options);
  out.production = model.production;
  for (std::size_t i = 0; i < model.point_count(); ++i) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < model.robot_count(); ++r) {
      const RobotCoverage& rc = model.robots[r];
      const Basis basis{rc.cells, true};
      for (std::size_t j = 0; j < rc.cells; ++j) {
        const double k = ComputeKr(rc.coverage[i], basis, j, rc.consumption[i]);
        if (k != 0.0) terms.push_back({out.alpha[r][j], k});
      }
    }
    if (out.bound) terms.push_back({*out.bound, -1.0});
    out.point_rows.push_back(out.lp.AddRow("stab_" + std::to_string(i), std::move(terms),
                                           RowSense::kGreaterEqual, model.production[i] + delta));
  }

  for (std::size_t r = 0; r < model.robot_count(); ++r) {
    const RobotCoverage& rc = model.robots[r];
    const auto n = static_cast<double>(rc.cells);
    const std::string tag = std::to_string(r);
    std::vector<Term> sum;
    for (std::size_t j = 0; j < rc.cells; ++j) sum.push_back({out.alpha[r][j], 1.0});
    out.lp.AddRow("norm_" + tag, std::move(sum), RowSense::kEqual, 1.0);
    // Reciprocal speed on cell j is n alpha_rj / f_r.
    for (std::size_t j = 0; j < rc.cells; ++j) {
      const std::string cell = tag + "_" + std::to_string(j);
      out.lp.AddRow("vmax_" + cell, {{out.alpha[r][j], n}, {out.frequency[r], -rc.inv_speed_min[j]}},
                    RowSense::kGreaterEqual, 0.0);
      out.lp.AddRow("vmin_" + cell, {{out.alpha[r][j], n}, {out.frequency[r], -rc.inv_speed_max[j]}},
                    RowSense::kLessEqual, 0.0);
    }
  }
  return out;
}

SynthesisResult Solve(const SynthesisLp& program, const LpSolver& solver) {
  SynthesisResult result;
  result.kind = program.kind;
  const LpSolution sol = solver.Solve(program.lp);
  result.iterations = sol.iterations;
  result.message = sol.message;
  switch (sol.status) {
    case LpStatus::kOptimal: result.status = SynthesisStatus::kFeasible; break;
    case LpStatus::kInfeasible: result.status = SynthesisStatus::kInfeasible; return result;
    case LpStatus::kUnbounded: result.status = SynthesisStatus::kUnbounded; return result;
    case LpStatus::kNumericalFailure: result.status = SynthesisStatus::kNumericalFailure; return result;
  }

  const bool multi = program.kind == LpKind::kMulti || program.kind == LpKind::kMultiMargin;
  for (std::size_t r = 0; r < program.alpha.size(); ++r) {
    std::vector<double> alpha;
    alpha.reserve(program.alpha[r].size());
    for (std::size_t col : program.alpha[r]) alpha.push_back(sol.x[col]);
    result.profiles.push_back(multi ? ReciprocalProfile::Normalized(std::move(alpha),
                                                                    sol.x[program.frequency[r]])
                                    : ReciprocalProfile::Rectangular(std::move(alpha)));
  }
  if (program.bound) result.objective = sol.x[*program.bound];

  for (std::size_t i = 0; i < program.point_rows.size(); ++i) {
    const LpRow& row = program.lp.rows()[program.point_rows[i]];
    double value = 0.0;
    for (const Term& t : row.terms) {
      if (program.bound && t.var == *program.bound) continue;
      value += t.coeff * sol.x[t.var];
    }
    if (multi) value -= program.production[i];
    result.point_slack.push_back(value);
  }
  return result;
}

SynthesisResult Solve(const SynthesisLp& program) { return Solve(program, DenseSimplexSolver{}); }

SynthesisResult Synthesize(const CoverageModel& model, LpKind kind, const SynthesisOptions& options) {
  switch (kind) {
    case LpKind::kFeasibility: return Solve(BuildFeasibilityLp(model, options));
    case LpKind::kMargin: return Solve(BuildMarginLp(model, options));
    case LpKind::kMinMax: {
      SynthesisResult feasible = Solve(BuildFeasibilityLp(model, options));
      if (!feasible.feasible()) {
        feasible.kind = LpKind::kMinMax;
        return feasible;
      }
      return Solve(BuildMinMaxLp(model, options));
    }
    case LpKind::kMulti: return Solve(BuildMultiLp(model, false, options));
    case LpKind::kMultiMargin: return Solve(BuildMultiLp(model, true, options));
  }
  throw std::invalid_argument("Synthesize: unknown program kind");
}

std::vector<double> RobustnessBound(const SynthesisResult& result, const CoverageModel& model) {
  if (!result.feasible() || !result.objective) {
    throw std::invalid_argument("RobustnessBound: result carries no margin");
  }
  const double margin = *result.objective;
  if (margin < 0.0) throw std::invalid_argument("RobustnessBound: negative margin");
  std::vector<double> eps(model.point_count(), margin);
  if (result.kind == LpKind::kMargin) {
    const double period = result.profiles.front().CycleTime();
    const RobotCoverage& rc = model.robots.front();
    for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = margin * rc.consumption[i] / period;
  } else if (result.kind != LpKind::kMultiMargin) {
    throw std::invalid_argument("RobustnessBound: not a margin program");
  }
  return eps;
}

double RobustnessBoundScalar(const SynthesisResult& result, const CoverageModel& model) {
  const auto eps = RobustnessBound(result, model);
  return eps.empty() ? 0.0 : *std::min_element(eps.begin(), eps.end());
}

}  // namespace persweep
