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

#include "persweep/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace persweep {

std::size_t LinearProgram::AddVariable(std::string name, double lower, double upper, double cost) {
  variables_.push_back({std::move(name), lower, upper, cost});
  return variables_.size() - 1;
}

std::size_t LinearProgram::AddRow(std::string name, std::vector<Term> terms, RowSense sense,
                                  double rhs) {
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return rows_.size() - 1;
}

std::optional<std::size_t> LinearProgram::FindVariable(const std::string& name) const {
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].name == name) return j;
  }
  return std::nullopt;
}

double LinearProgram::Objective(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) total += variables_[j].cost * x[j];
  return total;
}

double LinearProgram::RowActivity(std::size_t row, std::span<const double> x) const {
  double total = 0.0;
  for (const Term& t : rows_[row].terms) total += t.coeff * x[t.var];
  return total;
}

double LinearProgram::MaxViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const auto& v = variables_[j];
    if (std::isfinite(v.lower)) worst = std::max(worst, (v.lower - x[j]) / (1.0 + std::abs(v.lower)));
    if (std::isfinite(v.upper)) worst = std::max(worst, (x[j] - v.upper) / (1.0 + std::abs(v.upper)));
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const LpRow& row = rows_[i];
    double activity = 0.0, magnitude = std::abs(row.rhs);
    for (const Term& t : row.terms) {
      activity += t.coeff * x[t.var];
      magnitude += std::abs(t.coeff * x[t.var]);
    }
    const double scale = 1.0 + magnitude;
    double excess = 0.0;
    switch (row.sense) {
      case RowSense::kLessEqual: excess = activity - row.rhs; break;
      case RowSense::kGreaterEqual: excess = row.rhs - activity; break;
      case RowSense::kEqual: excess = std::abs(activity - row.rhs); break;
    }
    worst = std::max(worst, excess / scale);
  }
  return worst;
}

std::vector<std::string> LinearProgram::Check() const {
  std::vector<std::string> problems;
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      problems.push_back("variable " + v.name + ": lower bound exceeds upper bound");
    }
    if (!std::isfinite(v.cost)) problems.push_back("variable " + v.name + ": non-finite cost");
  }
  for (const auto& row : rows_) {
    if (!std::isfinite(row.rhs)) problems.push_back("row " + row.name + ": non-finite rhs");
    for (const Term& t : row.terms) {
      if (t.var >= variables_.size()) problems.push_back("row " + row.name + ": unknown variable");
      else if (!std::isfinite(t.coeff)) problems.push_back("row " + row.name + ": non-finite coefficient");
    }
  }
  return problems;
}

namespace {

void WriteTerms(std::ostream& os, const std::vector<Term>& terms,
                const std::vector<LpVariable>& vars) {
  bool first = true;
  for (const Term& t : terms) {
    if (t.coeff == 0.0) continue;
    os << (t.coeff < 0.0 ? " - " : (first ? " " : " + ")) << std::abs(t.coeff) << ' '
       << vars[t.var].name;
    first = false;
  }
  if (first) os << " 0 " << vars.front().name;
}

}  // namespace

void LinearProgram::WriteLpFormat(std::ostream& os) const {
  const auto precision = os.precision(17);
  os << (sense_ == ObjectiveSense::kMinimize ? "Minimize\n" : "Maximize\n") << " obj:";
  std::vector<Term> objective;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].cost != 0.0) objective.push_back({j, variables_[j].cost});
  }
  if (objective.empty() && !variables_.empty()) objective.push_back({0, 0.0});
  WriteTerms(os, objective, variables_);
  os << "\nSubject To\n";
  for (const auto& row : rows_) {
    os << ' ' << row.name << ':';
    WriteTerms(os, row.terms, variables_);
    switch (row.sense) {
      case RowSense::kLessEqual: os << " <= "; break;
      case RowSense::kGreaterEqual: os << " >= "; break;
      case RowSense::kEqual: os << " = "; break;
    }
    os << row.rhs << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : variables_) {
    const bool lo = std::isfinite(v.lower), hi = std::isfinite(v.upper);
    if (!lo && !hi) {
      os << ' ' << v.name << " free\n";
    } else if (lo && hi) {
      os << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
    } else if (lo) {
      os << ' ' << v.name << " >= " << v.lower << '\n';
    } else {
      os << " -inf <= " << v.name << " <= " << v.upper << '\n';
    }
  }
  os << "End\n";
  os.precision(precision);
}

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

}  // namespace persweep
