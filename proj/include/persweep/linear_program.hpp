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

#ifndef PERSWEEP_LINEAR_PROGRAM_HPP_
#define PERSWEEP_LINEAR_PROGRAM_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace persweep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class ObjectiveSense { kMinimize, kMaximize };

struct Term {
  std::size_t var = 0;
  double coeff = 0.0;
};

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct LpRow {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

// Sparse-row linear program with bounded variables.
class LinearProgram {
 public:
  explicit LinearProgram(ObjectiveSense sense = ObjectiveSense::kMinimize) : sense_(sense) {}

  std::size_t AddVariable(std::string name, double lower, double upper, double cost = 0.0);
  std::size_t AddRow(std::string name, std::vector<Term> terms, RowSense sense, double rhs);

  ObjectiveSense sense() const { return sense_; }
  const std::vector<LpVariable>& variables() const { return variables_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  std::size_t variable_count() const { return variables_.size(); }
  std::size_t row_count() const { return rows_.size(); }
  std::optional<std::size_t> FindVariable(const std::string& name) const;

  double Objective(std::span<const double> x) const;
  double RowActivity(std::size_t row, std::span<const double> x) const;
  // Largest bound or row violation, each scaled by 1 + |rhs| (or |bound|).
  double MaxViolation(std::span<const double> x) const;

  // Dimension and bound problems; empty when well formed.
  std::vector<std::string> Check() const;

  // CPLEX LP text format.
  void WriteLpFormat(std::ostream& os) const;

 private:
  ObjectiveSense sense_;
  std::vector<LpVariable> variables_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* ToString(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::string message;
};

// Seam for swapping in another LP backend.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual LpSolution Solve(const LinearProgram& lp) const = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Relative tolerance of the post-solve constraint check.
  double verify_tol = 1e-8;
  std::size_t max_iterations = 0;  // 0 picks a size-dependent limit
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_switch = 50;
};

// Dense-tableau bounded-variable primal simplex, two phases. Dantzig pricing
// with a fall back to Bland's rule on degenerate stalls.
class DenseSimplexSolver final : public LpSolver {
 public:
  explicit DenseSimplexSolver(SimplexOptions options = {}) : options_(options) {}
  LpSolution Solve(const LinearProgram& lp) const override;

 private:
  SimplexOptions options_;
};

}  // namespace persweep

#endif  // PERSWEEP_LINEAR_PROGRAM_HPP_
