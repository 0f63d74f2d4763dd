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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "persweep/linear_program.hpp"

namespace persweep {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Columns [0, n) are structural, [n, n + slacks) are slacks. Artificial
// variables have no tableau column; an artificial basic in row i is encoded
// as basis[i] = kArtificialBase + i and is never allowed back in once it
// leaves.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options) : lp_(lp), opt_(options) {
    Setup();
  }

  LpSolution Run() {
    LpSolution out;
    if (has_artificials_) {
      SetPhaseOneCosts();
      const LpStatus status = Iterate(out.iterations);
      if (status != LpStatus::kOptimal) return Fail(out, status, "phase one did not converge");
      if (ArtificialInfeasibility() > opt_.feasibility_tol * rhs_scale_) {
        out.status = LpStatus::kInfeasible;
        out.message = "no point satisfies all constraints";
        return out;
      }
    }
    phase_two_ = true;
    SetPhaseTwoCosts();
    const LpStatus status = Iterate(out.iterations);
    if (status == LpStatus::kUnbounded) {
      out.status = status;
      out.message = "objective is unbounded";
      return out;
    }
    if (status != LpStatus::kOptimal) return Fail(out, status, "phase two did not converge");

    out.x = Primal();
    double violation = lp_.MaxViolation(out.x);
    if (violation > opt_.verify_tol) {
      RecomputeBasics();
      out.x = Primal();
      violation = lp_.MaxViolation(out.x);
    }
    if (violation > opt_.verify_tol) {
      return Fail(out, LpStatus::kNumericalFailure,
                  "constraint violation " + std::to_string(violation) + " after solve");
    }
    out.status = LpStatus::kOptimal;
    out.objective = lp_.Objective(out.x);
    return out;
  }

 private:
  LpSolution& Fail(LpSolution& out, LpStatus status, std::string message) {
    out.status = status == LpStatus::kOptimal ? LpStatus::kNumericalFailure : status;
    out.message = std::move(message);
    out.x.clear();
    return out;
  }

  double& At(std::size_t i, std::size_t j) { return tab_[i * cols_ + j]; }
  double At(std::size_t i, std::size_t j) const { return tab_[i * cols_ + j]; }

  bool IsArtificial(std::size_t var) const { return var >= kArtificialBase; }

  double Lower(std::size_t var) const {
    if (IsArtificial(var)) return 0.0;
    return lower_[var];
  }
  double Upper(std::size_t var) const {
    if (IsArtificial(var)) return phase_two_ ? 0.0 : kInf;
    return upper_[var];
  }

  void Setup() {
    const auto& vars = lp_.variables();
    const auto& rows = lp_.rows();
    n_ = vars.size();
    m_ = rows.size();
    std::size_t slacks = 0;
    for (const auto& row : rows) slacks += row.sense != RowSense::kEqual ? 1 : 0;
    cols_ = n_ + slacks;
    kArtificialBase = cols_;
    tab_.assign(m_ * cols_, 0.0);
    rhs_.assign(m_, 0.0);
    lower_.assign(cols_, 0.0);
    upper_.assign(cols_, kInf);
    cost_.assign(cols_, 0.0);
    value_.assign(cols_, 0.0);
    at_upper_.assign(cols_, 0);
    is_basic_.assign(cols_, 0);
    basis_.assign(m_, kNone);
    basic_value_.assign(m_, 0.0);
    row_sign_.assign(m_, 1.0);
    slack_of_row_.assign(m_, kNone);

    const double sign = lp_.sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = vars[j].lower;
      upper_[j] = vars[j].upper;
      cost_[j] = sign * vars[j].cost;
      if (std::isfinite(lower_[j])) {
        value_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        value_[j] = upper_[j];
        at_upper_[j] = 1;
      }
    }

    rhs_scale_ = 1.0;
    std::size_t slack = n_;
    for (std::size_t i = 0; i < m_; ++i) {
      const LpRow& row = rows[i];
      // Rows are stored as a.x + s = b with s >= 0 (>= rows are negated).
      const double flip = row.sense == RowSense::kGreaterEqual ? -1.0 : 1.0;
      for (const Term& t : row.terms) At(i, t.var) += flip * t.coeff;
      rhs_[i] = flip * row.rhs;
      if (row.sense != RowSense::kEqual) {
        slack_of_row_[i] = slack;
        At(i, slack) = 1.0;
        ++slack;
      }
      rhs_scale_ = std::max(rhs_scale_, std::abs(rhs_[i]));
    }

    for (std::size_t i = 0; i < m_; ++i) {
      double residual = rhs_[i];
      for (std::size_t j = 0; j < n_; ++j) {
        if (value_[j] != 0.0) residual -= At(i, j) * value_[j];
      }
      const std::size_t s = slack_of_row_[i];
      if (s != kNone && residual >= 0.0) {
        basis_[i] = s;
        is_basic_[s] = 1;
        basic_value_[i] = residual;
        continue;
      }
      // Artificial with coefficient +1 after scaling the row by its sign.
      has_artificials_ = true;
      const double sigma = residual >= 0.0 ? 1.0 : -1.0;
      row_sign_[i] = sigma;
      if (sigma < 0.0) {
        for (std::size_t j = 0; j < cols_; ++j) At(i, j) = -At(i, j);
      }
      basis_[i] = kArtificialBase + i;
      basic_value_[i] = std::abs(residual);
    }

    max_iterations_ = opt_.max_iterations != 0 ? opt_.max_iterations : 50 * (m_ + cols_) + 10000;
  }

  void SetPhaseOneCosts() {
    basic_cost_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) basic_cost_[i] = IsArtificial(basis_[i]) ? 1.0 : 0.0;
    std::vector<double> zero(cols_, 0.0);
    ComputeReducedCosts(zero);
  }

  void SetPhaseTwoCosts() {
    basic_cost_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      basic_cost_[i] = IsArtificial(basis_[i]) ? 0.0 : cost_[basis_[i]];
    }
    ComputeReducedCosts(cost_);
  }

  void ComputeReducedCosts(const std::vector<double>& costs) {
    reduced_ = costs;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = basic_cost_[i];
      if (cb == 0.0) continue;
      const double* row = &tab_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * row[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (!IsArtificial(basis_[i])) reduced_[basis_[i]] = 0.0;
    }
  }

  double ArtificialInfeasibility() const {
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (IsArtificial(basis_[i])) total += std::max(0.0, basic_value_[i]);
    }
    return total;
  }

  // +1 to increase, -1 to decrease, 0 when the column cannot improve.
  int Direction(std::size_t j) const {
    if (is_basic_[j]) return 0;
    const double lo = lower_[j], hi = upper_[j];
    if (lo == hi) return 0;
    const double d = reduced_[j];
    const bool free = !std::isfinite(lo) && !std::isfinite(hi);
    if (free) {
      if (d < -opt_.optimality_tol) return 1;
      if (d > opt_.optimality_tol) return -1;
      return 0;
    }
    if (!at_upper_[j]) return d < -opt_.optimality_tol ? 1 : 0;
    return d > opt_.optimality_tol ? -1 : 0;
  }

  LpStatus Iterate(std::size_t& iterations) {
    std::size_t degenerate_run = 0;
    bool bland = false;
    for (;;) {
      if (iterations >= max_iterations_) return LpStatus::kNumericalFailure;

      std::size_t entering = kNone;
      int dir = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        const int d = Direction(j);
        if (d == 0) continue;
        if (bland) {
          entering = j;
          dir = d;
          break;
        }
        const double score = std::abs(reduced_[j]);
        if (score > best) {
          best = score;
          entering = j;
          dir = d;
        }
      }
      if (entering == kNone) return LpStatus::kOptimal;
      ++iterations;

      // Ratio test over basic variables plus the entering bound flip.
      double step = kInf;
      std::size_t leave_row = kNone;
      bool leave_to_upper = false;
      if (std::isfinite(lower_[entering]) && std::isfinite(upper_[entering])) {
        step = upper_[entering] - lower_[entering];
      }
      double leave_pivot = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = At(i, entering);
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const double rate = -dir * a;  // d(basic_i)/d(step)
        const std::size_t var = basis_[i];
        double limit = kInf;
        bool to_upper = false;
        if (rate < 0.0) {
          const double lo = Lower(var);
          if (std::isfinite(lo)) limit = std::max(0.0, basic_value_[i] - lo) / -rate;
        } else {
          const double hi = Upper(var);
          if (std::isfinite(hi)) {
            limit = std::max(0.0, hi - basic_value_[i]) / rate;
            to_upper = true;
          }
        }
        if (!std::isfinite(limit)) continue;
        bool take = false;
        if (!std::isfinite(step) || limit < step - 1e-12 * (1.0 + step)) {
          take = true;
        } else if (leave_row != kNone && limit <= step + 1e-12 * (1.0 + step)) {
          take = bland ? var < basis_[leave_row] : std::abs(a) > std::abs(leave_pivot);
        }
        if (take) {
          step = limit;
          leave_row = i;
          leave_to_upper = to_upper;
          leave_pivot = a;
        }
      }
      if (!std::isfinite(step)) return LpStatus::kUnbounded;

      if (step <= 1e-12) {
        if (++degenerate_run > opt_.degenerate_switch) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      // Move along the edge.
      if (step > 0.0) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = At(i, entering);
          if (a != 0.0) basic_value_[i] -= dir * a * step;
        }
      }
      const double entering_value = value_[entering] + dir * step;

      if (leave_row == kNone) {
        // Bound flip, no basis change.
        at_upper_[entering] = dir > 0 ? 1 : 0;
        value_[entering] = dir > 0 ? upper_[entering] : lower_[entering];
        continue;
      }

      const std::size_t leaving = basis_[leave_row];
      if (!IsArtificial(leaving)) {
        is_basic_[leaving] = 0;
        at_upper_[leaving] = leave_to_upper ? 1 : 0;
        value_[leaving] = leave_to_upper ? upper_[leaving] : lower_[leaving];
      }
      Pivot(leave_row, entering);
      basis_[leave_row] = entering;
      is_basic_[entering] = 1;
      basic_value_[leave_row] = entering_value;
      basic_cost_[leave_row] = phase_two_ ? cost_[entering] : 0.0;
    }
  }

  void Pivot(std::size_t r, std::size_t q) {
    double* prow = &tab_[r * cols_];
    const double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    // Sparse pattern of the pivot row speeds up the elimination.
    nz_.clear();
    for (std::size_t j = 0; j < cols_; ++j) {
      if (prow[j] != 0.0) nz_.push_back(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[i * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double dq = reduced_[q];
    if (dq != 0.0) {
      for (std::size_t j : nz_) reduced_[j] -= dq * prow[j];
      reduced_[q] = 0.0;
    }
  }

  std::vector<double> Primal() const {
    std::vector<double> all = value_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!IsArtificial(basis_[i])) all[basis_[i]] = basic_value_[i];
    }
    all.resize(n_);
    return all;
  }

  // Column of the original system (with >= rows negated) for a basis entry.
  double OriginalEntry(std::size_t row, std::size_t var) const {
    if (IsArtificial(var)) return var - kArtificialBase == row ? row_sign_[row] : 0.0;
    if (var >= n_) return slack_of_row_[row] == var ? 1.0 : 0.0;
    return original_[row * n_ + var];
  }

  // Re-solves B x_B = b - N x_N from the original data to shed accumulated
  // tableau round-off.
  void RecomputeBasics() {
    original_.assign(m_ * n_, 0.0);
    const auto& rows = lp_.rows();
    for (std::size_t i = 0; i < m_; ++i) {
      const double flip = rows[i].sense == RowSense::kGreaterEqual ? -1.0 : 1.0;
      for (const Term& t : rows[i].terms) original_[i * n_ + t.var] += flip * t.coeff;
    }
    std::vector<double> b(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double r = rhs_[i];
      for (std::size_t j = 0; j < n_; ++j) {
        if (!is_basic_[j] && value_[j] != 0.0) r -= original_[i * n_ + j] * value_[j];
      }
      const std::size_t s = slack_of_row_[i];
      if (s != kNone && !is_basic_[s]) r -= value_[s];
      b[i] = r;
    }
    std::vector<double> mat(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k < m_; ++k) mat[i * m_ + k] = OriginalEntry(i, basis_[k]);
    }
    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> perm(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < m_; ++i) {
        if (std::abs(mat[i * m_ + k]) > std::abs(mat[piv * m_ + k])) piv = i;
      }
      if (std::abs(mat[piv * m_ + k]) < 1e-300) return;
      if (piv != k) {
        for (std::size_t c = 0; c < m_; ++c) std::swap(mat[k * m_ + c], mat[piv * m_ + c]);
        std::swap(b[k], b[piv]);
      }
      for (std::size_t i = k + 1; i < m_; ++i) {
        const double f = mat[i * m_ + k] / mat[k * m_ + k];
        if (f == 0.0) continue;
        for (std::size_t c = k; c < m_; ++c) mat[i * m_ + c] -= f * mat[k * m_ + c];
        b[i] -= f * b[k];
      }
    }
    std::vector<double> xb(m_);
    for (std::size_t k = m_; k-- > 0;) {
      double s = b[k];
      for (std::size_t c = k + 1; c < m_; ++c) s -= mat[k * m_ + c] * xb[c];
      xb[k] = s / mat[k * m_ + k];
    }
    basic_value_ = xb;
  }

  const LinearProgram& lp_;
  const SimplexOptions& opt_;
  std::size_t n_ = 0, m_ = 0, cols_ = 0;
  std::size_t kArtificialBase = 0;
  std::vector<double> tab_;
  std::vector<double> rhs_;
  std::vector<double> lower_, upper_, cost_, value_;
  std::vector<char> at_upper_, is_basic_;
  std::vector<std::size_t> basis_;
  std::vector<double> basic_value_, basic_cost_, reduced_;
  std::vector<double> row_sign_;
  std::vector<std::size_t> slack_of_row_;
  std::vector<std::size_t> nz_;
  std::vector<double> original_;
  double rhs_scale_ = 1.0;
  bool has_artificials_ = false;
  bool phase_two_ = false;
  std::size_t max_iterations_ = 0;
};

}  // namespace

LpSolution DenseSimplexSolver::Solve(const LinearProgram& lp) const {
  if (auto problems = lp.Check(); !problems.empty()) {
    LpSolution out;
    out.status = LpStatus::kNumericalFailure;
    out.message = "malformed program: " + problems.front();
    return out;
  }
  Tableau tableau(lp, options_);
  return tableau.Run();
}

}  // namespace persweep
