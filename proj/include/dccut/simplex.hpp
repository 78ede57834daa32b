#pragma once

// Two-phase bounded-variable primal simplex on dense data.
//
// Every basis B splits into basic structural columns S and basic logicals
// (slack or artificial, one per row at most). With R the rows that carry no
// basic logical, |R| == |S| and B is block triangular with the kernel
// K = A(R, S). Only K is factorized, so a pivot costs O(m |S| + |S|^3)
// instead of O(m^2), which keeps LPs with many cut rows cheap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dccut/instance.hpp"

namespace dccut {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min objective'x  s.t.  rows x (<= or =) rhs,  lower <= x <= upper.
struct LinearProgram {
  Vector objective;
  Matrix rows;
  Vector rhs;
  std::vector<bool> equality;  // empty: every row is "<="
  Vector lower;
  Vector upper;                // entries may be +inf

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  void validate() const {
    const auto n = objective.size();
    if (rows.cols() != n || rows.rows() != rhs.size() || lower.size() != n || upper.size() != n)
      throw std::invalid_argument("LinearProgram: inconsistent dimensions");
    if (!equality.empty() && static_cast<Eigen::Index>(equality.size()) != rhs.size())
      throw std::invalid_argument("LinearProgram: equality mask length mismatch");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(lower[j])) throw std::invalid_argument("LinearProgram: lower bound must be finite");
      if (upper[j] < lower[j]) throw std::invalid_argument("LinearProgram: upper < lower");
    }
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_failure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    case LpStatus::numerical_failure: return "numerical-failure";
  }
  return "?";
}

enum class VarState : std::uint8_t { basic, at_lower, at_upper };

/// Variables are numbered structurals first, then one slack per row.
struct BasisInfo {
  std::vector<int> basic;
  std::vector<VarState> state;
};

struct LpOutcome {
  LpStatus status = LpStatus::numerical_failure;
  Vector solution;  // structural values, present iff optimal
  double value = 0.0;
  BasisInfo basis;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::optimal; }
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int bland_after = 50;       // consecutive degenerate pivots before Bland's rule
  int refactor_every = 100;   // pivots between recomputing basic values from scratch
  int max_iterations = 200000;
};

/// Raised by callers that need an optimal LP and did not get one.
class LpFailure : public std::runtime_error {
 public:
  LpFailure(LpStatus status, const std::string& context)
      : std::runtime_error(context + ": LP " + to_string(status)), status_(status) {}
  LpStatus status() const { return status_; }

 private:
  LpStatus status_;
};

namespace detail {

class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), n_(lp.num_vars()), m_(lp.num_rows()) {}

  LpOutcome run() {
    LpOutcome out;
    initialize();
    if (!refactor()) return fail(out, LpStatus::numerical_failure);

    // Phase 1: minimize the sum of artificials.
    cost_.setZero(total());
    bool need_phase1 = false;
    for (int i = 0; i < m_; ++i) {
      if (upper_[art(i)] > 0.0) {
        cost_[art(i)] = 1.0;
        need_phase1 = true;
      }
    }
    if (need_phase1) {
      const double scale = 1.0 + (m_ > 0 ? lp_.rhs.cwiseAbs().maxCoeff() : 0.0);
      phase1_target_ = phase1_target(scale);
      const LpStatus s = iterate();
      phase1_target_ = -1.0;
      if (s != LpStatus::optimal) return fail(out, s == LpStatus::unbounded ? LpStatus::numerical_failure : s);
      recompute_basic_values();
      if (artificial_sum() > phase1_target(scale)) return fail(out, LpStatus::infeasible);
      // Artificials are pinned to zero for the rest of the solve.
      for (int i = 0; i < m_; ++i) {
        upper_[art(i)] = 0.0;
        if (state_[art(i)] != VarState::basic) {
          state_[art(i)] = VarState::at_lower;
          x_[art(i)] = 0.0;
        }
      }
    }

    // Phase 2.
    cost_.setZero(total());
    cost_.head(n_) = lp_.objective;
    const LpStatus s = iterate();
    if (s != LpStatus::optimal) return fail(out, s);
    recompute_basic_values();

    out.status = LpStatus::optimal;
    out.solution = x_.head(n_);
    for (int j = 0; j < n_; ++j) out.solution[j] = std::clamp(out.solution[j], lp_.lower[j], lp_.upper[j]);
    out.value = lp_.objective.dot(out.solution);
    out.iterations = iterations_;
    out.basis.state.assign(state_.begin(), state_.begin() + n_ + m_);
    for (int j = 0; j < n_ + m_; ++j)
      if (state_[j] == VarState::basic) out.basis.basic.push_back(j);
    return out;
  }

 private:
  int total() const { return n_ + 2 * m_; }

  double artificial_sum() const {
    double sum = 0.0;
    for (int i = 0; i < m_; ++i) sum += std::abs(x_[art(i)]);
    return sum;
  }

  double phase1_target(double scale) const { return opt_.feasibility_tol * scale; }
  int slack(int i) const { return n_ + i; }
  int art(int i) const { return n_ + m_ + i; }
  bool is_logical(int j) const { return j >= n_; }
  int row_of(int j) const { return j < n_ + m_ ? j - n_ : j - n_ - m_; }
  double logical_coef(int j) const { return j < n_ + m_ ? 1.0 : sigma_[j - n_ - m_]; }

  LpOutcome& fail(LpOutcome& out, LpStatus s) {
    out.status = s;
    out.iterations = iterations_;
    return out;
  }

  void initialize() {
    lower_.resize(total());
    upper_.resize(total());
    x_.setZero(total());
    state_.assign(total(), VarState::at_lower);
    sigma_.assign(m_, 1.0);
    row_logical_.assign(m_, -1);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = lp_.lower[j];
      upper_[j] = lp_.upper[j];
      x_[j] = lower_[j];
    }
    const Vector residual = lp_.rhs - lp_.rows * x_.head(n_);
    for (int i = 0; i < m_; ++i) {
      const bool eq = !lp_.equality.empty() && lp_.equality[i];
      lower_[slack(i)] = 0.0;
      upper_[slack(i)] = eq ? 0.0 : kInf;
      lower_[art(i)] = 0.0;
      upper_[art(i)] = 0.0;
      if (!eq && residual[i] >= 0.0) {
        state_[slack(i)] = VarState::basic;
        x_[slack(i)] = residual[i];
        row_logical_[i] = slack(i);
      } else {
        sigma_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
        upper_[art(i)] = kInf;
        state_[art(i)] = VarState::basic;
        x_[art(i)] = std::abs(residual[i]);
        row_logical_[i] = art(i);
      }
    }
  }

  /// Rebuilds the kernel index sets and factorizes K = A(R, S).
  bool refactor() {
    kernel_rows_.clear();
    for (int i = 0; i < m_; ++i)
      if (row_logical_[i] < 0) kernel_rows_.push_back(i);
    if (kernel_rows_.size() != basic_struct_.size()) return false;
    if (basic_struct_.empty()) return true;
    const Matrix K = lp_.rows(kernel_rows_, basic_struct_);
    lu_.compute(K);
    const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    return min_pivot > 1e-11 * scale;
  }

  /// Solves B alpha = a. Returns alpha over all variables (nonzero on basics only).
  void ftran(const Vector& a, Vector& alpha) const {
    alpha.setZero(total());
    Vector alpha_s;
    if (!basic_struct_.empty()) {
      Vector rhs(kernel_rows_.size());
      for (std::size_t r = 0; r < kernel_rows_.size(); ++r) rhs[r] = a[kernel_rows_[r]];
      alpha_s = lu_.solve(rhs);
      for (std::size_t s = 0; s < basic_struct_.size(); ++s) alpha[basic_struct_[s]] = alpha_s[s];
    }
    for (int i = 0; i < m_; ++i) {
      const int l = row_logical_[i];
      if (l < 0) continue;
      double v = a[i];
      for (std::size_t s = 0; s < basic_struct_.size(); ++s) v -= lp_.rows(i, basic_struct_[s]) * alpha_s[s];
      alpha[l] = v / logical_coef(l);
    }
  }

  /// Row duals pi with B' pi = c_B.
  Vector btran() const {
    Vector pi = Vector::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      const int l = row_logical_[i];
      if (l >= 0) pi[i] = cost_[l] / logical_coef(l);
    }
    if (!basic_struct_.empty()) {
      Vector rhs(basic_struct_.size());
      for (std::size_t s = 0; s < basic_struct_.size(); ++s) {
        const int j = basic_struct_[s];
        rhs[s] = cost_[j] - lp_.rows.col(j).dot(pi);
      }
      const Vector pr = lu_.transpose().solve(rhs);
      for (std::size_t r = 0; r < kernel_rows_.size(); ++r) pi[kernel_rows_[r]] = pr[r];
    }
    return pi;
  }

  Vector column(int j) const {
    if (j < n_) return lp_.rows.col(j);
    Vector e = Vector::Zero(m_);
    e[row_of(j)] = logical_coef(j);
    return e;
  }

  void recompute_basic_values() {
    Vector r = lp_.rhs;
    for (int j = 0; j < n_; ++j)
      if (state_[j] != VarState::basic && x_[j] != 0.0) r -= lp_.rows.col(j) * x_[j];
    for (int j = n_; j < total(); ++j)
      if (state_[j] != VarState::basic && x_[j] != 0.0) r[row_of(j)] -= logical_coef(j) * x_[j];
    Vector xb;
    ftran(r, xb);
    for (int j = 0; j < total(); ++j)
      if (state_[j] == VarState::basic) x_[j] = xb[j];
  }

  LpStatus iterate() {
    int degenerate_run = 0;
    int since_refresh = 0;
    Vector alpha;
    while (true) {
      if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
      const bool bland = degenerate_run >= opt_.bland_after;
      // Phase 1 ends once the artificials are within tolerance; pivoting on
      // through a degenerate face gains nothing.
      if (phase1_target_ >= 0.0 && artificial_sum() <= phase1_target_) return LpStatus::optimal;

      // Pricing.
      const Vector pi = btran();
      const Vector dj_struct = cost_.head(n_) - lp_.rows.transpose() * pi;
      int entering = -1;
      double best = 0.0;
      for (int j = 0; j < total(); ++j) {
        if (state_[j] == VarState::basic || upper_[j] <= lower_[j]) continue;
        double dj;
        if (j < n_) dj = dj_struct[j];
        else dj = cost_[j] - logical_coef(j) * pi[row_of(j)];
        double gain = 0.0;
        if (state_[j] == VarState::at_lower && dj < -opt_.optimality_tol) gain = -dj;
        else if (state_[j] == VarState::at_upper && dj > opt_.optimality_tol) gain = dj;
        if (gain <= 0.0) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (gain > best) {
          best = gain;
          entering = j;
        }
      }
      if (entering < 0) return LpStatus::optimal;
      const double dir = state_[entering] == VarState::at_lower ? 1.0 : -1.0;

      // Ratio test.
      ftran(column(entering), alpha);
      double theta = kInf;
      int leaving = -1;
      double leaving_alpha = 0.0;
      for (int j = 0; j < total(); ++j) {
        if (state_[j] != VarState::basic) continue;
        const double rate = dir * alpha[j];
        double limit;
        if (rate > opt_.pivot_tol) {
          limit = std::max(0.0, (x_[j] - lower_[j]) / rate);
        } else if (rate < -opt_.pivot_tol && std::isfinite(upper_[j])) {
          limit = std::max(0.0, (upper_[j] - x_[j]) / -rate);
        } else {
          continue;
        }
        bool take = false;
        if (leaving < 0 || limit < theta - 1e-12) {
          take = true;
        } else if (limit <= theta + 1e-12) {
          take = bland ? j < leaving : std::abs(alpha[j]) > std::abs(leaving_alpha);
        }
        if (take) {
          theta = std::min(theta, limit);
          if (limit < theta + 1e-12) theta = limit;
          leaving = j;
          leaving_alpha = alpha[j];
        }
      }
      const double flip = upper_[entering] - lower_[entering];
      if (leaving < 0 && !std::isfinite(flip)) return LpStatus::unbounded;
      ++iterations_;

      if (std::isfinite(flip) && (leaving < 0 || flip <= theta)) {
        // Bound flip, basis unchanged.
        x_[entering] = dir > 0 ? upper_[entering] : lower_[entering];
        state_[entering] = dir > 0 ? VarState::at_upper : VarState::at_lower;
        for (int j = 0; j < total(); ++j)
          if (state_[j] == VarState::basic) x_[j] -= flip * dir * alpha[j];
        degenerate_run = 0;
        continue;
      }

      for (int j = 0; j < total(); ++j)
        if (state_[j] == VarState::basic) x_[j] -= theta * dir * alpha[j];
      x_[entering] += theta * dir;
      const bool to_lower = dir * leaving_alpha > 0.0;
      x_[leaving] = to_lower ? lower_[leaving] : upper_[leaving];
      state_[leaving] = to_lower ? VarState::at_lower : VarState::at_upper;
      state_[entering] = VarState::basic;

      if (is_logical(leaving)) row_logical_[row_of(leaving)] = -1;
      else basic_struct_.erase(std::find(basic_struct_.begin(), basic_struct_.end(), leaving));
      if (is_logical(entering)) row_logical_[row_of(entering)] = entering;
      else basic_struct_.insert(std::lower_bound(basic_struct_.begin(), basic_struct_.end(), entering), entering);
      if (!refactor()) return LpStatus::numerical_failure;

      degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
      if (++since_refresh >= opt_.refactor_every) {
        recompute_basic_values();
        since_refresh = 0;
      }
    }
  }

  const LinearProgram& lp_;
  const SimplexOptions& opt_;
  int n_, m_;
  int iterations_ = 0;
  double phase1_target_ = -1.0;
  Vector lower_, upper_, x_, cost_;
  std::vector<VarState> state_;
  std::vector<double> sigma_;
  std::vector<int> row_logical_;
  std::vector<int> basic_struct_;
  std::vector<int> kernel_rows_;
  Eigen::PartialPivLU<Matrix> lu_;
};

}  // namespace detail

/// Solves lp to a basic (vertex) optimal solution.
inline LpOutcome solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {}) {
  lp.validate();
  detail::BoundedSimplex solver(lp, opt);
  return solver.run();
}

/// LP over the polytope of `state` (box bounds kept as variable bounds).
inline LinearProgram polytope_lp(const PolyState& state, const Vector& objective) {
  const MblpInstance& inst = state.base();
  RowSystem sys = state.rows();
  LinearProgram lp;
  lp.objective = objective;
  lp.rows = std::move(sys.lhs);
  lp.rhs = std::move(sys.rhs);
  lp.lower = Vector::Zero(inst.n() + inst.q());
  lp.upper = inst.box_upper();
  return lp;
}

}  // namespace dccut
