#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dccut {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Default membership tolerances for S and K.
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kFeasibilityTol = 1e-7;

/// A point u = (x, y) with x over the binary block and y over the continuous block.
struct Point {
  Vector x;
  Vector y;

  Point() = default;
  Point(Vector x_, Vector y_) : x(std::move(x_)), y(std::move(y_)) {}

  int n() const { return static_cast<int>(x.size()); }
  int q() const { return static_cast<int>(y.size()); }

  /// (x, y) as one vector of length n + q.
  Vector stacked() const {
    Vector u(x.size() + y.size());
    u << x, y;
    return u;
  }

  static Point from_stacked(const Vector& u, int n) {
    return Point(u.head(n), u.tail(u.size() - n));
  }
};

enum class CutKind { dc1, dc2, lap };

inline const char* to_string(CutKind kind) {
  switch (kind) {
    case CutKind::dc1: return "dc1";
    case CutKind::dc2: return "dc2";
    case CutKind::lap: return "lap";
  }
  return "?";
}

/// Valid inequality coeffs' (x, y) >= rhs.
struct Cut {
  Vector coeffs;
  double rhs = 0.0;
  CutKind kind = CutKind::lap;
  Point source;
  int iteration = 0;

  double activity(const Point& u) const {
    const int n = u.n();
    return coeffs.head(n).dot(u.x) + coeffs.tail(coeffs.size() - n).dot(u.y);
  }

  /// rhs - activity; positive means u violates the cut.
  double violation(const Point& u) const { return rhs - activity(u); }
};

/// Mixed-binary linear program
///   min c'x + d'y  s.t.  Ax + By <= b,  x in {0,1}^n,  0 <= y <= ybar.
/// Rows are always stored in "<=" form.
class MblpInstance {
 public:
  MblpInstance() = default;

  MblpInstance(Vector c, Vector d, Matrix A, Matrix B, Vector b, Vector ybar,
               std::string name = {})
      : c_(std::move(c)), d_(std::move(d)), A_(std::move(A)), B_(std::move(B)),
        b_(std::move(b)), ybar_(std::move(ybar)), name_(std::move(name)) {
    validate();
  }

  int n() const { return static_cast<int>(c_.size()); }
  int q() const { return static_cast<int>(d_.size()); }
  int m() const { return static_cast<int>(b_.size()); }

  const Vector& c() const { return c_; }
  const Vector& d() const { return d_; }
  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Vector& b() const { return b_; }
  const Vector& ybar() const { return ybar_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Objective over the stacked variable vector (x, y).
  Vector stacked_cost() const {
    Vector cost(n() + q());
    cost << c_, d_;
    return cost;
  }

  /// [A | B], one row per constraint.
  Matrix stacked_rows() const {
    Matrix rows(m(), n() + q());
    rows << A_, B_;
    return rows;
  }

  /// Upper bounds of the box [0,1]^n x [0, ybar].
  Vector box_upper() const {
    Vector up(n() + q());
    up << Vector::Ones(n()), ybar_;
    return up;
  }

  Point zero_point() const { return Point(Vector::Zero(n()), Vector::Zero(q())); }

  friend bool operator==(const MblpInstance& a, const MblpInstance& b) {
    return a.c_ == b.c_ && a.d_ == b.d_ && a.A_ == b.A_ && a.B_ == b.B_ &&
           a.b_ == b.b_ && a.ybar_ == b.ybar_;
  }

 private:
  void validate() const {
    if (c_.size() < 1) throw std::invalid_argument("instance needs at least one binary variable");
    if (A_.rows() != b_.size() || A_.cols() != c_.size())
      throw std::invalid_argument("A must be m x n");
    if (B_.rows() != b_.size() || B_.cols() != d_.size())
      throw std::invalid_argument("B must be m x q");
    if (ybar_.size() != d_.size()) throw std::invalid_argument("ybar must have length q");
    for (Eigen::Index j = 0; j < ybar_.size(); ++j) {
      if (!(ybar_[j] >= 0.0) || !std::isfinite(ybar_[j]))
        throw std::invalid_argument("ybar entries must be finite and nonnegative");
    }
  }

  Vector c_, d_;
  Matrix A_, B_;
  Vector b_, ybar_;
  std::string name_;
};

inline double evaluate_f(const MblpInstance& inst, const Point& u) {
  return inst.c().dot(u.x) + inst.d().dot(u.y);
}

/// Row system G u <= h in the stacked variables.
struct RowSystem {
  Matrix lhs;
  Vector rhs;

  int rows() const { return static_cast<int>(rhs.size()); }
};

/// K^k = K cap {all cuts}. Holds a non-owning reference to the base instance,
/// which must outlive the state.
class PolyState {
 public:
  explicit PolyState(const MblpInstance& base, std::vector<Cut> cuts = {}, int iteration = 0)
      : base_(&base), cuts_(std::move(cuts)), iteration_(iteration) {}

  const MblpInstance& base() const { return *base_; }
  const std::vector<Cut>& cuts() const { return cuts_; }
  int iteration() const { return iteration_; }
  void set_iteration(int k) { iteration_ = k; }

  void append(Cut cut) { cuts_.push_back(std::move(cut)); }

  /// Copy of this state with only the first `count` cuts.
  PolyState prefix(std::size_t count) const {
    count = std::min(count, cuts_.size());
    return PolyState(*base_, std::vector<Cut>(cuts_.begin(), cuts_.begin() + count), iteration_);
  }

  PolyState with_cut(Cut cut) const {
    PolyState next = *this;
    next.append(std::move(cut));
    return next;
  }

  /// Base rows followed by every cut, negated into "<=" form.
  RowSystem rows() const {
    const MblpInstance& inst = *base_;
    const int dim = inst.n() + inst.q();
    const int total = inst.m() + static_cast<int>(cuts_.size());
    RowSystem sys{Matrix(total, dim), Vector(total)};
    sys.lhs.topRows(inst.m()) = inst.stacked_rows();
    sys.rhs.head(inst.m()) = inst.b();
    for (std::size_t k = 0; k < cuts_.size(); ++k) {
      const int r = inst.m() + static_cast<int>(k);
      sys.lhs.row(r) = -cuts_[k].coeffs.transpose();
      sys.rhs[r] = -cuts_[k].rhs;
    }
    return sys;
  }

  /// rows() plus the box bounds written as explicit rows.
  RowSystem rows_with_box() const {
    RowSystem sys = rows();
    const MblpInstance& inst = *base_;
    const int dim = inst.n() + inst.q();
    const int r0 = sys.rows();
    RowSystem full{Matrix(r0 + 2 * dim, dim), Vector(r0 + 2 * dim)};
    full.lhs.topRows(r0) = sys.lhs;
    full.rhs.head(r0) = sys.rhs;
    const Vector up = inst.box_upper();
    full.lhs.bottomRows(2 * dim).setZero();
    for (int j = 0; j < dim; ++j) {
      full.lhs(r0 + 2 * j, j) = 1.0;
      full.rhs[r0 + 2 * j] = up[j];
      full.lhs(r0 + 2 * j + 1, j) = -1.0;
      full.rhs[r0 + 2 * j + 1] = 0.0;
    }
    return full;
  }

 private:
  const MblpInstance* base_;
  std::vector<Cut> cuts_;
  int iteration_;
};

inline bool in_box(const MblpInstance& inst, const Point& u, double tol) {
  for (int i = 0; i < inst.n(); ++i)
    if (u.x[i] < -tol || u.x[i] > 1.0 + tol) return false;
  for (int j = 0; j < inst.q(); ++j)
    if (u.y[j] < -tol || u.y[j] > inst.ybar()[j] + tol) return false;
  return true;
}

inline bool is_in_K(const PolyState& state, const Point& u, double tol = kFeasibilityTol) {
  const MblpInstance& inst = state.base();
  if (u.n() != inst.n() || u.q() != inst.q())
    throw std::invalid_argument("point dimensions do not match instance");
  if (!in_box(inst, u, tol)) return false;
  const Vector activity = inst.A() * u.x + inst.B() * u.y;
  for (int i = 0; i < inst.m(); ++i)
    if (activity[i] > inst.b()[i] + tol) return false;
  for (const Cut& cut : state.cuts())
    if (cut.violation(u) > tol) return false;
  return true;
}

inline bool is_binary(const Vector& x, double int_tol = kIntegralityTol) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::min(std::abs(x[i]), std::abs(1.0 - x[i])) > int_tol) return false;
  return true;
}

inline bool is_in_S(const PolyState& state, const Point& u, double int_tol = kIntegralityTol,
                    double feas_tol = kFeasibilityTol) {
  return is_in_K(state, u, feas_tol) && is_binary(u.x, int_tol);
}

}  // namespace dccut
