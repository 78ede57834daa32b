#pragma once

// Brute-force oracles for desk-scale instances: vertex enumeration, exhaustive
// mixed-binary solving, penalty thresholds t0 / t1, and cut auditing.
// None of this is used by the solver itself.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dccut/cutgen.hpp"
#include "dccut/dca.hpp"
#include "dccut/instance.hpp"
#include "dccut/simplex.hpp"

namespace dccut::verify {

using Rational = boost::multiprecision::cpp_rational;
using RationalVec = std::vector<Rational>;

/// Exact value of a finite double.
inline Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("to_rational: non-finite value");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(v, &exp);  // v = mant * 2^exp, 0.5 <= |mant| < 1
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp > 0) r *= Rational(boost::multiprecision::cpp_int(1) << exp);
  else if (exp < 0) r /= Rational(boost::multiprecision::cpp_int(1) << -exp);
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

enum class Arithmetic { exact, floating };

struct VertexSet {
  int n = 0;
  std::vector<Point> points;
  std::vector<RationalVec> exact;  // filled for Arithmetic::exact, same order as points

  std::size_t size() const { return points.size(); }
};

namespace detail {

inline bool is_zero(const Rational& v) { return v == 0; }
inline bool is_zero(double v) { return std::abs(v) <= 1e-11; }
inline double magnitude(const Rational& v) { return std::abs(to_double(v)); }
inline double magnitude(double v) { return std::abs(v); }

/// Solves the square system M u = r in place; false if singular.
template <class Real>
bool gauss_solve(std::vector<std::vector<Real>>& M, std::vector<Real>& r, std::vector<Real>& u) {
  const int D = static_cast<int>(r.size());
  for (int col = 0; col < D; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int i = col; i < D; ++i) {
      const double mag = magnitude(M[i][col]);
      if (!is_zero(M[i][col]) && mag > best) {
        best = mag;
        piv = i;
      }
    }
    if (piv < 0) return false;
    std::swap(M[piv], M[col]);
    std::swap(r[piv], r[col]);
    for (int i = col + 1; i < D; ++i) {
      if (is_zero(M[i][col])) continue;
      const Real f = M[i][col] / M[col][col];
      for (int k = col; k < D; ++k) M[i][k] -= f * M[col][k];
      r[i] -= f * r[col];
    }
  }
  u.assign(D, Real(0));
  for (int i = D - 1; i >= 0; --i) {
    Real s = r[i];
    for (int k = i + 1; k < D; ++k) s -= M[i][k] * u[k];
    u[i] = s / M[i][i];
  }
  return true;
}

inline double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

template <class Real>
std::vector<std::vector<Real>> enumerate(const std::vector<std::vector<Real>>& H, const std::vector<Real>& h,
                                         int D, const Real& feas_tol, double dup_tol) {
  const int R = static_cast<int>(h.size());
  std::vector<std::vector<Real>> found;
  if (D > R) return found;
  std::vector<int> pick(D);
  for (int i = 0; i < D; ++i) pick[i] = i;
  std::vector<std::vector<Real>> M(D, std::vector<Real>(D));
  std::vector<Real> r(D), u;
  while (true) {
    for (int i = 0; i < D; ++i) {
      M[i] = H[pick[i]];
      r[i] = h[pick[i]];
    }
    if (gauss_solve(M, r, u)) {
      bool feasible = true;
      for (int i = 0; i < R && feasible; ++i) {
        Real act(0);
        for (int k = 0; k < D; ++k) act += H[i][k] * u[k];
        if (act > h[i] + feas_tol) feasible = false;
      }
      if (feasible) {
        const bool dup = std::any_of(found.begin(), found.end(), [&](const std::vector<Real>& v) {
          for (int k = 0; k < D; ++k)
            if (magnitude(Real(v[k] - u[k])) > dup_tol) return false;
          return true;
        });
        if (!dup) found.push_back(u);
      }
    }
    int i = D - 1;
    while (i >= 0 && pick[i] == R - D + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < D; ++k) pick[k] = pick[k - 1] + 1;
  }
  return found;
}

}  // namespace detail

/// All vertices of K^k (rows, cuts and box bounds), by trying every choice of
/// n+q active constraints.
inline VertexSet enumerate_vertices(const PolyState& state, int size_guard = 16,
                                    Arithmetic arith = Arithmetic::exact,
                                    double max_combinations = 2e7) {
  const MblpInstance& inst = state.base();
  const int D = inst.n() + inst.q();
  if (D > size_guard) throw std::length_error("enumerate_vertices: n+q exceeds size guard");
  const RowSystem sys = state.rows_with_box();
  const int R = sys.rows();
  if (detail::binomial(R, D) > max_combinations)
    throw std::length_error("enumerate_vertices: too many constraint combinations");

  VertexSet out;
  out.n = inst.n();
  if (arith == Arithmetic::exact) {
    std::vector<RationalVec> H(R, RationalVec(D));
    RationalVec h(R);
    for (int i = 0; i < R; ++i) {
      for (int k = 0; k < D; ++k) H[i][k] = to_rational(sys.lhs(i, k));
      h[i] = to_rational(sys.rhs[i]);
    }
    out.exact = detail::enumerate<Rational>(H, h, D, Rational(0), 0.0);
    for (const auto& v : out.exact) {
      Vector u(D);
      for (int k = 0; k < D; ++k) u[k] = to_double(v[k]);
      out.points.push_back(Point::from_stacked(u, inst.n()));
    }
  } else {
    std::vector<std::vector<double>> H(R, std::vector<double>(D));
    std::vector<double> h(R);
    for (int i = 0; i < R; ++i) {
      for (int k = 0; k < D; ++k) H[i][k] = sys.lhs(i, k);
      h[i] = sys.rhs[i];
    }
    for (const auto& v : detail::enumerate<double>(H, h, D, 1e-8, 1e-7))
      out.points.push_back(Point::from_stacked(Eigen::Map<const Vector>(v.data(), D), inst.n()));
  }
  return out;
}

inline VertexSet enumerate_vertices(const MblpInstance& inst, int size_guard = 16,
                                    Arithmetic arith = Arithmetic::exact) {
  return enumerate_vertices(PolyState(inst), size_guard, arith);
}

// ---------------------------------------------------------------------------
// Exhaustive mixed-binary solving

struct BruteForceResult {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
  Point point;
  std::uint64_t binaries_checked = 0;
};

namespace detail {

/// Rows of K^k restricted to fixed binary x: G_y y <= h - G_x x.
struct FixedXSystem {
  Matrix Gx, Gy;
  Vector h;
};

inline FixedXSystem split_rows(const PolyState& state) {
  const MblpInstance& inst = state.base();
  const RowSystem sys = state.rows();
  return {sys.lhs.leftCols(inst.n()), sys.lhs.rightCols(inst.q()), sys.rhs};
}

inline void require_guard(const MblpInstance& inst, int guard) {
  if (inst.n() > guard) throw std::length_error("brute force: n exceeds guard");
}

/// min obj'y over {y in [0, ybar] : Gy y <= r, extra'y <= extra_rhs}; nullopt if empty.
inline std::optional<std::pair<double, Vector>> y_lp(const MblpInstance& inst, const Matrix& Gy, const Vector& r,
                                                     const Vector& obj, const Vector* extra = nullptr,
                                                     double extra_rhs = 0.0) {
  const int q = inst.q();
  // Box-based infeasibility screen.
  for (int i = 0; i < Gy.rows(); ++i) {
    double lo = 0.0;
    for (int j = 0; j < q; ++j) lo += std::min(0.0, Gy(i, j) * inst.ybar()[j]);
    if (lo > r[i] + kFeasibilityTol) return std::nullopt;
  }
  LinearProgram lp;
  lp.objective = obj;
  const int rows = static_cast<int>(Gy.rows()) + (extra ? 1 : 0);
  lp.rows = Matrix(rows, q);
  lp.rhs = Vector(rows);
  lp.rows.topRows(Gy.rows()) = Gy;
  lp.rhs.head(Gy.rows()) = r;
  if (extra) {
    lp.rows.row(rows - 1) = extra->transpose();
    lp.rhs[rows - 1] = extra_rhs;
  }
  lp.lower = Vector::Zero(q);
  lp.upper = inst.ybar();
  const LpOutcome out = solve_lp(lp);
  if (out.status == LpStatus::infeasible) return std::nullopt;
  if (!out.optimal()) throw LpFailure(out.status, "brute force y-subproblem");
  return std::make_pair(out.value, out.solution);
}

}  // namespace detail

/// Global optimum of min f over S^k by enumerating all binary x.
inline BruteForceResult brute_force_solve(const PolyState& state, int guard = 24) {
  const MblpInstance& inst = state.base();
  detail::require_guard(inst, guard);
  const int n = inst.n(), q = inst.q();
  const detail::FixedXSystem sys = detail::split_rows(state);
  BruteForceResult best;
  best.point = inst.zero_point();
  double d_floor = 0.0;
  for (int j = 0; j < q; ++j) d_floor += std::min(0.0, inst.d()[j] * inst.ybar()[j]);

  Vector x = Vector::Zero(n);
  Vector act = Vector::Zero(sys.h.size());  // Gx x, updated along a Gray code
  const std::uint64_t total = std::uint64_t(1) << n;
  double cx = 0.0;
  for (std::uint64_t g = 0; g < total; ++g) {
    if (g > 0) {
      const int bit = std::countr_zero(g);
      const double delta = x[bit] == 0.0 ? 1.0 : -1.0;
      x[bit] += delta;
      act += delta * sys.Gx.col(bit);
      cx += delta * inst.c()[bit];
    }
    ++best.binaries_checked;
    if (q == 0) {
      if (((act - sys.h).array() > kFeasibilityTol).any()) continue;
      if (cx < best.value) {
        best.feasible = true;
        best.value = cx;
        best.point = Point(x, Vector(0));
      }
      continue;
    }
    if (cx + d_floor >= best.value) continue;
    const auto sol = detail::y_lp(inst, sys.Gy, sys.h - act, inst.d());
    if (!sol) continue;
    if (cx + sol->first < best.value) {
      best.feasible = true;
      best.value = cx + sol->first;
      best.point = Point(x, sol->second);
    }
  }
  return best;
}

inline BruteForceResult brute_force_solve(const MblpInstance& inst, int guard = 24) {
  return brute_force_solve(PolyState(inst), guard);
}

/// Every binary x for which some y completes a point of S^k.
inline std::vector<Vector> brute_force_enumerate(const PolyState& state, int guard = 24) {
  const MblpInstance& inst = state.base();
  detail::require_guard(inst, guard);
  const detail::FixedXSystem sys = detail::split_rows(state);
  std::vector<Vector> out;
  const std::uint64_t total = std::uint64_t(1) << inst.n();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Vector x(inst.n());
    for (int i = 0; i < inst.n(); ++i) x[i] = (mask >> i) & 1 ? 1.0 : 0.0;
    const Vector r = sys.h - sys.Gx * x;
    if (inst.q() == 0) {
      if ((r.array() >= -kFeasibilityTol).all()) out.push_back(x);
    } else if (detail::y_lp(inst, sys.Gy, r, Vector::Zero(inst.q()))) {
      out.push_back(x);
    }
  }
  return out;
}

/// Depth-first search for pure binary instances beyond the enumeration guard.
/// Prunes on row feasibility and on an objective bound.
inline BruteForceResult dfs_solve_pure_binary(const MblpInstance& inst) {
  if (inst.q() != 0) throw std::invalid_argument("dfs_solve_pure_binary: instance has continuous variables");
  const int n = inst.n(), m = inst.m();
  // Suffix sums of the most favourable completion for rows and objective.
  Matrix row_floor = Matrix::Zero(m, n + 1);
  Vector obj_floor = Vector::Zero(n + 1);
  for (int i = n - 1; i >= 0; --i) {
    for (int r = 0; r < m; ++r) row_floor(r, i) = row_floor(r, i + 1) + std::min(0.0, inst.A()(r, i));
    obj_floor[i] = obj_floor[i + 1] + std::min(0.0, inst.c()[i]);
  }
  BruteForceResult best;
  Vector x = Vector::Zero(n);
  Vector act = Vector::Zero(m);
  auto dfs = [&](auto&& self, int i, double cx) -> void {
    if (cx + obj_floor[i] >= best.value) return;
    for (int r = 0; r < m; ++r)
      if (act[r] + row_floor(r, i) > inst.b()[r] + kFeasibilityTol) return;
    if (i == n) {
      best.feasible = true;
      best.value = cx;
      best.point = Point(x, Vector(0));
      return;
    }
    ++best.binaries_checked;
    // Try the cheaper branch first.
    const double first = inst.c()[i] < 0.0 ? 1.0 : 0.0;
    for (double v : {first, 1.0 - first}) {
      x[i] = v;
      if (v == 1.0) act += inst.A().col(i);
      self(self, i + 1, cx + v * inst.c()[i]);
      if (v == 1.0) act -= inst.A().col(i);
    }
    x[i] = 0.0;
  };
  dfs(dfs, 0, 0.0);
  return best;
}

// ---------------------------------------------------------------------------
// Penalty thresholds

struct T0Result {
  Rational t0;
  Rational alpha0;   // min f over K
  Rational m;        // min positive penalty over V(K); meaningless if m_infinite
  bool m_infinite = false;
  Rational min_S_f;
};

struct T1Result {
  Rational t1;
  Rational M;
  Rational sigma;
  bool degenerate = false;  // V(K)\S empty or no V+(w): t1 reported as 0
};

namespace detail {

inline Rational exact_f(const MblpInstance& inst, const RationalVec& u) {
  Rational f(0);
  for (int i = 0; i < inst.n(); ++i) f += to_rational(inst.c()[i]) * u[i];
  for (int j = 0; j < inst.q(); ++j) f += to_rational(inst.d()[j]) * u[inst.n() + j];
  return f;
}

inline Rational exact_p(int n, const RationalVec& u) {
  Rational p(0);
  for (int i = 0; i < n; ++i) p += std::min(u[i], Rational(1) - u[i]);
  return p;
}

inline bool exact_binary(int n, const RationalVec& u) {
  for (int i = 0; i < n; ++i)
    if (u[i] != 0 && u[i] != 1) return false;
  return true;
}

/// l_w(u) = sum_{w_i <= 1/2} u_i + sum_{w_i > 1/2} (1 - u_i).
inline Rational exact_l(int n, const RationalVec& w, const RationalVec& u) {
  const Rational half(1, 2);
  Rational l(0);
  for (int i = 0; i < n; ++i) l += w[i] <= half ? u[i] : Rational(1) - u[i];
  return l;
}

inline const std::vector<RationalVec>& require_exact(const VertexSet& v) {
  if (v.exact.size() != v.points.size()) throw std::invalid_argument("vertex set lacks exact coordinates");
  return v.exact;
}

}  // namespace detail

/// Exact minimum of f over S for pure binary instances, brute force otherwise.
inline Rational min_f_over_S(const MblpInstance& inst) {
  if (inst.q() == 0) {
    const BruteForceResult bf = brute_force_solve(inst);
    if (!bf.feasible) throw std::domain_error("min_f_over_S: S is empty");
    RationalVec u(inst.n());
    for (int i = 0; i < inst.n(); ++i) u[i] = Rational(static_cast<int>(bf.point.x[i]));
    return detail::exact_f(inst, u);
  }
  const BruteForceResult bf = brute_force_solve(inst);
  if (!bf.feasible) throw std::domain_error("min_f_over_S: S is empty");
  return to_rational(bf.value);
}

inline T0Result compute_t0(const MblpInstance& inst, const VertexSet& vertices) {
  const auto& V = detail::require_exact(vertices);
  if (V.empty()) throw std::domain_error("compute_t0: K is empty");
  T0Result r;
  r.min_S_f = min_f_over_S(inst);
  bool first = true;
  r.m_infinite = true;
  for (const auto& u : V) {
    const Rational f = detail::exact_f(inst, u);
    if (first || f < r.alpha0) r.alpha0 = f;
    first = false;
    const Rational p = detail::exact_p(inst.n(), u);
    if (p > 0 && (r.m_infinite || p < r.m)) {
      r.m = p;
      r.m_infinite = false;
    }
  }
  r.t0 = r.m_infinite ? Rational(0) : (r.min_S_f - r.alpha0) / r.m;
  return r;
}

inline T1Result compute_t1(const MblpInstance& inst, const VertexSet& vertices) {
  const auto& V = detail::require_exact(vertices);
  const int n = inst.n();
  T1Result r;
  bool have_max = false, have_min = false, have_sigma = false;
  Rational max_f, min_f_out;
  for (const auto& u : V) {
    const Rational f = detail::exact_f(inst, u);
    if (!have_max || f > max_f) max_f = f;
    have_max = true;
    if (detail::exact_binary(n, u)) continue;
    if (!have_min || f < min_f_out) min_f_out = f;
    have_min = true;
    const Rational lw = detail::exact_l(n, u, u);
    for (const auto& v : V) {
      const Rational diff = lw - detail::exact_l(n, u, v);
      if (diff > 0 && (!have_sigma || diff < r.sigma)) {
        r.sigma = diff;
        have_sigma = true;
      }
    }
  }
  if (!have_min || !have_sigma) {
    r.degenerate = true;
    r.t1 = 0;
    if (have_min) r.M = max_f - min_f_out;
    return r;
  }
  r.M = max_f - min_f_out;
  r.t1 = r.M / r.sigma;
  return r;
}

// ---------------------------------------------------------------------------
// Cut auditing

struct AuditMode {
  enum class Kind { global, better_than } kind = Kind::global;
  double value = 0.0;

  static AuditMode global() { return {}; }
  static AuditMode better_than(double v) { return {Kind::better_than, v}; }
};

struct AuditVerdict {
  bool valid = true;
  std::optional<Point> counterexample;
  double worst_violation = 0.0;
  std::uint64_t binaries_checked = 0;
};

/// Checks cut validity over S^k (global) or over the points of S^k with
/// f < value (better-than). A point counts as violating when it misses the
/// rhs by more than tol * (1 + |rhs|).
inline AuditVerdict audit_cut(const PolyState& state, const Cut& cut, AuditMode mode = AuditMode::global(),
                              double tol = 1e-6, int guard = 24) {
  const MblpInstance& inst = state.base();
  detail::require_guard(inst, guard);
  const int n = inst.n(), q = inst.q();
  const detail::FixedXSystem sys = detail::split_rows(state);
  const bool better = mode.kind == AuditMode::Kind::better_than;
  const double strict = 1e-6;
  const double slack_tol = tol * (1.0 + std::abs(cut.rhs));
  const Vector ax = cut.coeffs.head(n);
  const Vector ay = cut.coeffs.tail(q);
  const bool y_free = q == 0 || ay.cwiseAbs().maxCoeff() == 0.0;

  AuditVerdict verdict;
  const std::uint64_t total = std::uint64_t(1) << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? 1.0 : 0.0;
    ++verdict.binaries_checked;
    const double need = cut.rhs - ax.dot(x);  // required value of ay'y
    const double cx = inst.c().dot(x);
    const Vector r = sys.h - sys.Gx * x;

    if (q == 0) {
      if ((r.array() < -kFeasibilityTol).any()) continue;
      if (better && !(cx < mode.value - strict)) continue;
      if (need > slack_tol) {
        verdict.valid = false;
        if (need > verdict.worst_violation) {
          verdict.worst_violation = need;
          verdict.counterexample = Point(x, Vector(0));
        }
      }
      continue;
    }

    // Skip the LP when even the box guarantees the cut.
    double ay_floor = 0.0;
    for (int j = 0; j < q; ++j) ay_floor += std::min(0.0, ay[j] * inst.ybar()[j]);
    if (ay_floor >= need - slack_tol) continue;

    const Vector d = inst.d();
    std::optional<std::pair<double, Vector>> sol;
    if (better) {
      sol = detail::y_lp(inst, sys.Gy, r, y_free ? d : ay, &d, mode.value - cx - strict);
    } else {
      sol = detail::y_lp(inst, sys.Gy, r, y_free ? Vector(Vector::Zero(q)) : ay);
    }
    if (!sol) continue;
    const double achieved = y_free ? 0.0 : sol->first;
    const double viol = need - achieved;
    if (viol > slack_tol) {
      verdict.valid = false;
      if (viol > verdict.worst_violation) {
        verdict.worst_violation = viol;
        verdict.counterexample = Point(x, sol->second);
      }
    }
  }
  return verdict;
}

inline AuditVerdict audit_cut(const MblpInstance& inst, const Cut& cut, AuditMode mode = AuditMode::global(),
                              double tol = 1e-6) {
  return audit_cut(PolyState(inst), cut, mode, tol);
}

}  // namespace dccut::verify
