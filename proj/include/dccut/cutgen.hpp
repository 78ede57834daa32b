#pragma once

// DC cuts built from the affine majorant l of the penalty, and lift-and-project
// cuts from the disjunction x_j <= 0 or x_j >= 1 over K^k.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dccut/dca.hpp"
#include "dccut/instance.hpp"
#include "dccut/simplex.hpp"

namespace dccut {

inline constexpr double kViolationTol = 1e-6;
inline constexpr double kMinFractionality = 0.001;

class CutGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IndexSets {
  std::vector<int> J0;  // x_j <= 1/2
  std::vector<int> J1;
};

inline IndexSets index_sets(const Vector& x) {
  IndexSets s;
  for (int j = 0; j < static_cast<int>(x.size()); ++j) (x[j] <= 0.5 ? s.J0 : s.J1).push_back(j);
  return s;
}

/// l(u) = coeffs' u + constant, zero on y.
struct AffineL {
  Vector coeffs;
  double constant = 0.0;

  double operator()(const Point& u) const {
    return coeffs.head(u.n()).dot(u.x) + constant;
  }
};

inline AffineL affine_l(const Point& u_star) {
  const int n = u_star.n();
  AffineL l{Vector::Zero(n + u_star.q()), 0.0};
  for (int j = 0; j < n; ++j) {
    if (u_star.x[j] <= 0.5) {
      l.coeffs[j] = 1.0;
    } else {
      l.coeffs[j] = -1.0;
      l.constant += 1.0;
    }
  }
  return l;
}

/// l(u) >= 1 at a feasible point. Keeps every feasible point with a different x.
inline Cut dc_cut_type1(const Point& u_star, int iteration = 0, double int_tol = kIntegralityTol) {
  if (!is_binary(u_star.x, int_tol))
    throw std::invalid_argument("type-I DC cut needs a point with binary x");
  const AffineL l = affine_l(u_star);
  return Cut{l.coeffs, 1.0 - l.constant, CutKind::dc1, u_star, iteration};
}

/// l(u) >= ceil(l(u*)) at an infeasible local minimizer, when p(u*) is not an
/// integer and no coordinate sits at 1/2.
inline std::optional<Cut> dc_cut_type2(const Point& u_star, double tie_tol = kTieTol,
                                       double int_tol = kIntegralityTol, int iteration = 0) {
  for (int i = 0; i < u_star.n(); ++i)
    if (std::abs(u_star.x[i] - 0.5) <= tie_tol) return std::nullopt;
  const AffineL l = affine_l(u_star);
  const double value = l(u_star);
  if (std::abs(value - std::round(value)) <= int_tol) return std::nullopt;
  return Cut{l.coeffs, std::ceil(value) - l.constant, CutKind::dc2, u_star, iteration};
}

/// Indices with min(x_j, 1 - x_j) >= min_frac, most fractional first.
inline std::vector<int> select_fractional_indices(const Vector& x, int nlap,
                                                  double min_frac = kMinFractionality) {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(x.size()); ++j)
    if (std::min(x[j], 1.0 - x[j]) >= min_frac) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(x[a] - 0.5) < std::abs(x[b] - 0.5);
  });
  if (static_cast<int>(idx.size()) > std::max(nlap, 0)) idx.resize(std::max(nlap, 0));
  return idx;
}

struct LapOptions {
  double violation_tol = kViolationTol;
  double min_frac = kMinFractionality;
  SimplexOptions lp;
};

/// Lift-and-project cut for index j at u_star over K^k.
///
/// With K^k = {u : H u <= h} (box written as rows), the CGLP is
///   max  pi' u* - pi0
///   s.t. pi = H'w + w0 e_j = H'v - v0 e_j,  pi0 >= w'h,  pi0 >= v'h - v0,
///        sum(w) + w0 + sum(v) + v0 = 1,  w, w0, v, v0 >= 0,
/// and the cut pi' u <= pi0 is stored as (-pi)' u >= -pi0 scaled to max |coeff| = 1.
inline std::optional<Cut> lap_cut(const PolyState& state, const Point& u_star, int j,
                                  int iteration = 0, const LapOptions& opt = {}) {
  const MblpInstance& inst = state.base();
  if (j < 0 || j >= inst.n()) throw std::invalid_argument("lap_cut: index out of range");
  if (std::min(u_star.x[j], 1.0 - u_star.x[j]) < opt.min_frac)
    throw std::invalid_argument("lap_cut: x_j is not fractional");

  const RowSystem sys = state.rows_with_box();
  const int R = sys.rows();
  const int D = inst.n() + inst.q();
  const Vector u = u_star.stacked();
  const Vector Hu = sys.lhs * u;

  // Columns: w[0,R) w0 v[R+1, 2R+1) v0 p+ p-.
  const int iw0 = R, iv = R + 1, iv0 = 2 * R + 1, ipp = 2 * R + 2, ipm = 2 * R + 3;
  const int N = 2 * R + 4;
  LinearProgram lp;
  lp.objective = Vector::Zero(N);
  lp.objective.head(R) = -Hu;
  lp.objective[iw0] = -u[j];
  lp.objective[ipp] = 1.0;
  lp.objective[ipm] = -1.0;
  lp.rows = Matrix::Zero(D + 3, N);
  lp.rhs = Vector::Zero(D + 3);
  lp.equality.assign(D + 3, true);
  lp.rows.block(0, 0, D, R) = sys.lhs.transpose();
  lp.rows.block(0, iv, D, R) = -sys.lhs.transpose();
  lp.rows(j, iw0) = 1.0;
  lp.rows(j, iv0) = 1.0;
  // w'h - pi0 <= 0
  lp.rows.block(D, 0, 1, R) = sys.rhs.transpose();
  lp.rows(D, ipp) = -1.0;
  lp.rows(D, ipm) = 1.0;
  lp.equality[D] = false;
  // v'h - v0 - pi0 <= 0
  lp.rows.block(D + 1, iv, 1, R) = sys.rhs.transpose();
  lp.rows(D + 1, iv0) = -1.0;
  lp.rows(D + 1, ipp) = -1.0;
  lp.rows(D + 1, ipm) = 1.0;
  lp.equality[D + 1] = false;
  // normalization
  lp.rows.block(D + 2, 0, 1, 2 * R + 2).setOnes();
  lp.rhs[D + 2] = 1.0;
  lp.lower = Vector::Zero(N);
  lp.upper = Vector::Constant(N, kInf);

  const LpOutcome out = solve_lp(lp, opt.lp);
  if (!out.optimal())
    throw CutGenerationError(std::string("cut-generation LP ") + to_string(out.status));
  // The CGLP value is measured under the normalization; acceptance is decided
  // on the rescaled cut below.
  if (-out.value <= 0.0) return std::nullopt;

  const Vector w = out.solution.head(R);
  const Vector v = out.solution.segment(iv, R);
  const double w0 = out.solution[iw0];
  const double v0 = out.solution[iv0];
  Vector pi = sys.lhs.transpose() * w;
  pi[j] += w0;
  double pi0 = std::max(w.dot(sys.rhs), v.dot(sys.rhs) - v0);

  // The two branch representations of pi agree up to LP tolerance; make the
  // rhs valid for the branch-2 representation too.
  Vector pi_v = sys.lhs.transpose() * v;
  pi_v[j] -= v0;
  const Vector up = inst.box_upper();
  double slack_fix = 0.0;
  for (int i = 0; i < D; ++i) slack_fix += std::max(0.0, (pi[i] - pi_v[i]) * up[i]);
  pi0 += slack_fix;

  const double scale = pi.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return std::nullopt;
  for (int i = 0; i < D; ++i) {
    if (std::abs(pi[i]) < 1e-9 * scale) {
      pi0 -= std::min(0.0, pi[i] * up[i]);
      pi[i] = 0.0;
    }
  }
  Cut cut{-pi / scale, -pi0 / scale, CutKind::lap, u_star, iteration};
  if (cut.violation(u_star) <= opt.violation_tol) return std::nullopt;
  return cut;
}

namespace detail {

inline Vector normalized_direction(const Cut& c, double& factor) {
  factor = c.coeffs.cwiseAbs().maxCoeff();
  if (!(factor > 0.0)) factor = 1.0;
  return c.coeffs / factor;
}

}  // namespace detail

/// True if a and b have the same coefficient direction up to positive scaling.
inline bool same_direction(const Cut& a, const Cut& b, double scale_tol = 1e-9) {
  if (a.coeffs.size() != b.coeffs.size()) return false;
  double fa, fb;
  const Vector da = detail::normalized_direction(a, fa);
  const Vector db = detail::normalized_direction(b, fb);
  return (da - db).cwiseAbs().maxCoeff() <= scale_tol;
}

/// Normalized rhs, comparable between cuts of the same direction.
inline double normalized_rhs(const Cut& c) {
  const double f = c.coeffs.cwiseAbs().maxCoeff();
  return f > 0.0 ? c.rhs / f : c.rhs;
}

/// Among cuts with equal direction keeps the tightest, at the position of the
/// first occurrence.
inline std::vector<Cut> pool_dedupe(const std::vector<Cut>& cuts, double scale_tol = 1e-9) {
  std::vector<Cut> out;
  for (const Cut& c : cuts) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Cut& o) { return same_direction(o, c, scale_tol); });
    if (it == out.end()) out.push_back(c);
    else if (normalized_rhs(c) > normalized_rhs(*it)) *it = c;
  }
  return out;
}

/// Drops candidates implied by a cut already in `existing` with the same direction.
inline std::vector<Cut> drop_dominated(const std::vector<Cut>& candidates, const std::vector<Cut>& existing,
                                       double scale_tol = 1e-9) {
  std::vector<Cut> out;
  for (const Cut& c : candidates) {
    const bool dominated = std::any_of(existing.begin(), existing.end(), [&](const Cut& e) {
      return same_direction(e, c, scale_tol) && normalized_rhs(e) >= normalized_rhs(c) - 1e-12;
    });
    if (!dominated) out.push_back(c);
  }
  return out;
}

}  // namespace dccut
