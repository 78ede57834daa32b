#pragma once

// Exact-penalty reformulation min f(u) + t p(x) over K^k and its DCA solver.
// g = f + indicator(K^k), h = t * sum max(x_i - 1/2, 1/2 - x_i) + const, so each
// DCA step is one LP with objective (c - t z, d).

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "dccut/instance.hpp"
#include "dccut/simplex.hpp"

namespace dccut {

inline constexpr double kTieTol = 1e-9;

inline double penalty_p(const Vector& x) {
  double p = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) p += std::min(x[i], 1.0 - x[i]);
  return p;
}

inline double penalty_p(const Point& u) { return penalty_p(u.x); }

inline double penalized_objective(const MblpInstance& inst, double t, const Point& u) {
  return evaluate_f(inst, u) + t * penalty_p(u);
}

enum class TieRule { deterministic, seeded_random };

/// z with z_i = +1 above 1/2, -1 below, tie handled per rule.
inline Vector penalty_direction(const Vector& x, TieRule rule, std::mt19937_64* rng,
                                double tie_tol = kTieTol) {
  Vector z(x.size());
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - 0.5) <= tie_tol) z[i] = (rule == TieRule::seeded_random && rng) ? draw(*rng) : 1.0;
    else z[i] = x[i] > 0.5 ? 1.0 : -1.0;
  }
  return z;
}

struct Subgradient {
  Vector v;  // over x
  Vector w;  // over y
};

/// An element (v, w) of the subdifferential of h at u: v = -c + t z, w = -d.
inline Subgradient subgradient_h(const MblpInstance& inst, double t, const Point& u,
                                 TieRule rule = TieRule::deterministic, std::mt19937_64* rng = nullptr,
                                 double tie_tol = kTieTol) {
  return {-inst.c() + t * penalty_direction(u.x, rule, rng, tie_tol), -inst.d()};
}

struct DcaOptions {
  double eps1 = 1e-6;
  double eps2 = 1e-3;
  int max_iter = 1000;
  TieRule tie_rule = TieRule::deterministic;
  std::uint64_t seed = 0;
  double tie_tol = kTieTol;
  bool ignore_objective = false;  // penalty-only problem (f == 0)
  SimplexOptions lp;
};

enum class DcaStatus { converged, max_iter };

struct DcaResult {
  Point point;
  double value = 0.0;        // penalized objective at point
  double plain_value = 0.0;  // f(point)
  int iterations = 0;
  bool certified_local_min = false;
  bool feasible = false;
  bool critical = false;     // point is LP-optimal for the linearization taken at itself
  DcaStatus status = DcaStatus::converged;
  std::vector<double> trace;  // penalized objective after every LP step
};

inline bool certify_local_min(const DcaResult& result, double tie_tol = kTieTol) {
  const Vector& x = result.point.x;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - 0.5) <= tie_tol) return false;
  return true;
}

namespace detail {

inline Vector dca_objective(const MblpInstance& inst, double t, const Vector& z, bool ignore_objective) {
  Vector obj = Vector::Zero(inst.n() + inst.q());
  if (!ignore_objective) obj = inst.stacked_cost();
  obj.head(inst.n()) -= t * z;
  return obj;
}

}  // namespace detail

/// DCA on min f + t p over K^k from u0. Throws LpFailure when an LP step fails
/// (K^k empty included).
inline DcaResult dca_solve(const PolyState& state, double t, const Point& u0, const DcaOptions& opt = {}) {
  const MblpInstance& inst = state.base();
  const int n = inst.n();
  const double f_weight = opt.ignore_objective ? 0.0 : 1.0;
  auto tau = [&](const Point& u) { return f_weight * evaluate_f(inst, u) + t * penalty_p(u); };

  std::mt19937_64 rng(opt.seed);
  LinearProgram lp = polytope_lp(state, Vector::Zero(n + inst.q()));

  DcaResult res;
  Vector u = u0.stacked();
  double tau_u = tau(u0);
  Vector z_used;
  res.status = DcaStatus::max_iter;
  while (res.iterations < opt.max_iter) {
    z_used = penalty_direction(u.head(n), opt.tie_rule, &rng, opt.tie_tol);
    lp.objective = detail::dca_objective(inst, t, z_used, opt.ignore_objective);
    const LpOutcome out = solve_lp(lp, opt.lp);
    if (!out.optimal()) throw LpFailure(out.status, "DCA step");
    ++res.iterations;
    const Vector u_next = out.solution;
    const double tau_next = tau(Point::from_stacked(u_next, n));
    res.trace.push_back(tau_next);
    const double d_tau = std::abs(tau_next - tau_u) / (std::abs(tau_next) + 1.0);
    const double d_x = (u_next - u).norm() / (u_next.norm() + 1.0);
    u = u_next;
    tau_u = tau_next;
    if (d_tau <= opt.eps1 || d_x <= opt.eps2) {
      res.status = DcaStatus::converged;
      break;
    }
  }

  res.point = Point::from_stacked(u, n);
  res.value = penalized_objective(inst, t, res.point);
  res.plain_value = evaluate_f(inst, res.point);
  res.certified_local_min = certify_local_min(res, opt.tie_tol);
  res.feasible = is_in_S(state, res.point);

  // Criticality: u must be optimal for the linearization at u itself.
  const Vector z_here = penalty_direction(res.point.x, TieRule::deterministic, nullptr, opt.tie_tol);
  bool same = z_used.size() == z_here.size();
  for (Eigen::Index i = 0; same && i < z_here.size(); ++i)
    if (std::abs(res.point.x[i] - 0.5) > opt.tie_tol && z_used[i] != z_here[i]) same = false;
  if (same) {
    res.critical = true;
  } else {
    lp.objective = detail::dca_objective(inst, t, z_here, opt.ignore_objective);
    const LpOutcome out = solve_lp(lp, opt.lp);
    if (out.optimal()) {
      const double at_u = lp.objective.dot(u);
      res.critical = at_u <= out.value + 1e-9 * (1.0 + std::abs(out.value));
    }
  }
  return res;
}

/// For binary x in u, re-optimizes y over K^k with x fixed. The result is a
/// vertex of K^k with the best y for that x. Returns nothing if the LP fails.
inline std::optional<Point> polish_feasible(const PolyState& state, const Point& u,
                                            const SimplexOptions& opt = {}) {
  const MblpInstance& inst = state.base();
  LinearProgram lp = polytope_lp(state, inst.stacked_cost());
  for (int i = 0; i < inst.n(); ++i) {
    const double xi = std::round(u.x[i]);
    lp.lower[i] = xi;
    lp.upper[i] = xi;
  }
  const LpOutcome out = solve_lp(lp, opt);
  if (!out.optimal()) return std::nullopt;
  Point p = Point::from_stacked(out.solution, inst.n());
  for (int i = 0; i < inst.n(); ++i) p.x[i] = std::round(u.x[i]);
  return p;
}

}  // namespace dccut
