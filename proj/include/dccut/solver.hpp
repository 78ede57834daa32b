#pragma once

// Cutting-plane loop: relaxation bound, DCA from the relaxation optimum,
// DC cuts at DCA points, lift-and-project cuts at fractional points.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dccut/cutgen.hpp"
#include "dccut/dca.hpp"
#include "dccut/instance.hpp"
#include "dccut/simplex.hpp"

namespace dccut {

enum class Algorithm { lapcut, dccut, dccut_v1 };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::lapcut: return "lapcut";
    case Algorithm::dccut: return "dccut";
    case Algorithm::dccut_v1: return "dccut-v1";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "lapcut") return Algorithm::lapcut;
  if (s == "dccut") return Algorithm::dccut;
  if (s == "dccut-v1") return Algorithm::dccut_v1;
  return std::nullopt;
}

struct SolverConfig {
  Algorithm algo = Algorithm::dccut;
  double t = 500.0;
  double eps = 0.01;
  int nlap = 1;
  int workers = 1;
  double time_limit = kInf;  // seconds, checked between iterations
  std::uint64_t seed = 0;
  std::optional<double> fbest;
  int max_iterations = 100000;
  bool ptilde_cuts = false;  // also try type-II cuts from the penalty-only problem
  DcaOptions dca;
  LapOptions lap;
  SimplexOptions lp;

  void validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (nlap < 0) throw std::invalid_argument("nlap must be nonnegative");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  }
};

enum class SolveStatus { optimal, eps_optimal, infeasible, limit_reached };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::eps_optimal: return "eps-optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::limit_reached: return "limit-reached";
  }
  return "?";
}

struct TraceEntry {
  int k = 0;
  double lb = -kInf;
  double ub = kInf;
  int cuts_added = 0;
  double time = 0.0;  // seconds since the solve started
};

struct SolveReport {
  SolveStatus status = SolveStatus::limit_reached;
  double ub = kInf;
  double lb = -kInf;
  std::optional<Point> u_opt;
  double gap = kInf;
  std::optional<double> clgap;
  std::optional<double> f0;
  int iterations = 0;
  int cut_dc1 = 0;
  int cut_dc2 = 0;
  int cut_lap = 0;
  double wall_time = 0.0;
  std::vector<TraceEntry> trace;
  std::vector<Cut> cuts;  // in the order they entered K^k
  std::vector<std::string> warnings;

  int total_cuts() const { return cut_dc1 + cut_dc2 + cut_lap; }
};

inline double compute_gap(double ub, double lb) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  return (ub - lb) / (std::max(std::abs(ub), std::abs(lb)) + 1.0);
}

/// Fraction of the gap between the first relaxation and fbest closed by lb;
/// nothing when fbest == f0.
inline std::optional<double> compute_clgap(double lb, double f0, double fbest) {
  if (fbest == f0 || !std::isfinite(lb) || !std::isfinite(f0) || !std::isfinite(fbest)) return std::nullopt;
  return (lb - f0) / (fbest - f0);
}

/// What one iteration contributes before merging.
struct IterationOutput {
  std::vector<Cut> cuts;
  std::vector<Point> ub_candidates;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1) + 0xbf58476d1ce4e5b9ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct DcaPhase {
  std::vector<Cut> cuts;
  std::optional<Point> incumbent;
  std::optional<Point> lap_source;  // infeasible DCA point that still wants L&P cuts
  std::vector<std::string> warnings;
};

inline DcaPhase run_dca_phase(const PolyState& state, const SolverConfig& cfg, const Point& start, int k,
                              std::uint64_t stream) {
  DcaPhase out;
  DcaOptions opt = cfg.dca;
  opt.seed = mix_seed(cfg.seed, k, stream);
  opt.lp = cfg.lp;
  const DcaResult res = dca_solve(state, cfg.t, start, opt);
  if (res.status == DcaStatus::max_iter)
    out.warnings.push_back("iteration " + std::to_string(k) + ": DCA hit its iteration limit");

  if (res.feasible) {
    Point best = res.point;
    for (int i = 0; i < best.n(); ++i) best.x[i] = std::round(best.x[i]);
    if (state.base().q() > 0) {
      if (auto polished = polish_feasible(state, best, cfg.lp)) best = *polished;
    }
    out.incumbent = best;
    out.cuts.push_back(dc_cut_type1(best, k));
  } else {
    std::optional<Cut> dc2;
    if (res.certified_local_min && res.critical) dc2 = dc_cut_type2(res.point, opt.tie_tol, kIntegralityTol, k);
    if (dc2) out.cuts.push_back(*dc2);
    if (cfg.algo == Algorithm::dccut_v1 || !dc2) out.lap_source = res.point;
  }

  if (cfg.ptilde_cuts) {
    DcaOptions popt = opt;
    popt.ignore_objective = true;
    const DcaResult pres = dca_solve(state, cfg.t, start, popt);
    if (!pres.feasible && pres.certified_local_min && pres.critical) {
      if (auto dc2 = dc_cut_type2(pres.point, opt.tie_tol, kIntegralityTol, k)) out.cuts.push_back(*dc2);
    }
  }
  return out;
}

struct LapTask {
  Point source;
  int j = 0;
};

inline void add_lap_tasks(std::vector<LapTask>& tasks, const Point& source, int nlap) {
  for (int j : select_fractional_indices(source.x, nlap)) tasks.push_back({source, j});
}

inline std::optional<Cut> run_lap_task(const PolyState& state, const SolverConfig& cfg, const LapTask& task, int k,
                                       std::vector<std::string>& warnings) {
  LapOptions opt = cfg.lap;
  opt.lp = cfg.lp;
  try {
    return lap_cut(state, task.source, task.j, k, opt);
  } catch (const CutGenerationError& e) {
    warnings.push_back("iteration " + std::to_string(k) + ": L&P index " + std::to_string(task.j) + ": " + e.what());
    return std::nullopt;
  }
}

inline Point random_box_point(const MblpInstance& inst, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point p = inst.zero_point();
  for (int i = 0; i < inst.n(); ++i) p.x[i] = unit(rng);
  for (int j = 0; j < inst.q(); ++j) p.y[j] = unit(rng) * inst.ybar()[j];
  return p;
}

}  // namespace detail

/// One serial iteration at relaxation optimum u0 over K^k.
inline IterationOutput serial_iteration(const PolyState& state, const SolverConfig& cfg, const Point& u0, int k) {
  IterationOutput out;
  std::vector<detail::LapTask> tasks;
  detail::add_lap_tasks(tasks, u0, cfg.nlap);
  for (const auto& task : tasks)
    if (auto cut = detail::run_lap_task(state, cfg, task, k, out.warnings)) out.cuts.push_back(*cut);
  if (cfg.algo == Algorithm::lapcut) return out;

  detail::DcaPhase phase;
  try {
    phase = detail::run_dca_phase(state, cfg, u0, k, 0);
  } catch (const LpFailure& e) {
    out.warnings.push_back("iteration " + std::to_string(k) + ": " + e.what());
    return out;
  }
  out.warnings.insert(out.warnings.end(), phase.warnings.begin(), phase.warnings.end());
  out.cuts.insert(out.cuts.end(), phase.cuts.begin(), phase.cuts.end());
  if (phase.incumbent) out.ub_candidates.push_back(*phase.incumbent);
  if (phase.lap_source) {
    tasks.clear();
    detail::add_lap_tasks(tasks, *phase.lap_source, cfg.nlap);
    for (const auto& task : tasks)
      if (auto cut = detail::run_lap_task(state, cfg, task, k, out.warnings)) out.cuts.push_back(*cut);
  }
  return out;
}

/// One iteration with cfg.workers threads. Worker 0 starts DCA at u0, the others
/// at seeded random points of the box; L&P tasks are dealt round-robin. Results
/// are merged by (worker, task) so the outcome does not depend on scheduling.
inline IterationOutput parallel_iteration(const PolyState& state, const SolverConfig& cfg, const Point& u0, int k) {
  const int s = cfg.workers;
  IterationOutput out;
  std::vector<detail::DcaPhase> phases(s);
  std::vector<std::string> failures(s);

  if (cfg.algo != Algorithm::lapcut) {
    std::vector<std::thread> pool;
    for (int w = 0; w < s; ++w) {
      pool.emplace_back([&, w] {
        try {
          const Point start =
              w == 0 ? u0 : detail::random_box_point(state.base(), detail::mix_seed(cfg.seed, k, 1000 + w));
          phases[w] = detail::run_dca_phase(state, cfg, start, k, w);
        } catch (const std::exception& e) {
          failures[w] = e.what();
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<detail::LapTask> tasks;
  detail::add_lap_tasks(tasks, u0, cfg.nlap);
  for (int w = 0; w < s; ++w)
    if (failures[w].empty() && phases[w].lap_source) detail::add_lap_tasks(tasks, *phases[w].lap_source, cfg.nlap);

  std::vector<std::optional<Cut>> lap_results(tasks.size());
  std::vector<std::vector<std::string>> lap_warnings(s);
  std::vector<std::string> lap_failures(s);
  {
    std::vector<std::thread> pool;
    for (int w = 0; w < s; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < tasks.size(); i += s)
            lap_results[i] = detail::run_lap_task(state, cfg, tasks[i], k, lap_warnings[w]);
        } catch (const std::exception& e) {
          lap_failures[w] = e.what();
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (int w = 0; w < s; ++w) {
    if (!failures[w].empty()) {
      out.warnings.push_back("iteration " + std::to_string(k) + ": worker " + std::to_string(w + 1) +
                             " DCA failed: " + failures[w]);
      continue;
    }
    const auto& ph = phases[w];
    out.warnings.insert(out.warnings.end(), ph.warnings.begin(), ph.warnings.end());
    out.cuts.insert(out.cuts.end(), ph.cuts.begin(), ph.cuts.end());
    if (ph.incumbent) out.ub_candidates.push_back(*ph.incumbent);
  }
  for (int w = 0; w < s; ++w) {
    if (!lap_failures[w].empty()) {
      out.warnings.push_back("iteration " + std::to_string(k) + ": worker " + std::to_string(w + 1) +
                             " L&P failed: " + lap_failures[w]);
      continue;
    }
    out.warnings.insert(out.warnings.end(), lap_warnings[w].begin(), lap_warnings[w].end());
    for (std::size_t i = w; i < tasks.size(); i += s)
      if (lap_results[i]) out.cuts.push_back(*lap_results[i]);
  }
  return out;
}

inline SolveReport dccut_solve(const MblpInstance& inst, const SolverConfig& cfg = {}) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - started).count(); };

  SolveReport rep;
  PolyState state(inst);
  const PolyState original(inst);
  bool decided = false;

  auto offer = [&](Point cand) {
    for (int i = 0; i < cand.n(); ++i) cand.x[i] = std::round(cand.x[i]);
    if (!is_in_S(original, cand)) {
      rep.warnings.push_back("iteration " + std::to_string(state.iteration()) +
                             ": candidate rejected by original feasibility check");
      return;
    }
    const double f = evaluate_f(inst, cand);
    if (f < rep.ub) {
      rep.ub = f;
      rep.u_opt = cand;
    }
  };

  const Vector cost = inst.stacked_cost();
  int k = 0;
  while (rep.ub - rep.lb >= cfg.eps || !std::isfinite(rep.ub)) {
    if (elapsed() > cfg.time_limit || k >= cfg.max_iterations) {
      rep.status = SolveStatus::limit_reached;
      decided = true;
      break;
    }
    const LpOutcome relax = solve_lp(polytope_lp(state, cost), cfg.lp);
    if (relax.status == LpStatus::infeasible) {
      rep.status = (k > 0 && rep.u_opt) ? SolveStatus::optimal : SolveStatus::infeasible;
      decided = true;
      break;
    }
    if (!relax.optimal()) throw LpFailure(relax.status, "relaxation at iteration " + std::to_string(k));
    const Point u0 = Point::from_stacked(relax.solution, inst.n());
    if (relax.value > rep.lb) rep.lb = relax.value;
    if (k == 0) rep.f0 = relax.value;

    if (is_in_S(state, u0)) {
      // u0 is binary up to tolerance, so its rounding attains the minimum over K^k.
      Point rounded = u0;
      for (int i = 0; i < rounded.n(); ++i) rounded.x[i] = std::round(rounded.x[i]);
      rep.lb = std::max(rep.lb, evaluate_f(inst, rounded));
      offer(rounded);
      rep.status = SolveStatus::optimal;
      decided = true;
      rep.trace.push_back({k, rep.lb, rep.ub, 0, elapsed()});
      break;
    }

    IterationOutput it = cfg.workers > 1 ? parallel_iteration(state, cfg, u0, k) : serial_iteration(state, cfg, u0, k);
    rep.warnings.insert(rep.warnings.end(), it.warnings.begin(), it.warnings.end());
    for (const Point& cand : it.ub_candidates) offer(cand);
    std::vector<Cut> fresh = drop_dominated(pool_dedupe(it.cuts), state.cuts());

    if (fresh.empty()) {
      // No progress from the regular generators: try every fractional index of
      // u0 without the minimum-fractionality floor.
      std::vector<int> idx = select_fractional_indices(u0.x, inst.n(), kIntegralityTol);
      LapOptions opt = cfg.lap;
      opt.lp = cfg.lp;
      opt.min_frac = kIntegralityTol;
      for (int j : idx) {
        std::optional<Cut> cut;
        try {
          cut = lap_cut(state, u0, j, k, opt);
        } catch (const CutGenerationError& e) {
          rep.warnings.push_back("iteration " + std::to_string(k) + ": fallback L&P: " + e.what());
        }
        if (cut) fresh = drop_dominated({*cut}, state.cuts());
        if (!fresh.empty()) break;
      }
    }
    if (fresh.empty()) {
      // u0 sits too close to a binary point to be separated; its rounding may
      // still be a usable incumbent.
      if (const std::optional<Point> p = polish_feasible(state, u0, cfg.lp); p && is_in_S(state, *p)) offer(*p);
      if (rep.ub - rep.lb < cfg.eps) {
        rep.status = SolveStatus::eps_optimal;
      } else {
        rep.warnings.push_back("iteration " + std::to_string(k) + ": no violated cut found, stopping");
        rep.status = SolveStatus::limit_reached;
      }
      decided = true;
      rep.trace.push_back({k, rep.lb, rep.ub, 0, elapsed()});
      break;
    }

    for (Cut& c : fresh) {
      if (c.kind == CutKind::dc1) ++rep.cut_dc1;
      else if (c.kind == CutKind::dc2) ++rep.cut_dc2;
      else ++rep.cut_lap;
      rep.cuts.push_back(c);
      state.append(std::move(c));
    }
    rep.trace.push_back({k, rep.lb, rep.ub, static_cast<int>(fresh.size()), elapsed()});
    ++k;
    state.set_iteration(k);
  }
  if (!decided) rep.status = SolveStatus::eps_optimal;

  rep.iterations = k;
  rep.gap = compute_gap(rep.ub, rep.lb);
  if (cfg.fbest && rep.f0) rep.clgap = compute_clgap(rep.lb, *rep.f0, *cfg.fbest);
  rep.wall_time = elapsed();
  return rep;
}

/// Number of cuts that were in K^k when the cut at `index` was generated.
inline std::size_t cuts_before(const SolveReport& rep, std::size_t index) {
  const int k = rep.cuts.at(index).iteration;
  std::size_t count = 0;
  while (count < rep.cuts.size() && rep.cuts[count].iteration < k) ++count;
  return count;
}

}  // namespace dccut
