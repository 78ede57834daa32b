#pragma once

// Run records and their serializations: JSON (versioned), plain text, and
// CSV traces and sweep rows.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dccut/instance.hpp"
#include "dccut/solver.hpp"

namespace dccut {

inline constexpr int kReportSchema = 1;

struct RunRecord {
  std::string instance;
  SolverConfig config;
  SolveReport report;
};

inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal:
    case SolveStatus::eps_optimal: return 0;
    case SolveStatus::infeasible: return 2;
    case SolveStatus::limit_reached: return 3;
  }
  return 1;
}

namespace detail {

/// JSON has no infinities; they are written as the strings "inf" / "-inf".
inline nlohmann::json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline nlohmann::json number(const std::optional<double>& v) {
  return v ? number(*v) : nlohmann::json(nullptr);
}

inline std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "NA"; }

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace detail

inline nlohmann::json to_json(const RunRecord& run) {
  using nlohmann::json;
  const SolverConfig& c = run.config;
  const SolveReport& r = run.report;
  json cfg = {{"algo", to_string(c.algo)},       {"t", c.t},
              {"eps", c.eps},                    {"nlap", c.nlap},
              {"workers", c.workers},            {"time_limit", detail::number(c.time_limit)},
              {"seed", c.seed},                  {"fbest", detail::number(c.fbest)}};
  json trace = json::array();
  for (const TraceEntry& e : r.trace)
    trace.push_back({{"k", e.k}, {"lb", detail::number(e.lb)}, {"ub", detail::number(e.ub)}, {"cuts_added", e.cuts_added}});
  json sol = nullptr;
  if (r.u_opt) sol = {{"x", detail::to_std(r.u_opt->x)}, {"y", detail::to_std(r.u_opt->y)}};
  return {{"schema", kReportSchema},
          {"instance", run.instance},
          {"config", cfg},
          {"status", to_string(r.status)},
          {"ub", detail::number(r.ub)},
          {"lb", detail::number(r.lb)},
          {"gap", detail::number(r.gap)},
          {"clgap", detail::number(r.clgap)},
          {"f0", detail::number(r.f0)},
          {"iterations", r.iterations},
          {"cuts", {{"dc1", r.cut_dc1}, {"dc2", r.cut_dc2}, {"lap", r.cut_lap}}},
          {"wall_time", r.wall_time},
          {"solution", sol},
          {"trace", trace},
          {"warnings", r.warnings}};
}

inline std::string to_text(const RunRecord& run) {
  const SolveReport& r = run.report;
  std::ostringstream os;
  os << "instance   " << run.instance << "\n"
     << "algorithm  " << to_string(run.config.algo) << " (t=" << detail::fmt(run.config.t)
     << ", eps=" << detail::fmt(run.config.eps) << ", nlap=" << run.config.nlap
     << ", workers=" << run.config.workers << ")\n"
     << "status     " << to_string(r.status) << "\n"
     << "UB         " << detail::fmt(r.ub) << "\n"
     << "LB         " << detail::fmt(r.lb) << "\n"
     << "gap        " << detail::fmt(r.gap) << "\n"
     << "clgap      " << detail::fmt(r.clgap) << "\n"
     << "iterations " << r.iterations << "\n"
     << "cuts       dc1=" << r.cut_dc1 << " dc2=" << r.cut_dc2 << " lap=" << r.cut_lap << "\n"
     << "time       " << detail::fmt(r.wall_time) << " s\n";
  if (r.u_opt) {
    os << "x         ";
    for (Eigen::Index i = 0; i < r.u_opt->x.size(); ++i) os << ' ' << detail::fmt(r.u_opt->x[i]);
    os << "\n";
    if (r.u_opt->q() > 0) {
      os << "y         ";
      for (Eigen::Index i = 0; i < r.u_opt->y.size(); ++i) os << ' ' << detail::fmt(r.u_opt->y[i]);
      os << "\n";
    }
  }
  for (const std::string& w : r.warnings) os << "warning    " << w << "\n";
  return os.str();
}

/// Per-iteration trace as CSV.
inline std::string trace_csv(const SolveReport& r) {
  std::string out = "k,lb,ub,cuts_added\n";
  for (const TraceEntry& e : r.trace)
    out += std::to_string(e.k) + "," + detail::fmt(e.lb) + "," + detail::fmt(e.ub) + "," +
           std::to_string(e.cuts_added) + "\n";
  return out;
}

inline constexpr const char* kSweepHeader = "nlap,algo,clgap,gap,ub,time_s";

struct SweepRow {
  int nlap = 0;
  Algorithm algo = Algorithm::dccut;
  std::optional<SolveReport> report;  // empty when the cell failed
};

inline std::string sweep_row_csv(const SweepRow& row) {
  std::string out = std::to_string(row.nlap) + "," + to_string(row.algo) + ",";
  if (!row.report) return out + "NA,NA,NA,NA";
  const SolveReport& r = *row.report;
  return out + detail::fmt(r.clgap) + "," + detail::fmt(r.gap) + "," + detail::fmt(r.ub) + "," +
         detail::fmt(r.wall_time);
}

}  // namespace dccut
