// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dccut/dccut.hpp"
#include "support.hpp"

using namespace dccut;
using verify::Rational;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Point pt(std::initializer_list<double> x) {
  Vector v(x.size());
  int i = 0;
  for (double e : x) v[i++] = e;
  return Point(v, Vector(0));
}

Vector vec(std::initializer_list<double> x) { return pt(x).x; }

std::string rat(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

// Stored ">=" cut equals a'u <= r up to positive scaling.
bool matches_le(const Cut& cut, const Vector& a, double r, double tol) {
  const double s = a.cwiseAbs().maxCoeff();
  const double f = cut.coeffs.cwiseAbs().maxCoeff();
  return ((-a / s) - cut.coeffs / f).cwiseAbs().maxCoeff() <= tol && std::abs(-r / s - cut.rhs / f) <= tol;
}

SolverConfig config(Algorithm algo, int workers = 1, double time_limit = 60) {
  SolverConfig cfg;
  cfg.algo = algo;
  cfg.t = 500;
  cfg.eps = 0.01;
  cfg.nlap = 1;
  cfg.workers = workers;
  cfg.time_limit = time_limit;
  return cfg;
}

constexpr int kCorpusSize = 200;

// Shared between criteria 7 and 8.
struct CorpusRun {
  MblpInstance inst;
  verify::BruteForceResult bf;
  SolveReport rep;
};
std::vector<CorpusRun> corpus_runs;

Check criterion1(std::string& detail) {
  Check c;
  const auto t = Clock::now();
  const MblpInstance exa = testsupport::load("ex_a.mblp");
  const verify::VertexSet V = verify::enumerate_vertices(exa);
  const verify::T0Result t0 = verify::compute_t0(exa, V);
  const verify::T1Result t1 = verify::compute_t1(exa, V);
  c.require(t0.t0 == Rational(1, 3), "t0 = " + rat(t0.t0));
  c.require(t1.t1 == Rational(12), "t1 = " + rat(t1.t1));
  c.require(t0.alpha0 == Rational(-12, 5), "alpha0 = " + rat(t0.alpha0));
  c.require(t0.m == Rational(6, 5), "m = " + rat(t0.m));
  c.require(t1.M == Rational(12, 5), "M = " + rat(t1.M));
  c.require(t1.sigma == Rational(1, 5), "sigma = " + rat(t1.sigma));
  const double s = seconds_since(t);
  c.require(s < 1.0, "runtime " + std::to_string(s) + " s");
  detail = "t0=" + rat(t0.t0) + " t1=" + rat(t1.t1) + " alpha0=" + rat(t0.alpha0) + " m=" + rat(t0.m) +
           " M=" + rat(t1.M) + " sigma=" + rat(t1.sigma);
  return c;
}

Check criterion2(std::string& detail) {
  Check c;
  const auto t = Clock::now();
  const MblpInstance exa = testsupport::load("ex_a.mblp");
  const PolyState st(exa);
  const Point u0 = pt({0.6, 0.6, 0.6});
  DcaOptions opt;
  opt.tie_rule = TieRule::deterministic;
  const DcaResult small = dca_solve(st, 1.0, u0, opt);
  c.require(small.iterations <= 2, "t=1 took " + std::to_string(small.iterations) + " iterations");
  c.require((small.point.x - u0.x).cwiseAbs().maxCoeff() <= 1e-9, "t=1 moved away from u0");
  const DcaResult large = dca_solve(st, 13.0, u0, opt);
  c.require((large.point.x - vec({0, 1, 1})).cwiseAbs().maxCoeff() <= 1e-9, "t=13 did not reach (0,1,1)");
  const double s = seconds_since(t);
  c.require(s < 1.0, "runtime " + std::to_string(s) + " s");
  detail = "t=1: " + std::to_string(small.iterations) + " iterations; t=13: f=" +
           std::to_string(large.plain_value);
  return c;
}

Check criterion3(std::string& detail) {
  Check c;
  const MblpInstance exb = testsupport::load("ex_b.mblp");
  const verify::VertexSet V = verify::enumerate_vertices(exb);
  const verify::T0Result t0 = verify::compute_t0(exb, V);
  c.require(t0.t0 == Rational(3), "t0 = " + rat(t0.t0));
  const std::vector<Vector> want = {vec({0, 0}), vec({0.25, 0}), vec({0, 1}), vec({0.75, 1}), vec({1, 0.25})};
  c.require(V.size() == want.size(), std::to_string(V.size()) + " vertices");
  for (const Vector& w : want) {
    bool found = false;
    for (const Point& p : V.points) found = found || (p.x - w).cwiseAbs().maxCoeff() <= 1e-8;
    c.require(found, "missing vertex");
  }
  detail = "t0=" + rat(t0.t0) + ", " + std::to_string(V.size()) + " vertices";
  return c;
}

Check criterion4(std::string& detail) {
  Check c;
  const MblpInstance exb = testsupport::load("ex_b.mblp");
  const std::optional<Cut> a = dc_cut_type2(pt({0.75, 1}));
  const std::optional<Cut> b = dc_cut_type2(pt({1, 0.25}));
  c.require(a && a->coeffs == vec({-1, -1}) && a->rhs == -1.0, "type-II at (0.75,1) is not x1+x2<=1");
  c.require(b && b->coeffs == vec({-1, 1}) && b->rhs == 0.0, "type-II at (1,0.25) is not -x1+x2>=0");
  for (const Point& u : {pt({0, 0}), pt({0, 1})}) {
    const Cut cut = dc_cut_type1(u);
    const AffineL l = affine_l(u);
    c.require(cut.coeffs == l.coeffs && cut.rhs == 1.0 - l.constant, "type-I differs from l >= 1");
    c.require(verify::audit_cut(exb, cut, verify::AuditMode::better_than(evaluate_f(exb, u))).valid,
              "type-I fails better-than audit");
  }
  detail = "type-II cuts exact, type-I cuts pass better-than audit";
  return c;
}

Check criterion5(std::string& detail) {
  Check c;
  const MblpInstance exb = testsupport::load("ex_b.mblp");
  const PolyState st(exb);
  const std::optional<Cut> a = lap_cut(st, pt({0.75, 1}), 0);
  const std::optional<Cut> b = lap_cut(st, pt({1, 0.25}), 1);
  c.require(a && matches_le(*a, vec({3, 4}), 4, 1e-6), "cut at (0.75,1) is not 3x1+4x2<=4");
  c.require(b && matches_le(*b, vec({4, -2}), 1, 1e-6), "cut at (1,0.25) is not 4x1-2x2<=1");
  if (a) c.require(verify::audit_cut(exb, *a).valid, "first cut fails audit");
  if (b) c.require(verify::audit_cut(exb, *b).valid, "second cut fails audit");
  detail = "both cuts reproduced and valid";
  return c;
}

Check criterion6(std::string& detail) {
  Check c;
  const MblpInstance inst = testsupport::load("sample_10_0_10.mblp");
  const verify::BruteForceResult bf = verify::brute_force_solve(inst);
  c.require(bf.feasible && bf.value == 0.0, "brute force optimum " + std::to_string(bf.value));
  std::ostringstream os;
  os << "brute force " << bf.value << ";";
  for (Algorithm a : {Algorithm::dccut, Algorithm::dccut_v1, Algorithm::lapcut}) {
    const SolveReport r = dccut_solve(inst, config(a));
    c.require(r.ub == 0.0, std::string(to_string(a)) + " UB " + std::to_string(r.ub));
    c.require(r.status != SolveStatus::limit_reached, std::string(to_string(a)) + " hit a limit");
    c.require(r.wall_time < 60.0, std::string(to_string(a)) + " took " + std::to_string(r.wall_time) + " s");
    os << " " << to_string(a) << " UB=" << r.ub << " (" << r.iterations << " it, " << r.wall_time << " s)";
  }
  detail = os.str();
  return c;
}

Check criterion7(std::string& detail) {
  Check c;
  const auto t = Clock::now();
  int feasible = 0;
  for (int i = 0; i < kCorpusSize; ++i) {
    const MblpInstance inst = testsupport::random_instance(1 + i);
    const verify::BruteForceResult bf = verify::brute_force_solve(inst);
    const SolveReport rep = dccut_solve(inst, config(Algorithm::dccut));
    feasible += bf.feasible;
    const bool agree = bf.feasible ? std::abs(rep.ub - bf.value) <= 1e-6 : rep.status == SolveStatus::infeasible;
    c.require(agree, inst.name() + ": brute force " + std::to_string(bf.value) + ", solver " + std::to_string(rep.ub));
    corpus_runs.push_back({inst, bf, rep});
  }
  const double s = seconds_since(t);
  c.require(s < 600.0, "runtime " + std::to_string(s) + " s");
  detail = std::to_string(kCorpusSize) + " instances (" + std::to_string(feasible) + " feasible), " +
           std::to_string(c.failures.size()) + " disagreements, " + std::to_string(s) + " s";
  return c;
}

Check criterion8(std::string& detail) {
  Check c;
  int cuts = 0;
  for (const CorpusRun& run : corpus_runs) {
    const testsupport::CutAudit audit = testsupport::audit_solve_cuts(run.inst, run.rep);
    cuts += audit.checked;
    c.require(audit.failed == 0, audit.first_failure);
  }
  c.require(!corpus_runs.empty(), "corpus was not solved");
  detail = std::to_string(cuts) + " cuts audited";
  return c;
}

Check criterion9(std::string& detail) {
  Check c;
  std::vector<MblpInstance> set{testsupport::load("sample_10_0_10.mblp")};
  for (int i = 0; i < 20; ++i) set.push_back(testsupport::random_instance(1 + i));
  int runs = 0;
  for (const MblpInstance& inst : set) {
    const SolveReport serial = dccut_solve(inst, config(Algorithm::dccut));
    for (int w : {2, 4}) {
      const SolveReport par = dccut_solve(inst, config(Algorithm::dccut, w));
      ++runs;
      const bool same = (std::isinf(serial.ub) && std::isinf(par.ub)) || std::abs(serial.ub - par.ub) <= 1e-6;
      c.require(same, inst.name() + " workers=" + std::to_string(w) + ": UB " + std::to_string(par.ub) +
                          " vs serial " + std::to_string(serial.ub));
      c.require(par.ub <= serial.ub + 1e-6, inst.name() + ": parallel UB worse than serial");
    }
  }
  detail = std::to_string(runs) + " parallel runs on " + std::to_string(set.size()) + " instances";
  return c;
}

Check criterion10(std::string& detail) {
  Check c;
  const MblpInstance inst = testsupport::load("sample_30_0_10.mblp");
  const verify::BruteForceResult oracle = verify::dfs_solve_pure_binary(inst);
  c.require(oracle.feasible && oracle.value == -83.0, "oracle optimum " + std::to_string(oracle.value));
  const SolveReport r = dccut_solve(inst, config(Algorithm::dccut, 1, 30.0));
  double reached = -1.0;
  for (const TraceEntry& e : r.trace)
    if (e.ub <= -83.0 + 1e-6) {
      reached = e.time;
      break;
    }
  c.require(r.ub == -83.0, "UB " + std::to_string(r.ub));
  c.require(reached >= 0.0 && reached <= 30.0, "UB -83 not reached within 30 s");
  std::ostringstream os;
  os << "b = all tens; oracle " << oracle.value << "; UB " << r.ub << " reached at " << reached << " s (status "
     << to_string(r.status) << ", LB " << r.lb << ")";
  detail = os.str();
  return c;
}

}  // namespace

int main() {
  const std::vector<std::function<Check(std::string&)>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    Check c;
    const auto t = Clock::now();
    try {
      c = criteria[i](detail);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("criterion %2zu: %s  [%.2f s] %s\n", i + 1, ok ? "PASS" : "FAIL", seconds_since(t), detail.c_str());
    for (std::size_t k = 0; k < c.failures.size() && k < 5; ++k) std::printf("    %s\n", c.failures[k].c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
