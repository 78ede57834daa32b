#include <catch_amalgamated.hpp>

#include "dccut/solver.hpp"
#include "support.hpp"

using namespace dccut;

namespace {

SolverConfig config(Algorithm algo, int workers = 1) {
  SolverConfig cfg;
  cfg.algo = algo;
  cfg.workers = workers;
  cfg.time_limit = 60;
  return cfg;
}

}  // namespace

TEST_CASE("algorithm names round-trip", "[solver]") {
  for (Algorithm a : {Algorithm::lapcut, Algorithm::dccut, Algorithm::dccut_v1})
    CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_FALSE(parse_algorithm("simplex"));
}

TEST_CASE("gap and closed gap", "[solver]") {
  CHECK(compute_gap(-1.0, -1.75) == Catch::Approx(0.75 / 2.75));
  CHECK(compute_gap(0.0, 0.0) == 0.0);
  CHECK(compute_gap(kInf, 0.0) == kInf);
  CHECK(*compute_clgap(-1.5, -2.0, -1.0) == Catch::Approx(0.5));
  CHECK_FALSE(compute_clgap(-1.0, -1.0, -1.0));
}

TEST_CASE("invalid configuration is rejected", "[solver]") {
  const MblpInstance exb = testsupport::load("ex_b.mblp");
  SolverConfig cfg;
  cfg.eps = 0;
  CHECK_THROWS_AS(dccut_solve(exb, cfg), std::invalid_argument);
  cfg = {};
  cfg.workers = 0;
  CHECK_THROWS_AS(dccut_solve(exb, cfg), std::invalid_argument);
}

TEST_CASE("Ex-A and Ex-B with every algorithm", "[solver]") {
  for (Algorithm a : {Algorithm::lapcut, Algorithm::dccut, Algorithm::dccut_v1}) {
    const SolveReport b = dccut_solve(testsupport::load("ex_b.mblp"), config(a));
    CHECK(b.ub == -1.0);
    CHECK(b.status != SolveStatus::limit_reached);
    REQUIRE(b.u_opt);
    CHECK(b.u_opt->x == Vector::Map(std::vector<double>{0, 1}.data(), 2));
    CHECK(*b.f0 == Catch::Approx(-1.75));

    const SolveReport a_rep = dccut_solve(testsupport::load("ex_a.mblp"), config(a));
    CHECK(a_rep.ub == -2.0);
  }
}

TEST_CASE("infeasible instance", "[solver]") {
  const SolveReport r = dccut_solve(testsupport::load("infeasible.mblp"));
  CHECK(r.status == SolveStatus::infeasible);
  CHECK_FALSE(r.u_opt);
  CHECK(r.ub == kInf);
}

TEST_CASE("bounds are monotone and UB is attained", "[solver]") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const MblpInstance inst = testsupport::random_instance(seed);
    const SolveReport r = dccut_solve(inst, config(Algorithm::dccut));
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i].lb >= r.trace[i - 1].lb);
      CHECK(r.trace[i].ub <= r.trace[i - 1].ub);
    }
    if (r.u_opt) {
      CHECK(is_in_S(PolyState(inst), *r.u_opt));
      CHECK(evaluate_f(inst, *r.u_opt) == r.ub);
    }
    CHECK(r.total_cuts() == static_cast<int>(r.cuts.size()));
  }
}

TEST_CASE("corpus sample agrees with brute force and cuts pass audit", "[solver]") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const MblpInstance inst = testsupport::random_instance(seed);
    const verify::BruteForceResult bf = verify::brute_force_solve(inst);
    for (Algorithm a : {Algorithm::dccut, Algorithm::dccut_v1, Algorithm::lapcut}) {
      const SolveReport r = dccut_solve(inst, config(a));
      INFO("seed " << seed << " algo " << to_string(a));
      if (bf.feasible) {
        CHECK(r.ub == Catch::Approx(bf.value).margin(1e-6));
      } else {
        CHECK(r.status == SolveStatus::infeasible);
      }
      const testsupport::CutAudit audit = testsupport::audit_solve_cuts(inst, r);
      CHECK(audit.failed == 0);
    }
  }
}

TEST_CASE("serial solves are deterministic", "[solver]") {
  const MblpInstance inst = testsupport::load("sample_10_0_10.mblp");
  const SolveReport a = dccut_solve(inst, config(Algorithm::dccut));
  const SolveReport b = dccut_solve(inst, config(Algorithm::dccut));
  CHECK(a.ub == b.ub);
  CHECK(a.lb == b.lb);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.cuts.size() == b.cuts.size());
  for (std::size_t i = 0; i < a.cuts.size(); ++i) CHECK(a.cuts[i].coeffs == b.cuts[i].coeffs);
}

TEST_CASE("parallel solves are deterministic and match serial", "[solver]") {
  const MblpInstance inst = testsupport::load("sample_10_0_10.mblp");
  const SolveReport serial = dccut_solve(inst, config(Algorithm::dccut));
  for (int w : {2, 4}) {
    const SolveReport a = dccut_solve(inst, config(Algorithm::dccut, w));
    const SolveReport b = dccut_solve(inst, config(Algorithm::dccut, w));
    CHECK(a.ub == serial.ub);
    CHECK(a.ub == b.ub);
    CHECK(a.iterations == b.iterations);
    CHECK(a.cuts.size() == b.cuts.size());
  }
}

TEST_CASE("sample_10_0_10 reaches its optimum", "[solver]") {
  const MblpInstance inst = testsupport::load("sample_10_0_10.mblp");
  CHECK(verify::brute_force_solve(inst).value == 0.0);
  for (Algorithm a : {Algorithm::lapcut, Algorithm::dccut, Algorithm::dccut_v1}) {
    SolverConfig cfg = config(a);
    cfg.fbest = 0.0;
    const SolveReport r = dccut_solve(inst, cfg);
    INFO(to_string(a));
    CHECK(r.ub == 0.0);
    CHECK(r.status != SolveStatus::limit_reached);
    REQUIRE(r.clgap);
    CHECK(*r.clgap > 0.9);
    CHECK(r.gap <= cfg.eps);
  }
}

TEST_CASE("iteration limit yields limit-reached", "[solver]") {
  const MblpInstance inst = testsupport::load("sample_10_0_10.mblp");
  SolverConfig cfg = config(Algorithm::lapcut);
  cfg.max_iterations = 1;
  const SolveReport r = dccut_solve(inst, cfg);
  CHECK(r.status == SolveStatus::limit_reached);
  CHECK(r.iterations == 1);
}

TEST_CASE("cuts_before counts earlier iterations only", "[solver]") {
  const SolveReport r = dccut_solve(testsupport::load("sample_10_0_10.mblp"), config(Algorithm::dccut));
  REQUIRE_FALSE(r.cuts.empty());
  for (std::size_t i = 0; i < r.cuts.size(); ++i) {
    const std::size_t before = cuts_before(r, i);
    CHECK(before <= i);
    for (std::size_t j = 0; j < before; ++j) CHECK(r.cuts[j].iteration < r.cuts[i].iteration);
  }
}

TEST_CASE("lapcut with several cuts per point finds the incumbent", "[solver]") {
  // The relaxation ends within about 1e-6 of a binary point that no cut separates.
  const MblpInstance inst = testsupport::load("sample_10_0_10.mblp");
  for (int nlap : {3, 5}) {
    SolverConfig cfg = config(Algorithm::lapcut);
    cfg.nlap = nlap;
    const SolveReport r = dccut_solve(inst, cfg);
    CHECK(r.ub == 0.0);
    CHECK(r.status == SolveStatus::eps_optimal);
  }
}

TEST_CASE("an integral relaxation closes the gap exactly", "[solver]") {
  SolverConfig cfg = config(Algorithm::lapcut);
  const SolveReport r = dccut_solve(testsupport::load("sample_10_0_10.mblp"), cfg);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.lb == r.ub);
}
