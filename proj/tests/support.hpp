#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dccut/instance.hpp"
#include "dccut/instance_io.hpp"
#include "dccut/solver.hpp"
#include "dccut/verify.hpp"

namespace testsupport {

inline std::string data_path(const std::string& name) { return std::string(DCCUT_DATA_DIR) + "/" + name; }

inline dccut::MblpInstance load(const std::string& name) {
  dccut::MblpInstance inst = dccut::parse_instance(dccut::read_text_file(data_path(name)));
  inst.set_name(name);
  return inst;
}

/// Random instance with integer data in [-10, 10]. Three out of four instances
/// have rhs raised so that a planted point is feasible.
inline dccut::MblpInstance random_instance(std::uint64_t seed, int max_n = 12, int max_q = 4, int max_m = 10) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = uni(2, max_n);
  const int q = uni(0, max_q);
  const int m = uni(1, max_m);
  dccut::Vector c(n), d(q), b(m), ybar(q);
  dccut::Matrix A(m, n), B(m, q);
  for (int i = 0; i < n; ++i) c[i] = uni(-10, 10);
  for (int j = 0; j < q; ++j) d[j] = uni(-10, 10);
  for (int j = 0; j < q; ++j) ybar[j] = uni(1, 10);
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) A(r, i) = uni(-10, 10);
    for (int j = 0; j < q; ++j) B(r, j) = uni(-10, 10);
    b[r] = uni(-10, 10);
  }
  if (seed % 4 != 0) {
    dccut::Vector xh(n), yh(q);
    for (int i = 0; i < n; ++i) xh[i] = uni(0, 1);
    for (int j = 0; j < q; ++j) yh[j] = std::uniform_real_distribution<double>(0.0, ybar[j])(rng);
    const dccut::Vector act = A * xh + B * yh;
    for (int r = 0; r < m; ++r) b[r] = std::min(10.0, std::max(b[r], std::ceil(act[r])));
  }
  return dccut::MblpInstance(c, d, A, B, b, ybar, "random-" + std::to_string(seed));
}

inline std::vector<dccut::MblpInstance> corpus(int count, std::uint64_t first_seed = 1) {
  std::vector<dccut::MblpInstance> out;
  for (int i = 0; i < count; ++i) out.push_back(random_instance(first_seed + i));
  return out;
}

/// K^k as it was when the cut at `index` was generated.
inline dccut::PolyState generation_state(const dccut::MblpInstance& inst, const dccut::SolveReport& rep,
                                         std::size_t index) {
  const std::size_t before = dccut::cuts_before(rep, index);
  return dccut::PolyState(inst, std::vector<dccut::Cut>(rep.cuts.begin(), rep.cuts.begin() + before));
}

/// Audits every cut of a finished solve: dc2 and lap cuts over S^k at their
/// generation, dc1 cuts in better-than mode at the value of their source.
struct CutAudit {
  int checked = 0;
  int failed = 0;
  std::string first_failure;
};

inline CutAudit audit_solve_cuts(const dccut::MblpInstance& inst, const dccut::SolveReport& rep) {
  using namespace dccut;
  CutAudit audit;
  for (std::size_t i = 0; i < rep.cuts.size(); ++i) {
    const Cut& cut = rep.cuts[i];
    const PolyState st = generation_state(inst, rep, i);
    const verify::AuditMode mode = cut.kind == CutKind::dc1
                                       ? verify::AuditMode::better_than(evaluate_f(inst, cut.source))
                                       : verify::AuditMode::global();
    const verify::AuditVerdict v = verify::audit_cut(st, cut, mode);
    ++audit.checked;
    if (!v.valid) {
      ++audit.failed;
      if (audit.first_failure.empty())
        audit.first_failure = inst.name() + " cut " + std::to_string(i) + " (" + to_string(cut.kind) +
                              ") violated by " + std::to_string(v.worst_violation);
    }
  }
  return audit;
}

}  // namespace testsupport
