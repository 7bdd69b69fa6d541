// Copyright 2026 The qcsp-clock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria. `acceptance 3 5` runs a subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "../support/oracles.hpp"
#include "qcsp/compiler.hpp"
#include "qcsp/corpus.hpp"
#include "qcsp/decider.hpp"
#include "qcsp/history.hpp"
#include "qcsp/reduction.hpp"

namespace {

using namespace qcsp;

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];
template <typename... A>
std::string fmt(const char *f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// ---------------------------------------------------------------- 1

bool in_ring(const ExactScalar &x) {
  // Reconstruct (a + ib + sqrt2 c + i sqrt2 d) / 2^k in floating point and
  // compare with the canonical value.
  const auto f = x.dyadic_form();
  if (f.k < 0) return false;
  const double s = std::ldexp(1.0, -f.k);
  const std::complex<double> v(f.a.convert_to<double>() * s + M_SQRT2 * f.c.convert_to<double>() * s,
                               f.b.convert_to<double>() * s + M_SQRT2 * f.d.convert_to<double>() * s);
  return std::abs(v - x.to_complex()) <= 1e-9 * std::max(1.0, std::abs(v));
}

bool matrix_in_ring(const ExactMatrix &m) {
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c)
      if (!in_ring(m(r, c))) return false;
  return true;
}

Outcome criterion1() {
  const auto &gates = builtin_gate_set(Variant::BQP1);
  for (const auto &g : gates) {
    if (!matrix_in_ring(g.matrix)) return {false, g.id + " has an entry outside the ring"};
    for (int x = 0; x < g.matrix.dim(); ++x) {
      int support = 0;
      for (int r = 0; r < g.matrix.dim(); ++r) support += !g.matrix(r, x).is_zero();
      if (support < 2) return {false, g.id + " maps a classical basis state to a classical state"};
    }
  }
  // 1000 random products of at most 20 gates on two qubits; floating
  // products are the reference.
  std::mt19937_64 rng(20260101);
  const auto moves = oracle::all_moves(Variant::BQP1, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    Circuit c{Variant::BQP1, 2, {InitTag::Zero, InitTag::Zero}, {}, {0}};
    const int len = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < len; ++i) c.gates.push_back(moves[rng() % moves.size()]);
    const ExactMatrix u = oracle::circuit_unitary(c);
    if (!matrix_in_ring(u)) return {false, fmt("product %d leaves the ring", trial)};
    if (!u.is_unitary()) return {false, fmt("product %d is not exactly unitary", trial)};
    Eigen::Matrix4cd f = Eigen::Matrix4cd::Identity();
    for (const auto &g : c.gates) {
      const GateSpec *s = find_gate(Variant::BQP1, g.gate);
      const auto e = s->matrix.to_complex();
      Eigen::Matrix4cd full;
      if (s->arity == 2) {
        Eigen::Matrix4cd m;
        for (int r = 0; r < 4; ++r)
          for (int cc = 0; cc < 4; ++cc) m(r, cc) = e[r * 4 + cc];
        Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
        swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1;
        full = g.qubits[0] == 0 ? m : Eigen::Matrix4cd(swap * m * swap);
      } else {
        Eigen::Matrix2cd m;
        m << e[0], e[1], e[2], e[3];
        full = g.qubits[0] == 0 ? Eigen::Matrix4cd(Eigen::kroneckerProduct(m, Eigen::Matrix2cd::Identity()))
                                : Eigen::Matrix4cd(Eigen::kroneckerProduct(Eigen::Matrix2cd::Identity(), m));
      }
      f = full * f;
    }
    const auto uc = u.to_complex();
    for (int r = 0; r < 4; ++r)
      for (int cc = 0; cc < 4; ++cc)
        if (std::abs(uc[r * 4 + cc] - f(r, cc)) > 1e-9) return {false, fmt("product %d disagrees with floats", trial)};
  }
  return {true, fmt("%zu gates, 1000 products", gates.size())};
}

// ---------------------------------------------------------------- 2

Outcome criterion2() {
  double worst = 0.0;
  int vectors = 0;
  for (const auto &g : builtin_gate_set(Variant::BQP1)) {
    // 2-qubit form: H and HT padded with the identity on a second wire.
    const GateSpec spec = g.arity == 2 ? g : GateSpec{g.id, 2, g.matrix.kron(ExactMatrix::identity(2))};
    const ClauseOperator op = build_clause_operator(ClauseKind::PropU, &spec, 13);
    SparseOperator h(SiteSpace::uniform(5, 13));
    for (const auto &t : op.terms) h.add(t);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        Vec v = oracle::propu_kernel_vector(spec.matrix, 2, {x, y}, 13);
        v.normalize();
        worst = std::max(worst, h.apply(v).norm());
        ++vectors;
      }
  }
  return {worst <= 1e-12, fmt("%d vectors, worst residual %.2e", vectors, worst)};
}

// ---------------------------------------------------------------- 3, 4

double history_residual(const Circuit &c) {
  const HistoryState hs = build_history_state(c);
  HamiltonianOptions ho;
  const SparseOperator h = total_hamiltonian(hs.instance, ho);
  if (h.space().basis != hs.space.basis) return 1e9;
  return h.apply(hs.psi).norm() / hs.psi.norm();
}

// Sign of the real value (a + sqrt2 c) / 2^k, exactly.
bool real_nonnegative(const ExactScalar &x) {
  const auto f = x.dyadic_form();
  if (f.a >= 0 && f.c >= 0) return true;
  if (f.a <= 0 && f.c <= 0) return false;
  const BigInt a2 = f.a * f.a, c2 = 2 * f.c * f.c;
  return f.a > 0 ? a2 >= c2 : c2 >= a2;
}

Outcome criterion3() {
  int circuits = 0;
  double worst_res = 0.0, worst_lambda = 0.0;
  for (int m = 1; m <= 3; ++m)
    for (int k = 0; k <= 2; ++k)
      for (Circuit &c : oracle::all_words(Variant::BQP1, m, k)) {
        if (!oracle::prob_one(c).is_zero()) continue;
        ++circuits;
        worst_res = std::max(worst_res, history_residual(c));
        const double lambda = instance_min_eigenvalue(compile(c)).lambda_min;
        worst_lambda = std::max(worst_lambda, lambda);
      }
  return {worst_res <= 1e-9 && worst_lambda < 1e-7,
          fmt("%d accepting circuits, worst residual %.2e, worst lambda %.2e", circuits, worst_res, worst_lambda)};
}

Outcome criterion4() {
  int circuits = 0, accepted = 0;
  double lowest = 1e9;
  auto run = [&](const Circuit &c) {
    const ExactScalar p = oracle::prob_one(c);
    if (!real_nonnegative(p * ExactScalar(2) - ExactScalar(1))) return;
    ++circuits;
    lowest = std::min(lowest, instance_min_eigenvalue(compile(c)).lambda_min);
    DecideOptions d;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      d.seed = seed;
      accepted += decide(compile(c), std::nullopt, d).decision != Decision::Reject;
    }
  };
  for (int m = 1; m <= 2; ++m)
    for (int k = 0; k <= 2; ++k)
      for (const Circuit &c : oracle::all_words(Variant::BQP1, m, k)) run(c);
  for (int k = 0; k <= 1; ++k)
    for (const Circuit &c : oracle::all_words(Variant::BQP1, 3, k)) run(c);
  return {circuits > 0 && lowest > 1e-4 && accepted == 0,
          fmt("%d circuits with p1 >= 1/2, lowest lambda %.3e, non-rejecting runs %d", circuits, lowest, accepted)};
}

// ---------------------------------------------------------------- 5

Outcome criterion5() {
  const std::vector<CorpusCase> cases = generate_corpus(1);
  const CorpusSummary s = run_corpus(cases, CorpusOptions{});
  // Every required branch must be present.
  const std::set<std::string> need = {"type-conflict", "monogamy", "cycle", "chain", "no-start", "no-end",
                                      "undefined", "shared", "qcma-shared-commit"};
  std::string missing;
  for (const auto &b : need)
    if (!s.per_branch.count(b)) missing += " " + b;
  std::string first_bad;
  for (const auto &o : s.cases)
    if (!o.agree && first_bad.empty()) first_bad = " first disagreement " + o.name;
  return {cases.size() >= 200 && s.disagree == 0 && s.oracle_band == 0 && missing.empty(),
          fmt("%zu cases, %d agree, %d disagree, %d in band", cases.size(), s.agree, s.disagree, s.oracle_band) +
              (missing.empty() ? "" : " missing:" + missing) + first_bad};
}

// ---------------------------------------------------------------- 6

Outcome criterion6() {
  const auto psi = build_psi_states();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (inner(psi[i], psi[j]) != Rational(i == j ? 1 : 0)) return {false, "psi states not orthonormal"};
  const RationalMatrix h = h42_exact();
  if (rational_product(h, h) != h) return {false, "H42 not idempotent"};
  const int kdim = static_cast<int>(kernel_basis(build_h42()).size());
  if (kdim != 4) return {false, fmt("H42 kernel dimension %d", kdim)};
  const PlacementCheckResult r = verify_uniqueness_840();
  const bool aligned = r.frustration_free.size() == 1 && r.frustration_free[0] == std::array<int, 4>{0, 1, 2, 3};
  double next = 1e9;
  for (const auto &rec : r.records)
    if (rec.placement != std::array<int, 4>{0, 1, 2, 3}) next = std::min(next, rec.lambda_min);
  return {r.records.size() == 840 && aligned && r.indeterminate == 0 && next > 1e-4,
          fmt("%zu placements, %zu frustration-free, lowest other lambda %.3e", r.records.size(),
              r.frustration_free.size(), next)};
}

// ---------------------------------------------------------------- 7

Outcome criterion7() {
  bool pass = true;
  std::string detail;
  for (int n = 2; n <= 4; ++n) {
    const T2CheckResult t = verify_t2_placements(n, 6);
    double lowest = 1e9;
    for (const auto &r : t.records) lowest = std::min(lowest, r.lambda_min);
    const bool ok = t.kernel_dim == 1 && t.frustration_free.empty() && t.indeterminate == 0 && lowest > 1e-4;
    pass &= ok;
    detail += fmt("n=%d: kernel %d, %zu placements, lowest %.3e", n, t.kernel_dim, t.records.size(), lowest);
    for (const auto &p : t.frustration_free) {
      detail += " frustration-free (";
      for (size_t i = 0; i < p.size(); ++i) detail += (i ? "," : "") + std::to_string(p[i]);
      detail += ")";
    }
    detail += n < 4 ? "; " : "";
  }
  return {pass, detail};
}

// ---------------------------------------------------------------- 8

QuditCsp random_toy(std::mt19937_64 &rng, int d, int n, int clauses) {
  QuditCsp c;
  c.d = d;
  c.num_qudits = n;
  for (int i = 0; i < clauses; ++i) {
    const int arity = n >= 2 && rng() % 2 ? 2 : 1;
    const int dim = arity == 1 ? d : d * d;
    // Projector onto a random set of basis states, or onto one random
    // entangled state (rank one).
    SpMat m(dim, dim);
    if (rng() % 3) {
      for (int s = 0; s < dim; ++s)
        if (rng() % 2) m.coeffRef(s, s) = 1.0;
    } else {
      Vec v(dim);
      std::normal_distribution<double> g;
      for (int s = 0; s < dim; ++s) v[s] = cplx(g(rng), g(rng));
      v.normalize();
      m = (v * v.adjoint()).sparseView(1.0, 1e-15);
    }
    m.makeCompressed();
    c.clause_types.push_back(m);
    std::vector<int> sites;
    while (static_cast<int>(sites.size()) < arity) {
      const int s = static_cast<int>(rng() % n);
      if (std::find(sites.begin(), sites.end(), s) == sites.end()) sites.push_back(s);
    }
    c.clauses.push_back({i, sites});
  }
  return c;
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  int round_trips = 0;
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + static_cast<int>(rng() % 6);
    const QuditCsp c = random_toy(rng, d, 1 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 4));
    const BackwardResult b = reduce_backward(reduce_forward(c));
    round_trips += b.consistent && same_up_to_renaming(b.instance, c);
  }
  int checked = 0, preserved = 0, ff = 0;
  for (int d : {2, 3}) {
    for (int i = 0; i < 8; ++i) {
      const int n = d == 2 ? 1 + static_cast<int>(rng() % 3) : 1 + static_cast<int>(rng() % 2);
      const QuditCsp c = random_toy(rng, d, n, 1 + static_cast<int>(rng() % 3));
      const Satisfiability a = classify(min_eigenvalue(qudit_hamiltonian(c)).lambda_min);
      const Satisfiability q = classify(min_eigenvalue(qubit_hamiltonian(reduce_forward(c))).lambda_min);
      ++checked;
      preserved += a == q && a != Satisfiability::Indeterminate;
      ff += a == Satisfiability::FrustrationFree;
    }
  }
  return {round_trips == 50 && preserved == checked && ff > 0 && ff < checked,
          fmt("round trips %d/50, verdicts preserved %d/%d (%d frustration-free)", round_trips, preserved, checked, ff)};
}

// ---------------------------------------------------------------- 9

Outcome criterion9() {
  const Circuit on_coin{Variant::CoRP, 1, {InitTag::Coin}, {}, {0}};
  const Circuit on_zero{Variant::CoRP, 2, {InitTag::Coin, InitTag::Zero}, {}, {1}};
  const double a = instance_min_eigenvalue(compile(on_coin)).lambda_min;
  const double b = instance_min_eigenvalue(compile(on_zero)).lambda_min;
  return {classify(a) == Satisfiability::Frustrated && classify(b) == Satisfiability::FrustrationFree,
          fmt("End on coin lambda %.3e, End on constant-0 lambda %.3e", a, b)};
}

}  // namespace

int main(int argc, char **argv) {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> all = {
      {"gate-set ring form", criterion1},       {"PropU kernel families", criterion2},
      {"history-state completeness", criterion3}, {"soundness", criterion4},
      {"decider-oracle corpus", criterion5},    {"H42 gadget and 840 placements", criterion6},
      {"T2 gadget", criterion7},                {"reduction round trip", criterion8},
      {"coRP coin circuits", criterion9}};
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!pick.empty() && !pick.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("criterion %d %s: %s (%s) [%.1fs]\n", id, all[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str(), sec);
    std::fflush(stdout);
  }
  return failed;
}
