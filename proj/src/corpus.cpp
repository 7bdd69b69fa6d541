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

#include "qcsp/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <stdexcept>
#include <thread>

#include "qcsp/compiler.hpp"
#include "qcsp/gates.hpp"

namespace qcsp {

QcspInstance merge_instances(const QcspInstance &a, const QcspInstance &b) {
  if (a.variant != b.variant) throw std::invalid_argument("merge_instances: variants differ");
  QcspInstance out = a;
  out.num_qudits = a.num_qudits + b.num_qudits;
  for (auto c : b.clauses) {
    for (int &s : c.sites) s += a.num_qudits;
    out.clauses.push_back(std::move(c));
  }
  return out;
}

QcspInstance identify_sites(const QcspInstance &inst, int keep, int drop) {
  if (keep == drop || keep < 0 || drop < 0 || keep >= inst.num_qudits || drop >= inst.num_qudits)
    throw std::invalid_argument("identify_sites: bad site pair");
  QcspInstance out = inst;
  out.num_qudits = inst.num_qudits - 1;
  const int k = keep > drop ? keep - 1 : keep;
  for (auto &c : out.clauses)
    for (int &s : c.sites) s = s == drop ? k : s > drop ? s - 1 : s;
  return out;
}

Circuit random_circuit(std::mt19937_64 &rng, Variant v, int m, int k) {
  Circuit c;
  c.variant = v;
  c.num_qubits = m;
  c.init.assign(m, InitTag::Zero);
  std::vector<const GateSpec *> usable;
  for (const auto &g : builtin_gate_set(v))
    if (g.arity <= m) usable.push_back(&g);
  for (int t = 0; t < k && !usable.empty(); ++t) {
    const GateSpec *g = usable[rng() % usable.size()];
    std::vector<int> qs(m);
    for (int i = 0; i < m; ++i) qs[i] = i;
    std::shuffle(qs.begin(), qs.end(), rng);
    qs.resize(g->arity);
    c.gates.push_back({g->id, qs});
  }
  return c;
}

std::uint64_t case_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

QcspInstance without(const QcspInstance &inst, const std::function<bool(const ClauseApplication &)> &drop) {
  QcspInstance out = inst;
  out.clauses.clear();
  for (const auto &c : inst.clauses)
    if (!drop(c)) out.clauses.push_back(c);
  return out;
}

bool is_start(const ClauseApplication &c) {
  return c.kind == ClauseKind::Start || c.kind == ClauseKind::StartRand || c.kind == ClauseKind::StartUnk;
}

std::string gates_str(const Circuit &c) {
  std::string s;
  for (const auto &g : c.gates) {
    s += (s.empty() ? "" : ",") + g.gate + "(";
    for (size_t i = 0; i < g.qubits.size(); ++i) s += (i ? " " : "") + std::to_string(g.qubits[i]);
    s += ")";
  }
  return s.empty() ? "-" : s;
}

std::string init_str(const Circuit &c) {
  std::string s;
  for (auto t : c.init) s += t == InitTag::Zero ? 'z' : t == InitTag::Witness ? 'w' : t == InitTag::Coin ? 'c' : 'f';
  return s;
}

struct Builder {
  std::mt19937_64 rng;
  std::vector<CorpusCase> out;

  void add(std::string branch, std::string name, QcspInstance inst) {
    out.push_back({branch + "/" + std::to_string(out.size()) + "/" + name, std::move(branch), std::move(inst)});
  }
  int pick(int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

  QcspInstance single(std::initializer_list<ClauseApplication> cl, int n, Variant v = Variant::BQP1) {
    QcspInstance i;
    i.variant = v;
    i.num_qudits = n;
    i.clauses = cl;
    return i;
  }

  void trivial() {
    add("trivial", "empty", single({}, 0));
    add("trivial", "unused", single({}, 3));
    add("trivial", "lone-type", single({{ClauseKind::TypeL, "", {0}}}, 2));
  }

  void compiled() {
    for (int m = 1; m <= 2; ++m)
      for (int k = 0; k <= 2; ++k) {
        const int reps = k == 0 ? 1 : 7;
        for (int r = 0; r < reps; ++r) {
          Circuit c = random_circuit(rng, Variant::BQP1, m, k);
          if (m == 2 && r % 3 == 2) c.outputs = {0, 1};
          add("compiled", gates_str(c), compile(c));
        }
      }
  }

  void undefined() {
    for (int r = 0; r < 22; ++r) {
      const int m = r < 4 ? 1 : 2, k = pick(1, 2);
      Circuit c = random_circuit(rng, Variant::BQP1, m, k);
      if (m == 1) {
        c.init[0] = InitTag::Free;
      } else {
        c.init[pick(0, 1)] = InitTag::Free;
        if (r % 7 == 0) c.init.assign(2, InitTag::Free);
      }
      add("undefined", init_str(c) + ":" + gates_str(c), compile(c));
    }
  }

  void gaps() {
    for (int r = 0; r < 8; ++r) {
      Circuit c = random_circuit(rng, Variant::BQP1, pick(1, 2), 2);
      QcspInstance inst = compile(c);
      const int gone = pick(1, 2);
      int seen = 0;
      inst = without(inst, [&](const ClauseApplication &a) { return a.kind == ClauseKind::PropU && ++seen == gone; });
      add("gap", "drop" + std::to_string(gone) + ":" + gates_str(c), inst);
    }
  }

  void no_start_no_end() {
    for (int r = 0; r < 10; ++r) {
      Circuit c = random_circuit(rng, Variant::BQP1, pick(1, 2), pick(0, 2));
      add("no-start", gates_str(c), without(compile(c), is_start));
    }
    for (int r = 0; r < 10; ++r) {
      Circuit c = random_circuit(rng, Variant::BQP1, pick(1, 2), pick(0, 2));
      add("no-end", gates_str(c), without(compile(c), [](const ClauseApplication &a) { return a.kind == ClauseKind::End; }));
    }
  }

  void cycles_and_chains() {
    const auto bp = ClauseKind::BellPair;
    add("cycle", "bell-2", single({{bp, "", {0, 1}}, {bp, "", {1, 0}}}, 2));
    add("cycle", "bell-3", single({{bp, "", {0, 1}}, {bp, "", {1, 2}}, {bp, "", {2, 0}}}, 3));
    add("cycle", "bell-4", single({{bp, "", {0, 1}}, {bp, "", {1, 2}}, {bp, "", {2, 3}}, {bp, "", {3, 0}}}, 4));
    for (const char *g : {"H", "HT"}) {
      add("cycle", std::string("prop-") + g,
          single({{ClauseKind::PropU, g, {0, 1, 2, 3}}, {bp, "", {3, 1}}}, 4));
      add("cycle", std::string("prop-prop-") + g,
          single({{ClauseKind::PropU, g, {0, 1, 2, 3}}, {ClauseKind::PropU, g, {0, 2, 3, 1}}}, 4));
    }
    add("cycle", "prop-2q", single({{ClauseKind::PropU, "HHCNOT", {0, 1, 2, 3, 4}}, {bp, "", {4, 2}}}, 5));
    for (int r = 0; r < 4; ++r) {
      Circuit c = random_circuit(rng, Variant::BQP1, 1, pick(0, 2));
      QcspInstance cyc = single({{ClauseKind::PropU, "H", {0, 1, 2, 3}}, {bp, "", {3, 1}}}, 4);
      add("cycle", "with-path:" + gates_str(c), merge_instances(compile(c), cyc));
    }
    add("chain", "bell-2", single({{bp, "", {0, 1}}}, 2));
    add("chain", "bell-3", single({{bp, "", {0, 1}}, {bp, "", {1, 2}}}, 3));
    for (const char *g : {"H", "HT"}) {
      add("chain", std::string("prop-") + g, single({{ClauseKind::PropU, g, {0, 1, 2, 3}}}, 4));
      add("chain", std::string("prop-end-") + g,
          single({{ClauseKind::PropU, g, {0, 1, 2, 3}}, {ClauseKind::TypeE, "", {4}}}, 5));
    }
    for (int r = 0; r < 4; ++r) {
      Circuit c = random_circuit(rng, Variant::BQP1, 1, pick(0, 2));
      add("chain", "with-path:" + gates_str(c),
          merge_instances(compile(c), single({{ClauseKind::PropU, "HT", {0, 1, 2, 3}}, {bp, "", {3, 4}}}, 5)));
    }
  }

  void type_conflicts() {
    using K = ClauseKind;
    add("type-conflict", "L+E", single({{K::TypeL, "", {0}}, {K::TypeE, "", {0}}}, 1));
    add("type-conflict", "L+C", single({{K::TypeL, "", {0}}, {K::TypeC, "", {0}}}, 1));
    add("type-conflict", "E+C", single({{K::TypeE, "", {0}}, {K::TypeC, "", {0}}}, 1));
    add("type-conflict", "bell+L", single({{K::BellPair, "", {0, 1}}, {K::TypeL, "", {1}}}, 2));
    add("type-conflict", "pd+C", single({{K::PD, "", {0}}, {K::TypeC, "", {0}}}, 1));
    const Circuit base{Variant::BQP1, 1, {InitTag::Zero}, {}, {0}};
    const QcspInstance c = compile(base);  // Q=0, T0=1, T1=2, S=3, E=4
    auto with = [&](ClauseApplication a) {
      QcspInstance i = c;
      i.clauses.push_back(std::move(a));
      return i;
    };
    add("type-conflict", "compiled+TypeC(Q)", with({K::TypeC, "", {0}}));
    add("type-conflict", "compiled+TypeE(T0)", with({K::TypeE, "", {1}}));
    add("type-conflict", "compiled+TypeL(S)", with({K::TypeL, "", {3}}));
    add("type-conflict", "compiled+TypeC(E)", with({K::TypeC, "", {4}}));
    add("type-conflict", "start-on-clock", single({{K::Start, "", {0, 1, 2, 3}}, {K::TypeC, "", {3}}}, 4));
    add("type-conflict", "prop-logical-is-clock", single({{K::PropU, "H", {0, 1, 2, 3}}, {K::TypeC, "", {0}}}, 4));
  }

  void monogamy() {
    using K = ClauseKind;
    add("monogamy", "bell-CB-twice", single({{K::BellPair, "", {0, 1}}, {K::BellPair, "", {0, 2}}}, 3));
    add("monogamy", "bell-CA-twice", single({{K::BellPair, "", {1, 0}}, {K::BellPair, "", {2, 0}}}, 3));
    add("monogamy", "two-starts",
        single({{K::Start, "", {0, 2, 3, 4}}, {K::Start, "", {1, 2, 3, 4}}}, 5));
    add("monogamy", "start-and-end-endpoint",
        single({{K::Start, "", {0, 1, 2, 5}}, {K::End, "", {0, 4, 3, 5}}, {K::BellPair, "", {2, 3}}}, 6));
    add("monogamy", "nonconsecutive-prop",
        single({{K::BellPair, "", {1, 2}}, {K::BellPair, "", {2, 3}}, {K::BellPair, "", {3, 4}},
                {K::PropU, "H", {0, 1, 3, 4}}},
               5));
    for (int r = 0; r < 5; ++r) {
      Circuit c = random_circuit(rng, Variant::BQP1, 1, pick(1, 2));
      QcspInstance inst = compile(c);
      const CompilationLayout l = layout_for(c);
      // Extra Bell pair from an already paired clock to a fresh clock.
      inst.num_qudits += 1;
      inst.clauses.push_back({K::BellPair, "", {l.t(pick(0, l.k)), inst.num_qudits - 1}});
      add("monogamy", "extra-bell:" + gates_str(c), inst);
    }
    for (int r = 0; r < 5; ++r) {
      Circuit a = random_circuit(rng, Variant::BQP1, 1, 1), b = random_circuit(rng, Variant::BQP1, 1, 1);
      QcspInstance inst = merge_instances(compile(a), compile(b));
      const CompilationLayout la = layout_for(a);
      const int off = la.num_sites();
      inst = identify_sites(inst, la.t(1), off + layout_for(b).t(1));
      add("monogamy", "shared-clock:" + gates_str(a) + "|" + gates_str(b), inst);
    }
  }

  // Two compiled circuits on separate clocks with logical qubit qa of `a`
  // identified with qb of `b`.
  void shared_case(const std::string &tag, const Circuit &a, const Circuit &b, int qa, int qb) {
    QcspInstance inst = merge_instances(compile(a), compile(b));
    const int off = layout_for(a).num_sites();
    inst = identify_sites(inst, layout_for(a).q(qa), off + layout_for(b).q(qb));
    add("shared", tag + ":" + init_str(a) + gates_str(a) + "|" + init_str(b) + gates_str(b), inst);
  }

  void shared() {
    using I = InitTag;
    for (int r = 0; r < 40; ++r) {
      const int kind = r % 8;
      Circuit a{Variant::BQP1, 2, {I::Zero, I::Zero}, {}, {0}};
      Circuit b{Variant::BQP1, 2, {I::Zero, I::Zero}, {}, {0}};
      const char *g1 = r % 2 ? "H" : "HT";
      switch (kind) {
        case 0:  // disjoint except an idle, Start/End-only qubit
          a.gates = {{g1, {0}}};
          a.outputs = {1};
          b.gates = {{"HT", {0}}, {"H", {0}}};
          b.outputs = {1};
          shared_case("start-end-only", a, b, 1, 1);
          break;
        case 1:  // initialized in both, gated in one
          a.gates = {{g1, {1}}};
          shared_case("init-both-gated", a, b, 1, 1);
          break;
        case 2:  // Free in both, gated in one: truncation
          a.init[1] = I::Free;
          b.init[1] = I::Free;
          a.gates = {{g1, {1}}};
          b.outputs = {0};
          shared_case("free-both", a, b, 1, 1);
          break;
        case 3:  // second path truncates before touching the shared qubit
          b.init = {I::Free, I::Free};
          b.gates = {{g1, {0}}, {"H", {1}}};
          a.gates = r % 3 ? std::vector<GateApplication>{{"HT", {0}}, {"H", {0}}}
                          : std::vector<GateApplication>{{"H", {0}}};
          b.init[1] = I::Free;
          shared_case("truncated-rescue", a, b, 0, 1);
          break;
        case 4:  // gated in one path, End-checked in another
          a.gates = {{g1, {1}}};
          a.outputs = {0};
          b.outputs = {1};
          b.init[1] = I::Free;
          shared_case("gated-and-checked", a, b, 1, 1);
          break;
        case 5:  // defined by one path's Start, gated (Free) in the other
          a.gates = {};
          a.outputs = {0};
          b.init[1] = I::Free;
          b.gates = {{g1, {1}}};
          shared_case("defined-elsewhere", a, b, 1, 1);
          break;
        case 6:  // no Start anywhere, not gated: End-only sharing
          a.init[1] = I::Free;
          b.init[1] = I::Free;
          a.outputs = {1};
          b.outputs = {1};
          a.gates = {{g1, {0}}};
          shared_case("no-start", a, b, 1, 1);
          break;
        case 7:  // random small pair sharing qubit 0
          a = random_circuit(rng, Variant::BQP1, 2, pick(0, 1));
          b = random_circuit(rng, Variant::BQP1, 2, pick(0, 1));
          if (pick(0, 1)) a.init[0] = I::Free;
          if (pick(0, 1)) b.init[0] = I::Free;
          shared_case("random", a, b, 0, 0);
          break;
      }
    }
  }

  void qcma() {
    using I = InitTag;
    for (int r = 0; r < 18; ++r) {
      Circuit c = random_circuit(rng, Variant::QCMA, pick(1, 2), pick(0, 2));
      c.init[0] = I::Witness;
      if (c.num_qubits == 2 && pick(0, 1)) c.init[1] = I::Witness;
      add("qcma", init_str(c) + ":" + gates_str(c), compile(c));
    }
    // Two witness qubits bound to one commitment site.
    for (int r = 0; r < 12; ++r) {
      Circuit c = random_circuit(rng, Variant::QCMA, 2, pick(0, 2));
      c.init = {I::Witness, I::Witness};
      if (r % 4 == 0) c.outputs = {0, 1};
      QcspInstance inst = compile(c);
      const CompilationLayout l = layout_for(c);
      inst = identify_sites(inst, l.commit[0], l.commit[1]);
      add("qcma-shared-commit", gates_str(c), inst);
    }
    // Stand-alone Commit clauses.
    for (int r = 0; r < 10; ++r) {
      Circuit c = random_circuit(rng, Variant::QCMA, 2, pick(0, 2));
      c.init = {I::Witness, r % 2 ? I::Zero : I::Free};
      QcspInstance inst = compile(c);
      const CompilationLayout l = layout_for(c);
      if (r % 3 == 0) {
        inst.clauses.push_back({ClauseKind::Commit, "", {l.q(0), l.commit[0]}});
      } else {
        inst.num_qudits += 1;
        inst.clauses.push_back({ClauseKind::Commit, "", {l.q(1), inst.num_qudits - 1}});
      }
      add("qcma-commit", init_str(c) + ":" + gates_str(c), inst);
    }
    add("qcma-commit", "lone-commit", single({{ClauseKind::Commit, "", {0, 1}}}, 2, Variant::QCMA));
  }

  void corp() {
    using I = InitTag;
    add("corp", "coin-identity-end-on-coin", compile(Circuit{Variant::CoRP, 1, {I::Coin}, {}, {0}}));
    add("corp", "coin-identity-end-on-zero", compile(Circuit{Variant::CoRP, 2, {I::Coin, I::Zero}, {}, {1}}));
    for (int r = 0; r < 16; ++r) {
      Circuit c = random_circuit(rng, Variant::CoRP, 3, pick(0, 1));
      for (auto &t : c.init) t = pick(0, 2) == 0 ? I::Coin : I::Zero;
      c.outputs = {pick(0, 2)};
      add("corp", init_str(c) + ":" + gates_str(c), compile(c));
    }
  }
};

}  // namespace

std::vector<CorpusCase> generate_corpus(std::uint64_t seed) {
  Builder b{std::mt19937_64(seed), {}};
  b.trivial();
  b.compiled();
  b.undefined();
  b.gaps();
  b.no_start_no_end();
  b.cycles_and_chains();
  b.type_conflicts();
  b.monogamy();
  b.shared();
  b.qcma();
  b.corp();
  return std::move(b.out);
}

CaseOutcome run_case(const CorpusCase &c, const CorpusOptions &opt, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CaseOutcome o;
  o.name = c.name;
  o.branch = c.branch;
  DecideOptions dopt;
  dopt.seed = seed;
  auto run = [&](const std::optional<std::string> &proof) {
    AnalysisReport r = decide(c.instance, proof, dopt);
    if (opt.inject_bug && r.reason && r.reason->code == "end-check") {
      r.decision = Decision::Accept;
      r.reason.reset();
    }
    return r;
  };
  if (c.instance.variant == Variant::QCMA) {
    const size_t w = witness_qudits(c.instance).size();
    o.decision = Decision::Reject;
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << w); ++bits) {
      std::string proof;
      for (size_t i = 0; i < w; ++i) proof += ((bits >> (w - 1 - i)) & 1) ? '1' : '0';
      AnalysisReport r = run(proof);
      o.proof = proof;
      if (r.decision == Decision::Accept) {
        o.decision = Decision::Accept;
        o.reason.clear();
        break;
      }
      if (r.decision == Decision::Indeterminate) o.decision = Decision::Indeterminate;
      if (r.reason && o.decision != Decision::Accept) o.reason = r.reason->code;
    }
  } else {
    AnalysisReport r = run(std::nullopt);
    o.decision = r.decision;
    if (r.reason) o.reason = r.reason->code;
  }
  EigenOptions eo = opt.eigen;
  eo.seed = seed;
  const SpectralResult s = instance_min_eigenvalue(c.instance, opt.hamiltonian, eo, true);
  o.lambda_min = s.lambda_min;
  o.method = s.method;
  o.oracle = classify(s.lambda_min, opt.ff_below, opt.frustrated_above);
  o.agree = (o.decision == Decision::Accept && o.oracle == Satisfiability::FrustrationFree) ||
            (o.decision == Decision::Reject && o.oracle == Satisfiability::Frustrated);
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

CorpusSummary run_corpus(const std::vector<CorpusCase> &cases, const CorpusOptions &opt) {
  CorpusSummary s;
  s.cases.resize(cases.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cases.size(); i = next++) s.cases[i] = run_case(cases[i], opt, case_seed(opt.seed, i));
  };
  const int threads = std::max(1, opt.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  for (const auto &o : s.cases) {
    (o.agree ? s.agree : s.disagree) += 1;
    s.oracle_band += o.oracle == Satisfiability::Indeterminate;
    s.per_branch[o.branch] += 1;
  }
  return s;
}

}  // namespace qcsp
