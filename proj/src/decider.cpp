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

#include "qcsp/decider.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "qcsp/gates.hpp"
#include "qcsp/operator.hpp"

namespace qcsp {

std::string_view to_string(QuditTag t) {
  switch (t) {
    case QuditTag::Logical: return "Logical";
    case QuditTag::Clock: return "Clock";
    case QuditTag::Endpoint: return "Endpoint";
    case QuditTag::Commitment: return "Commitment";
    case QuditTag::Unused: return "Unused";
    case QuditTag::Conflict: return "Conflict";
  }
  return "?";
}

std::string_view to_string(Component c) {
  switch (c) {
    case Component::CA: return "CA";
    case Component::CB: return "CB";
    case Component::EC: return "EC";
  }
  return "?";
}

std::string_view to_string(PathKind k) {
  switch (k) {
    case PathKind::Cycle: return "Cycle";
    case PathKind::NoEndpoints: return "NoEndpoints";
    case PathKind::NoStart: return "NoStart";
    case PathKind::NoEnd: return "NoEnd";
    case PathKind::Full: return "Full";
  }
  return "?";
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Accept: return "Accept";
    case Decision::Reject: return "Reject";
    case Decision::Indeterminate: return "Indeterminate";
  }
  return "?";
}

namespace {

bool is_start_kind(ClauseKind k) {
  return k == ClauseKind::Start || k == ClauseKind::StartRand || k == ClauseKind::StartUnk;
}

QuditTag tag_of(SiteType t) {
  switch (t) {
    case SiteType::Logical: return QuditTag::Logical;
    case SiteType::Clock: return QuditTag::Clock;
    case SiteType::Endpoint: return QuditTag::Endpoint;
    case SiteType::Commitment: return QuditTag::Commitment;
  }
  return QuditTag::Conflict;
}

// Bell-pair demands a clause makes, as (node, node).
std::vector<std::pair<PairNode, PairNode>> clause_edges(const QcspInstance &inst, const ClauseApplication &c) {
  const auto &s = c.sites;
  using C = Component;
  switch (c.kind) {
    case ClauseKind::Start:
    case ClauseKind::StartRand:
    case ClauseKind::StartUnk: return {{{s[0], C::EC}, {s[1], C::CA}}, {{s[1], C::CB}, {s[2], C::CA}}};
    case ClauseKind::End: return {{{s[0], C::EC}, {s[1], C::CB}}, {{s[2], C::CB}, {s[1], C::CA}}};
    case ClauseKind::PropU: {
      const int n = clause_gate_arity(inst, c);
      return {{{s[n], C::CB}, {s[n + 1], C::CA}}, {{s[n + 1], C::CB}, {s[n + 2], C::CA}}};
    }
    case ClauseKind::BellPair: return {{{s[0], C::CB}, {s[1], C::CA}}};
    default: return {};
  }
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::vector<QuditLabel> label_qudits(const QcspInstance &inst) {
  std::vector<QuditLabel> out(inst.num_qudits);
  const auto demands = demanded_types(inst);
  for (size_t i = 0; i < inst.clauses.size(); ++i)
    for (int s : inst.clauses[i].sites) out[s].clauses.push_back(static_cast<int>(i));
  for (int q = 0; q < inst.num_qudits; ++q) {
    out[q].demanded = demands[q];
    if (demands[q].empty())
      out[q].tag = QuditTag::Unused;
    else if (demands[q].size() == 1)
      out[q].tag = tag_of(demands[q][0]);
    else
      out[q].tag = QuditTag::Conflict;
  }
  return out;
}

PairingGraph build_pairings(const QcspInstance &inst, const std::vector<QuditLabel> &) {
  std::map<std::pair<PairNode, PairNode>, std::vector<int>> edges;
  for (size_t i = 0; i < inst.clauses.size(); ++i)
    for (auto [a, b] : clause_edges(inst, inst.clauses[i])) {
      if (b < a) std::swap(a, b);
      auto &v = edges[{a, b}];
      if (v.empty() || v.back() != static_cast<int>(i)) v.push_back(static_cast<int>(i));
    }
  PairingGraph g;
  std::map<PairNode, std::vector<size_t>> incident;
  for (const auto &[ab, cl] : edges) {
    g.edges.push_back({ab.first, ab.second, cl});
    incident[ab.first].push_back(g.edges.size() - 1);
    incident[ab.second].push_back(g.edges.size() - 1);
  }
  for (const auto &[node, es] : incident) {
    if (es.size() < 2) continue;
    std::set<int> cl;
    for (size_t e : es) cl.insert(g.edges[e].clauses.begin(), g.edges[e].clauses.end());
    g.conflicts.push_back({node, std::vector<int>(cl.begin(), cl.end())});
  }
  return g;
}

std::vector<ClockPath> decompose_paths(const QcspInstance &inst, const std::vector<QuditLabel> &labels,
                                       const PairingGraph &graph) {
  const int n = inst.num_qudits;
  std::vector<int> next(n, -1), prev(n, -1), start_ep(n, -1), end_ep(n, -1);
  for (const PairEdge &e : graph.edges) {
    PairNode a = e.a, b = e.b;
    if (a.comp == Component::CA && b.comp != Component::CA) std::swap(a, b);
    // now a is CB or EC, b is CA or CB
    if (a.comp == Component::CB && b.comp == Component::CA) {
      next[a.qudit] = b.qudit;
      prev[b.qudit] = a.qudit;
    } else if (a.comp == Component::EC && b.comp == Component::CA) {
      start_ep[b.qudit] = a.qudit;
    } else if (b.comp == Component::EC && a.comp == Component::CA) {
      start_ep[a.qudit] = b.qudit;
    } else if (a.comp == Component::EC && b.comp == Component::CB) {
      end_ep[b.qudit] = a.qudit;
    } else if (b.comp == Component::EC && a.comp == Component::CB) {
      end_ep[a.qudit] = b.qudit;
    }
  }
  std::vector<ClockPath> paths;
  std::vector<bool> seen(n, false);
  auto walk = [&](int head, bool cycle) {
    ClockPath p;
    int c = head;
    do {
      seen[c] = true;
      p.clocks.push_back(c);
      c = next[c];
    } while (c >= 0 && c != head && !seen[c]);
    if (cycle) {
      p.kind = PathKind::Cycle;
    } else {
      p.start_endpoint = start_ep[p.clocks.front()];
      p.end_endpoint = end_ep[p.clocks.back()];
      const bool s = p.start_endpoint >= 0, e = p.end_endpoint >= 0;
      p.kind = s && e ? PathKind::Full : s ? PathKind::NoEnd : e ? PathKind::NoStart : PathKind::NoEndpoints;
    }
    // Parked clock values for ignorable paths: a Start pins its first clock
    // to 1_C and an End pins its last clock to 0_C.
    if (p.kind == PathKind::NoEnd)
      p.parked_value = 1;
    else if (p.kind != PathKind::Full)
      p.parked_value = 0;
    paths.push_back(std::move(p));
  };
  for (int q = 0; q < n; ++q)
    if (labels[q].tag == QuditTag::Clock && !seen[q] && prev[q] < 0) walk(q, false);
  for (int q = 0; q < n; ++q)
    if (labels[q].tag == QuditTag::Clock && !seen[q]) walk(q, true);

  std::vector<int> path_of(n, -1), pos_of(n, -1);
  for (size_t i = 0; i < paths.size(); ++i)
    for (size_t j = 0; j < paths[i].clocks.size(); ++j) {
      path_of[paths[i].clocks[j]] = static_cast<int>(i);
      pos_of[paths[i].clocks[j]] = static_cast<int>(j);
    }
  for (size_t i = 0; i < inst.clauses.size(); ++i) {
    const ClauseApplication &c = inst.clauses[i];
    if (is_start_kind(c.kind)) {
      paths[path_of[c.sites[1]]].start_clauses.push_back(static_cast<int>(i));
    } else if (c.kind == ClauseKind::End) {
      paths[path_of[c.sites[1]]].end_clauses.push_back(static_cast<int>(i));
    } else if (c.kind == ClauseKind::PropU) {
      const int ga = clause_gate_arity(inst, c);
      const int mid = c.sites[ga + 1];
      GateEvent ev{pos_of[mid], static_cast<int>(i), c.gate, std::vector<int>(c.sites.begin(), c.sites.begin() + ga)};
      paths[path_of[mid]].events.push_back(std::move(ev));
    }
  }
  for (auto &p : paths) {
    std::stable_sort(p.events.begin(), p.events.end(),
                     [](const GateEvent &a, const GateEvent &b) { return a.center < b.center; });
    if (p.kind != PathKind::Full) continue;
    const int len = static_cast<int>(p.clocks.size()) - 1;
    for (int t = 1; t < len; ++t)
      if (std::none_of(p.events.begin(), p.events.end(), [t](const GateEvent &e) { return e.center == t; }))
        p.gaps.push_back(t);
  }
  return paths;
}

namespace {

std::vector<int> path_logicals(const QcspInstance &inst, const ClockPath &p) {
  std::set<int> q;
  for (int c : p.start_clauses) q.insert(inst.clauses[c].sites[3]);
  for (int c : p.end_clauses) q.insert(inst.clauses[c].sites[3]);
  for (const auto &e : p.events) q.insert(e.qudits.begin(), e.qudits.end());
  return {q.begin(), q.end()};
}

int index_in(const std::vector<int> &v, int x) {
  return static_cast<int>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

InitTag init_for_kind(ClauseKind k) {
  switch (k) {
    case ClauseKind::StartRand: return InitTag::Coin;
    case ClauseKind::StartUnk: return InitTag::Witness;
    default: return InitTag::Zero;
  }
}

}  // namespace

std::vector<ExtractedCircuit> extract_circuits(const QcspInstance &inst, const std::vector<ClockPath> &paths) {
  std::vector<ExtractedCircuit> out;
  for (size_t i = 0; i < paths.size(); ++i) {
    const ClockPath &p = paths[i];
    if (p.kind != PathKind::Full) continue;
    ExtractedCircuit ec;
    ec.path = static_cast<int>(i);
    ec.qudits = path_logicals(inst, p);
    Circuit &c = ec.circuit;
    c.variant = inst.variant;
    c.num_qubits = static_cast<int>(ec.qudits.size());
    c.init.assign(c.num_qubits, InitTag::Free);
    for (int cl : p.start_clauses) {
      InitTag &t = c.init[index_in(ec.qudits, inst.clauses[cl].sites[3])];
      InitTag nt = init_for_kind(inst.clauses[cl].kind);
      // Witness and Coin dominate Zero in the circuit view; conflicts are
      // judged by the decider.
      if (t == InitTag::Free || t == InitTag::Zero) t = nt;
    }
    for (const auto &e : p.events) {
      GateApplication g{e.gate, {}};
      for (int q : e.qudits) g.qubits.push_back(index_in(ec.qudits, q));
      c.gates.push_back(std::move(g));
    }
    std::set<int> outs;
    for (int cl : p.end_clauses) outs.insert(index_in(ec.qudits, inst.clauses[cl].sites[3]));
    c.outputs.assign(outs.begin(), outs.end());
    out.push_back(std::move(ec));
  }
  return out;
}

std::optional<int> propagate_undefined(const Circuit &c) {
  for (size_t t = 0; t < c.gates.size(); ++t)
    for (int q : c.gates[t].qubits)
      if (c.init[q] == InitTag::Free) return static_cast<int>(t) + 1;
  return std::nullopt;
}

std::vector<SharedConflict> check_shared_qubits(const std::vector<ExtractedCircuit> &circuits,
                                                const std::vector<std::optional<int>> &truncation) {
  std::map<int, std::set<int>> gated, using_;
  for (size_t i = 0; i < circuits.size(); ++i) {
    const ExtractedCircuit &ec = circuits[i];
    const Circuit &c = ec.circuit;
    const int live = truncation[i] ? *truncation[i] - 1 : static_cast<int>(c.gates.size());
    for (int q = 0; q < c.num_qubits; ++q)
      if (c.init[q] != InitTag::Free) using_[ec.qudits[q]].insert(ec.path);
    for (int t = 0; t < live; ++t)
      for (int q : c.gates[t].qubits) {
        gated[ec.qudits[q]].insert(ec.path);
        using_[ec.qudits[q]].insert(ec.path);
      }
    if (!truncation[i])
      for (int q : c.outputs) using_[ec.qudits[q]].insert(ec.path);
  }
  std::vector<SharedConflict> out;
  for (const auto &[q, g] : gated) {
    const auto &u = using_[q];
    if (!g.empty() && u.size() >= 2) out.push_back({q, {g.begin(), g.end()}, {u.begin(), u.end()}});
  }
  return out;
}

std::vector<int> witness_qudits(const QcspInstance &inst) {
  std::set<int> w;
  for (const auto &c : inst.clauses)
    if (c.kind == ClauseKind::StartUnk) w.insert(c.sites[3]);
  return {w.begin(), w.end()};
}

namespace {

void check_proof(const QcspInstance &inst, const std::string &proof) {
  const auto w = witness_qudits(inst);
  if (proof.size() != w.size())
    throw InputError("/proof", "proof has " + std::to_string(proof.size()) + " bits, instance has " +
                                   std::to_string(w.size()) + " witness qubits");
  for (char ch : proof)
    if (ch != '0' && ch != '1') throw InputError("/proof", "proof must be a string of 0 and 1");
}

// Union of StartUnk (q, p) and Commit (q, p) links over the chosen clauses.
// Returns per-qudit group bit (-1: not in a group or no witness in group)
// and the set of qudits whose group holds disagreeing witness bits.
struct CommitGroups {
  std::vector<int> group;      // representative, or -1
  std::map<int, int> value;    // representative -> bit
  std::vector<int> offending;  // qudits
};

CommitGroups commit_groups(const QcspInstance &inst, const std::string &proof, const std::vector<bool> &active) {
  UnionFind uf(inst.num_qudits);
  std::vector<bool> in_group(inst.num_qudits, false);
  for (size_t i = 0; i < inst.clauses.size(); ++i) {
    const auto &c = inst.clauses[i];
    int q = -1, p = -1;
    if (c.kind == ClauseKind::StartUnk && active[i]) {
      q = c.sites[3];
      p = c.sites[4];
    } else if (c.kind == ClauseKind::Commit) {
      q = c.sites[0];
      p = c.sites[1];
    }
    if (q < 0) continue;
    uf.unite(q, p);
    in_group[q] = in_group[p] = true;
  }
  const auto w = witness_qudits(inst);
  std::vector<bool> active_witness(inst.num_qudits, false);
  for (size_t i = 0; i < inst.clauses.size(); ++i)
    if (inst.clauses[i].kind == ClauseKind::StartUnk && active[i]) active_witness[inst.clauses[i].sites[3]] = true;
  CommitGroups g;
  g.group.assign(inst.num_qudits, -1);
  std::map<int, std::set<int>> bits;
  std::map<int, std::vector<int>> members;
  for (int q = 0; q < inst.num_qudits; ++q) {
    if (!in_group[q]) continue;
    g.group[q] = uf.find(q);
    members[g.group[q]].push_back(q);
  }
  for (size_t k = 0; k < w.size(); ++k)
    if (active_witness[w[k]] && g.group[w[k]] >= 0) bits[g.group[w[k]]].insert(proof[k] - '0');
  for (const auto &[rep, mem] : members) {
    const auto &b = bits[rep];
    g.value[rep] = b.empty() ? 0 : *b.begin();
    if (b.size() > 1)
      for (int q : mem)
        if (active_witness[q]) g.offending.push_back(q);
  }
  return g;
}

}  // namespace

std::vector<int> check_commitments(const QcspInstance &inst, const std::string &proof) {
  check_proof(inst, proof);
  return commit_groups(inst, proof, std::vector<bool>(inst.clauses.size(), true)).offending;
}

// ------------------------------------------------------------- simulation

namespace {

// Initial per-qubit value: 0, 1, 2 (= |+>), or -1 (undefined).
using State = std::vector<ExactScalar>;

State product_state(const std::vector<int> &vals) {
  const int n = static_cast<int>(vals.size());
  State s(std::size_t(1) << n, ExactScalar(0));
  int coins = 0;
  for (int v : vals) coins += v == 2;
  const ExactScalar amp = ExactScalar::sqrt2_inv(coins);
  for (std::size_t x = 0; x < s.size(); ++x) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const int bit = static_cast<int>((x >> (n - 1 - i)) & 1);
      ok = vals[i] == 2 || vals[i] == bit;
    }
    if (ok) s[x] = amp;
  }
  return s;
}

State apply_gate(const State &s, int n, const ExactMatrix &u, const std::vector<int> &qs) {
  const int a = static_cast<int>(qs.size());
  State out(s.size(), ExactScalar(0));
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (s[x].is_zero()) continue;
    int col = 0;
    for (int j = 0; j < a; ++j) col = (col << 1) | static_cast<int>((x >> (n - 1 - qs[j])) & 1);
    for (int row = 0; row < (1 << a); ++row) {
      const ExactScalar &m = u(row, col);
      if (m.is_zero()) continue;
      std::size_t y = x;
      for (int j = 0; j < a; ++j) {
        const std::size_t bit = std::size_t(1) << (n - 1 - qs[j]);
        if ((row >> (a - 1 - j)) & 1)
          y |= bit;
        else
          y &= ~bit;
      }
      out[y] += m * s[x];
    }
  }
  return out;
}

ExactScalar prob_any_one(const State &s, int n, const std::vector<int> &checked) {
  ExactScalar p(0);
  for (std::size_t x = 0; x < s.size(); ++x) {
    bool one = false;
    for (int q : checked) one = one || ((x >> (n - 1 - q)) & 1);
    if (one && !s[x].is_zero()) p += s[x].norm2();
  }
  return p;
}

Verdict verdict_from(const ExactScalar &p, SimMode mode, std::int64_t trials, std::mt19937_64 &rng) {
  Verdict v;
  v.mode = mode;
  v.p_reject = p.to_complex().real();
  if (mode == SimMode::Exact) {
    v.decision = p.is_zero() ? Decision::Accept : Decision::Reject;
    return v;
  }
  v.trials = trials;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int64_t i = 0; i < trials; ++i) v.ones += u(rng) < v.p_reject;
  v.decision = v.ones ? Decision::Reject : Decision::Accept;
  return v;
}

}  // namespace

SimulationResult simulate_and_verify(const Circuit &c, SimMode mode, std::int64_t trials, std::uint64_t seed,
                                     const std::vector<int> &witness_bits) {
  std::vector<int> vals(c.num_qubits);
  size_t wi = 0;
  for (int q = 0; q < c.num_qubits; ++q) {
    switch (c.init[q]) {
      case InitTag::Zero: vals[q] = 0; break;
      case InitTag::Coin: vals[q] = 2; break;
      case InitTag::Free: vals[q] = -1; break;
      case InitTag::Witness:
        if (wi >= witness_bits.size()) throw InputError("/proof", "missing witness bit");
        vals[q] = witness_bits[wi++];
        break;
    }
  }
  std::mt19937_64 rng(seed);
  SimulationResult r;
  if (propagate_undefined(c)) {
    r.verdict = verdict_from(ExactScalar(0), mode, trials, rng);
    return r;
  }
  // Undefined qubits are never gated here; simulate the defined ones only.
  std::vector<int> defined;
  for (int q = 0; q < c.num_qubits; ++q)
    if (vals[q] >= 0) defined.push_back(q);
  std::vector<int> dv;
  for (int q : defined) dv.push_back(vals[q]);
  const int n = static_cast<int>(defined.size());
  State s = product_state(dv);
  for (const auto &g : c.gates) {
    const GateSpec *spec = find_gate(c.variant, g.gate);
    if (!spec) throw InputError("/gates", "unknown gate " + g.gate);
    std::vector<int> qs;
    for (int q : g.qubits) qs.push_back(index_in(defined, q));
    s = apply_gate(s, n, spec->matrix, qs);
  }
  std::vector<int> checked;
  for (int q : c.outputs)
    if (vals[q] >= 0) checked.push_back(index_in(defined, q));
  r.p_one = prob_any_one(s, n, checked);
  r.verdict = verdict_from(r.p_one, mode, trials, rng);
  return r;
}

// ------------------------------------------------------------------ decide

namespace {

struct Decider {
  const QcspInstance &inst;
  const DecideOptions &opt;
  std::string proof;
  AnalysisReport rep;

  void reject(std::string step, std::string code, std::vector<int> clauses, std::string msg) {
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
    rep.decision = Decision::Reject;
    rep.verdict.decision = Decision::Reject;
    rep.reason = RejectReason{std::move(step), std::move(code), std::move(clauses), std::move(msg)};
  }
  void indeterminate(std::string code, std::vector<int> clauses, std::string msg) {
    reject("step-9", std::move(code), std::move(clauses), std::move(msg));
    rep.decision = Decision::Indeterminate;
    rep.verdict.decision = Decision::Indeterminate;
  }

  std::int64_t trials() const {
    if (opt.trials > 0) return opt.trials;
    if (inst.promise_gap_exponent) {
      const double p = std::pow(static_cast<double>(std::max(inst.num_qudits, 1)), *inst.promise_gap_exponent);
      return static_cast<std::int64_t>(std::ceil(9.0 * p * p));
    }
    return 1000;
  }

  void run();
};

void Decider::run() {
  rep.verdict.mode = opt.mode;
  // Step 1: types.
  rep.labels = label_qudits(inst);
  {
    std::vector<int> cl;
    std::string who;
    for (int q = 0; q < inst.num_qudits; ++q)
      if (rep.labels[q].tag == QuditTag::Conflict) {
        cl.insert(cl.end(), rep.labels[q].clauses.begin(), rep.labels[q].clauses.end());
        who += (who.empty() ? "" : ", ") + std::to_string(q);
      }
    if (!cl.empty()) return reject("step-1", "type-conflict", cl, "conflicting site types on qudit(s) " + who);
  }
  // Step 2: monogamy of the Bell-pair demands.
  rep.pairing = build_pairings(inst, rep.labels);
  if (!rep.pairing.conflicts.empty()) {
    std::vector<int> cl;
    for (const auto &c : rep.pairing.conflicts) cl.insert(cl.end(), c.clauses.begin(), c.clauses.end());
    const auto &n = rep.pairing.conflicts.front().node;
    return reject("step-2", "monogamy", cl,
                  "component " + std::to_string(n.qudit) + "." + std::string(to_string(n.comp)) +
                      " is paired with more than one partner");
  }
  // Step 3: an endpoint carrying both a start and an end role. The catalog
  // makes this a step-2 conflict already; kept as a guard.
  {
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> roles;
    for (size_t i = 0; i < inst.clauses.size(); ++i) {
      const auto &c = inst.clauses[i];
      if (is_start_kind(c.kind)) roles[c.sites[0]].first.push_back(static_cast<int>(i));
      if (c.kind == ClauseKind::End) roles[c.sites[0]].second.push_back(static_cast<int>(i));
    }
    for (const auto &[e, r] : roles)
      if (!r.first.empty() && !r.second.empty()) {
        std::vector<int> cl = r.first;
        cl.insert(cl.end(), r.second.begin(), r.second.end());
        return reject("step-3", "endpoint-both", cl, "endpoint " + std::to_string(e) + " is both start and end");
      }
  }
  // Steps 4-8: paths and cycles.
  rep.paths = decompose_paths(inst, rep.labels, rep.pairing);
  for (size_t p = 0; p < rep.paths.size(); ++p)
    if (rep.paths[p].end_clauses.size() > 1)
      rep.notes.push_back("path " + std::to_string(p) + " has " + std::to_string(rep.paths[p].end_clauses.size()) +
                          " End clauses; each is checked");

  if (inst.variant == Variant::QCMA) check_proof(inst, proof);

  // Full paths with a missing propagation center park at that center with
  // undefined inputs; supported when their qubits are private.
  std::vector<int> active, gapped;
  for (size_t i = 0; i < rep.paths.size(); ++i)
    if (rep.paths[i].kind == PathKind::Full) (rep.paths[i].gaps.empty() ? active : gapped).push_back(static_cast<int>(i));
  std::vector<std::vector<int>> logicals(rep.paths.size());
  for (size_t i = 0; i < rep.paths.size(); ++i)
    if (rep.paths[i].kind == PathKind::Full) logicals[i] = path_logicals(inst, rep.paths[i]);
  std::set<int> committed;
  std::vector<int> commit_clauses;
  for (size_t i = 0; i < inst.clauses.size(); ++i)
    if (inst.clauses[i].kind == ClauseKind::Commit) {
      committed.insert(inst.clauses[i].sites[0]);
      commit_clauses.push_back(static_cast<int>(i));
    }
  for (int g : gapped) {
    std::set<int> others(committed.begin(), committed.end());
    for (size_t j = 0; j < rep.paths.size(); ++j)
      if (static_cast<int>(j) != g && rep.paths[j].kind == PathKind::Full)
        others.insert(logicals[j].begin(), logicals[j].end());
    for (int q : logicals[g])
      if (others.count(q))
        return indeterminate("unsupported-structure", rep.paths[g].start_clauses,
                             "path with a missing propagation center shares qudit " + std::to_string(q));
    rep.notes.push_back("path " + std::to_string(g) + " parks at center " + std::to_string(rep.paths[g].gaps.front()) +
                        " with undefined inputs");
  }

  // Initial values over the active Full paths.
  std::vector<bool> clause_active(inst.clauses.size(), false);
  for (int p : active) {
    for (int c : rep.paths[p].start_clauses) clause_active[c] = true;
    for (int c : rep.paths[p].end_clauses) clause_active[c] = true;
    for (const auto &e : rep.paths[p].events) clause_active[e.clause] = true;
  }
  const CommitGroups groups = commit_groups(inst, proof, clause_active);
  if (!groups.offending.empty()) {
    std::vector<int> cl;
    for (size_t i = 0; i < inst.clauses.size(); ++i) {
      const auto &c = inst.clauses[i];
      const int q = c.kind == ClauseKind::StartUnk ? c.sites[3] : c.kind == ClauseKind::Commit ? c.sites[0] : -1;
      if (q >= 0 && std::count(groups.offending.begin(), groups.offending.end(), q)) cl.push_back(static_cast<int>(i));
    }
    return reject("step-9", "commitment-sharing", cl, "proof bits differ on a shared commitment");
  }
  const auto wq = witness_qudits(inst);
  std::vector<int> value(inst.num_qudits, -1);  // 0, 1, 2 (= |+>), -1 undefined
  {
    std::vector<std::set<int>> vals(inst.num_qudits);
    std::vector<std::vector<int>> why(inst.num_qudits);
    for (int p : active)
      for (int c : rep.paths[p].start_clauses) {
        const auto &cl = inst.clauses[c];
        const int q = cl.sites[3];
        why[q].push_back(c);
        if (cl.kind == ClauseKind::Start) vals[q].insert(0);
        if (cl.kind == ClauseKind::StartRand) vals[q].insert(2);
        if (cl.kind == ClauseKind::StartUnk) vals[q].insert(proof[index_in(wq, q)] - '0');
      }
    for (int q = 0; q < inst.num_qudits; ++q) {
      if (groups.group[q] >= 0 && rep.labels[q].tag == QuditTag::Logical) {
        vals[q].insert(groups.value.at(groups.group[q]));
        for (int c : commit_clauses)
          if (inst.clauses[c].sites[0] == q) why[q].push_back(c);
      }
      if (vals[q].size() > 1)
        return reject("step-9", "initializer-conflict", why[q],
                      "qudit " + std::to_string(q) + " is initialized to incompatible values");
      if (!vals[q].empty()) value[q] = *vals[q].begin();
    }
  }

  // Truncation: first center whose propagation clauses all consume an
  // undefined qubit.
  std::map<int, std::optional<int>> trunc;  // path -> center
  for (int p : active) {
    const ClockPath &path = rep.paths[p];
    const int len = static_cast<int>(path.clocks.size()) - 1;
    trunc[p] = std::nullopt;
    for (int t = 1; t < len && !trunc[p]; ++t) {
      int undefined = 0, total = 0;
      std::vector<int> cl;
      for (const auto &e : path.events) {
        if (e.center != t) continue;
        ++total;
        cl.push_back(e.clause);
        undefined += std::any_of(e.qudits.begin(), e.qudits.end(), [&](int q) { return value[q] < 0; });
      }
      if (undefined == total) {
        trunc[p] = t;
      } else if (undefined > 0) {
        return indeterminate("unsupported-structure", cl,
                             "propagation clauses at one center disagree on input definedness");
      }
    }
  }

  // Shared qubits and live-gated commitments.
  std::vector<ExtractedCircuit> ext;
  std::vector<std::optional<int>> tr;
  for (auto &ec : extract_circuits(inst, rep.paths)) {
    if (!trunc.count(ec.path)) continue;
    const ClockPath &path = rep.paths[ec.path];
    // circuit time of the truncating center = number of events before it + 1
    std::optional<int> t;
    if (trunc[ec.path]) {
      int before = 0;
      for (const auto &e : path.events) before += e.center < *trunc[ec.path];
      t = before + 1;
    }
    tr.push_back(t);
    ext.push_back(std::move(ec));
  }
  for (const auto &sc : check_shared_qubits(ext, tr)) {
    std::vector<int> cl = rep.labels[sc.qudit].clauses;
    std::string msg = "qudit " + std::to_string(sc.qudit) + " is gated on one clock path and used on another";
    if (inst.variant == Variant::CoRP)
      return indeterminate("unsupported-structure", cl, msg + " (reversible gates may fix it)");
    return reject("step-9", "shared-qubit", cl, msg);
  }
  for (size_t i = 0; i < ext.size(); ++i) {
    const auto &path = rep.paths[ext[i].path];
    for (const auto &e : path.events) {
      if (trunc[ext[i].path] && e.center >= *trunc[ext[i].path]) continue;
      for (int q : e.qudits)
        if (committed.count(q)) {
          std::vector<int> cl{e.clause};
          for (int c : commit_clauses)
            if (inst.clauses[c].sites[0] == q) cl.push_back(c);
          return reject("step-9", "commit-gated", cl, "committed qudit " + std::to_string(q) + " is gated");
        }
    }
  }

  // Simulation per active path.
  std::mt19937_64 rng(opt.seed);
  for (size_t i = 0; i < ext.size(); ++i) {
    const ExtractedCircuit &ec = ext[i];
    const ClockPath &path = rep.paths[ec.path];
    PathCircuit pc;
    pc.path = ec.path;
    pc.qudits = ec.qudits;
    pc.circuit = ec.circuit;
    pc.truncated_at = tr[i];
    // Effective initial values, including those fixed by other paths.
    std::vector<int> defined;
    for (size_t k = 0; k < ec.qudits.size(); ++k) {
      const int v = value[ec.qudits[k]];
      InitTag &tag = pc.circuit.init[k];
      tag = v < 0 ? InitTag::Free : v == 2 ? InitTag::Coin : v == 0 && tag != InitTag::Witness ? InitTag::Zero : InitTag::Witness;
      if (v >= 0) defined.push_back(static_cast<int>(k));
    }
    if (static_cast<int>(defined.size()) > opt.max_qubits)
      throw std::runtime_error("simulation needs " + std::to_string(defined.size()) + " qubits, cap is " +
                               std::to_string(opt.max_qubits));
    std::vector<int> dv;
    for (int k : defined) dv.push_back(value[ec.qudits[k]]);
    const int n = static_cast<int>(defined.size());
    State s = product_state(dv);
    const int len = static_cast<int>(path.clocks.size()) - 1;
    const int stop = trunc[ec.path] ? *trunc[ec.path] : len;
    for (int t = 1; t < stop; ++t) {
      std::vector<const GateEvent *> evs;
      for (const auto &e : path.events)
        if (e.center == t &&
            std::none_of(evs.begin(), evs.end(), [&](const GateEvent *o) { return o->gate == e.gate && o->qudits == e.qudits; }))
          evs.push_back(&e);
      std::optional<State> next;
      for (const GateEvent *e : evs) {
        std::vector<int> qs;
        for (int q : e->qudits) qs.push_back(index_in(defined, index_in(ec.qudits, q)));
        State r = apply_gate(s, n, find_gate(inst.variant, e->gate)->matrix, qs);
        if (next && *next != r) {
          std::vector<int> cl;
          for (const GateEvent *o : evs) cl.push_back(o->clause);
          rep.circuits.push_back(pc);
          return reject("step-9", "conflicting-propagators", cl,
                        "propagation clauses at center " + std::to_string(t) + " disagree");
        }
        next = std::move(r);
      }
      s = std::move(*next);
    }
    if (!trunc[ec.path] && !path.end_clauses.empty()) {
      std::vector<int> checked;
      for (int o : ec.circuit.outputs)
        if (value[ec.qudits[o]] >= 0) checked.push_back(index_in(defined, o));
      const ExactScalar p = prob_any_one(s, n, checked);
      pc.end_checked = true;
      pc.p_one = p.str();
      Verdict v = verdict_from(p, opt.mode, trials(), rng);
      rep.verdict.p_reject = std::max(rep.verdict.p_reject, v.p_reject);
      rep.verdict.trials += v.trials;
      rep.verdict.ones += v.ones;
      rep.circuits.push_back(pc);
      if (v.decision == Decision::Reject)
        return reject("step-9", "end-check", path.end_clauses,
                      "checked qubit reads 1 with probability " + std::to_string(v.p_reject));
      continue;
    }
    rep.circuits.push_back(pc);
  }
  for (int g : gapped) {
    PathCircuit pc;
    pc.path = g;
    pc.qudits = logicals[g];
    rep.circuits.push_back(pc);
  }
  rep.decision = Decision::Accept;
  rep.verdict.decision = Decision::Accept;
}

}  // namespace

AnalysisReport decide(const QcspInstance &inst, const std::optional<std::string> &proof, const DecideOptions &opt) {
  validate_instance(inst, true);
  if (inst.variant == Variant::QCMA && !proof) throw InputError("/proof", "QCMA instances require a proof");
  if (inst.variant != Variant::QCMA && proof && !proof->empty())
    throw InputError("/proof", "a proof is only meaningful for QCMA instances");
  Decider d{inst, opt, proof.value_or(""), {}};
  d.run();
  return std::move(d.rep);
}

// ------------------------------------------------------------------ report

std::string report_json(const AnalysisReport &r, const std::string &config_json) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = json::parse(config_json);
  json labels = json::array();
  for (size_t q = 0; q < r.labels.size(); ++q)
    labels.push_back({{"qudit", q}, {"tag", to_string(r.labels[q].tag)}, {"clauses", r.labels[q].clauses}});
  j["labels"] = labels;
  auto node = [](const PairNode &n) { return std::to_string(n.qudit) + "." + std::string(to_string(n.comp)); };
  json edges = json::array(), conflicts = json::array();
  for (const auto &e : r.pairing.edges) edges.push_back({{"a", node(e.a)}, {"b", node(e.b)}, {"clauses", e.clauses}});
  for (const auto &c : r.pairing.conflicts) conflicts.push_back({{"node", node(c.node)}, {"clauses", c.clauses}});
  j["pairing"] = {{"edges", edges}, {"conflicts", conflicts}};
  json paths = json::array();
  for (const auto &p : r.paths) {
    json ev = json::array();
    for (const auto &e : p.events)
      ev.push_back({{"center", e.center}, {"clause", e.clause}, {"gate", e.gate}, {"qudits", e.qudits}});
    json jp = {{"kind", to_string(p.kind)}, {"clocks", p.clocks}};
    jp["start_endpoint"] = p.start_endpoint >= 0 ? json(p.start_endpoint) : json(nullptr);
    jp["end_endpoint"] = p.end_endpoint >= 0 ? json(p.end_endpoint) : json(nullptr);
    jp["parked_value"] = p.parked_value >= 0 ? json(p.parked_value) : json(nullptr);
    jp["gaps"] = p.gaps;
    jp["events"] = ev;
    paths.push_back(jp);
  }
  j["paths"] = paths;
  json circuits = json::array();
  for (const auto &c : r.circuits) {
    json jc = {{"path", c.path}, {"qudits", c.qudits}};
    jc["circuit"] = json::parse(serialize_circuit(c.circuit));
    jc["truncated_at"] = c.truncated_at ? json(*c.truncated_at) : json(nullptr);
    jc["end_checked"] = c.end_checked;
    jc["p_one"] = c.end_checked ? json(c.p_one) : json(nullptr);
    circuits.push_back(jc);
  }
  j["circuits"] = circuits;
  json v = {{"decision", to_string(r.decision)}, {"mode", r.verdict.mode == SimMode::Exact ? "ExactAmplitude" : "Sampled"}};
  if (r.verdict.mode == SimMode::Sampled) {
    v["p_reject"] = r.verdict.p_reject;
    v["trials"] = r.verdict.trials;
    v["ones"] = r.verdict.ones;
  }
  j["verdict"] = v;
  if (r.reason)
    j["reason"] = {{"step", r.reason->step},
                   {"code", r.reason->code},
                   {"clauses", r.reason->clauses},
                   {"message", r.reason->message}};
  else
    j["reason"] = nullptr;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

}  // namespace qcsp
