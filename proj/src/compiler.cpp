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

#include "qcsp/compiler.hpp"

namespace qcsp {

int CompilationLayout::num_sites() const {
  int extra = 0;
  for (int p : commit) extra += p >= 0;
  return m + k + 4 + extra;
}

CompilationLayout layout_for(const Circuit &c) {
  CompilationLayout l;
  l.m = c.num_qubits;
  l.k = static_cast<int>(c.gates.size());
  l.commit.assign(c.num_qubits, -1);
  int next = l.end() + 1;
  for (int i = 0; i < c.num_qubits; ++i)
    if (c.init[i] == InitTag::Witness) l.commit[i] = next++;
  return l;
}

namespace {

QcspInstance emit(Circuit c, Variant v) {
  c.variant = v;
  validate_circuit(c);
  const CompilationLayout l = layout_for(c);
  QcspInstance inst;
  inst.variant = v;
  inst.num_qudits = l.num_sites();
  const int s = l.start(), t0 = l.t(0), t1 = l.t(1);
  for (int i = 0; i < l.m; ++i) {
    switch (c.init[i]) {
      case InitTag::Zero: inst.clauses.push_back({ClauseKind::Start, "", {s, t0, t1, l.q(i)}}); break;
      case InitTag::Coin: inst.clauses.push_back({ClauseKind::StartRand, "", {s, t0, t1, l.q(i)}}); break;
      case InitTag::Witness:
        inst.clauses.push_back({ClauseKind::StartUnk, "", {s, t0, t1, l.q(i), l.commit[i]}});
        break;
      case InitTag::Free: break;
    }
  }
  for (int t = 1; t <= l.k; ++t) {
    const GateApplication &g = c.gates[t - 1];
    ClauseApplication a{ClauseKind::PropU, g.gate, {}};
    for (int q : g.qubits) a.sites.push_back(l.q(q));
    a.sites.insert(a.sites.end(), {l.t(t - 1), l.t(t), l.t(t + 1)});
    inst.clauses.push_back(std::move(a));
  }
  for (int o : c.outputs) inst.clauses.push_back({ClauseKind::End, "", {l.end(), l.t(l.k + 1), l.t(l.k), l.q(o)}});
  validate_instance(inst);
  return inst;
}

}  // namespace

QcspInstance compile_bqp1(const Circuit &c) { return emit(c, Variant::BQP1); }
QcspInstance compile_qcma(const Circuit &c) { return emit(c, Variant::QCMA); }
QcspInstance compile_corp(const Circuit &c) { return emit(c, Variant::CoRP); }

QcspInstance compile(const Circuit &c) {
  switch (c.variant) {
    case Variant::BQP1: return compile_bqp1(c);
    case Variant::QCMA: return compile_qcma(c);
    case Variant::CoRP: return compile_corp(c);
  }
  return compile_bqp1(c);
}

std::vector<GateApplication> not_word(Variant v, int qubit, int num_qubits) {
  if (v == Variant::CoRP) {
    std::vector<int> wires{qubit};
    for (int q = 0; q < num_qubits && wires.size() < 3; ++q)
      if (q != qubit) wires.push_back(q);
    if (wires.size() < 3) throw InputError("/num_qubits", "CoRP polarity adjustment needs at least 3 qubits");
    return {{"NOT3", wires}};
  }
  std::vector<GateApplication> w;
  for (int i = 0; i < 4; ++i) {
    w.push_back({"H", {qubit}});
    w.push_back({"HT", {qubit}});
  }
  return w;
}

Circuit acceptance_polarity_adjust(const Circuit &c) {
  Circuit out = c;
  for (int o : c.outputs) {
    auto w = not_word(c.variant, o, c.num_qubits);
    out.gates.insert(out.gates.end(), w.begin(), w.end());
  }
  return out;
}

}  // namespace qcsp
