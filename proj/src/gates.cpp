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

#include "qcsp/gates.hpp"

namespace qcsp {

ExactMatrix hadamard() {
  ExactMatrix h(2);
  ExactScalar s = ExactScalar::sqrt2_inv(1);
  h(0, 0) = s;
  h(0, 1) = s;
  h(1, 0) = s;
  h(1, 1) = -s;
  return h;
}

ExactMatrix t_gate() {
  ExactMatrix t(2);
  t(0, 0) = 1;
  t(1, 1) = ExactScalar::omega(1);
  return t;
}

ExactMatrix cnot() {
  ExactMatrix m(4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

namespace {

ExactMatrix permutation(int dim, int (*f)(int)) {
  ExactMatrix m(dim);
  for (int x = 0; x < dim; ++x) m(f(x), x) = 1;
  return m;
}

std::vector<GateSpec> make_clifford_t() {
  ExactMatrix h = hadamard();
  return {
      {"H", 1, h},
      {"HT", 1, h * t_gate()},
      {"HHCNOT", 2, h.kron(h) * cnot()},
  };
}

// Bits: wire 0 is the most significant of three.
std::vector<GateSpec> make_reversible() {
  return {
      {"TOF", 3, permutation(8, [](int x) { return (x & 6) == 6 ? x ^ 1 : x; })},
      {"CNOT3", 3, permutation(8, [](int x) { return (x & 4) ? x ^ 2 : x; })},
      {"NOT3", 3, permutation(8, [](int x) { return x ^ 4; })},
  };
}

}  // namespace

const std::vector<GateSpec> &builtin_gate_set(Variant v) {
  static const std::vector<GateSpec> clifford_t = make_clifford_t();
  static const std::vector<GateSpec> reversible = make_reversible();
  return v == Variant::CoRP ? reversible : clifford_t;
}

const GateSpec *find_gate(Variant v, const std::string &id) {
  for (const GateSpec &g : builtin_gate_set(v))
    if (g.id == id) return &g;
  return nullptr;
}

}  // namespace qcsp
