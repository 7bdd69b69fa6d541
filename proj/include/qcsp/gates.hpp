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

#pragma once

#include <string>
#include <vector>

#include "qcsp/exact.hpp"
#include "qcsp/layout.hpp"

namespace qcsp {

/// A gate on `arity` qubits. The first listed qubit is the most significant
/// bit of the matrix index.
struct GateSpec {
  std::string id;
  int arity = 0;
  ExactMatrix matrix;
};

/// BQP1 and QCMA: {H, HT, HHCNOT} where HT is the product H*T (T acts first)
/// and HHCNOT is (H x H)*CNOT (CNOT acts first, control on the first qubit).
/// CoRP: {TOF, CNOT3, NOT3}, all on three wires; CNOT3 and NOT3 idle the
/// trailing wires.
const std::vector<GateSpec> &builtin_gate_set(Variant v);

/// nullptr when `id` is not in the variant's set.
const GateSpec *find_gate(Variant v, const std::string &id);

ExactMatrix hadamard();
ExactMatrix t_gate();
ExactMatrix cnot();

}  // namespace qcsp
