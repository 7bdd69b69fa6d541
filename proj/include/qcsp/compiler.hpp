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

#include <vector>

#include "qcsp/instance.hpp"

namespace qcsp {

/// Site roles of a compiled instance:
///   Q_1..Q_m -> 0..m-1, T_0..T_{k+1} -> m..m+k+1, S -> m+k+2, E -> m+k+3,
///   then one commitment site per Witness qubit in qubit order.
struct CompilationLayout {
  int m = 0;
  int k = 0;
  std::vector<int> commit;  // per qubit; -1 if none

  int q(int i) const { return i; }
  int t(int j) const { return m + j; }
  int start() const { return m + k + 2; }
  int end() const { return m + k + 3; }
  int num_sites() const;
};

CompilationLayout layout_for(const Circuit &c);

QcspInstance compile_bqp1(const Circuit &c);
QcspInstance compile_qcma(const Circuit &c);
QcspInstance compile_corp(const Circuit &c);
/// Dispatches on c.variant.
QcspInstance compile(const Circuit &c);

/// The gate word appended per output qubit. Clifford+T variants: (H, HT)
/// repeated four times, whose product is (H T H)^4 = H Z H = X. CoRP: NOT3
/// with the output as its flipped wire and the two lowest other qubits idle.
std::vector<GateApplication> not_word(Variant v, int qubit, int num_qubits);

/// Appends not_word on every output qubit. Throws InputError for CoRP
/// circuits with fewer than three qubits.
Circuit acceptance_polarity_adjust(const Circuit &c);

}  // namespace qcsp
