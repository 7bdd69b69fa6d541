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

#include <optional>
#include <vector>

#include "qcsp/instance.hpp"
#include "qcsp/operator.hpp"

namespace qcsp {

/// Compiled instance, its type-restricted space and the history state in it.
struct HistoryState {
  QcspInstance instance;
  SiteSpace space;
  Vec psi;
};

/// Uniform superposition over times 0..k (or 0..t-1 when truncated at gate
/// time t) of the circuit state tensored with the unary clock and the chain
/// of Bell pairs. Free qubits sit in U_L, Coin qubits in |+>, Witness qubits
/// and their commitment sites carry `witness_bits` in qubit order.
/// Throws CapExceeded above `cap`.
HistoryState build_history_state(const Circuit &c, std::optional<int> truncate_at = std::nullopt,
                                 const std::vector<int> &witness_bits = {},
                                 std::uint64_t cap = std::uint64_t(1) << 22);

}  // namespace qcsp
