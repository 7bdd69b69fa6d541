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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/exact.hpp"
#include "qcsp/instance.hpp"

namespace qcsp {

enum class QuditTag { Logical, Clock, Endpoint, Commitment, Unused, Conflict };
std::string_view to_string(QuditTag t);

struct QuditLabel {
  QuditTag tag = QuditTag::Unused;
  std::vector<SiteType> demanded;
  std::vector<int> clauses;  // clauses touching the qudit
};

std::vector<QuditLabel> label_qudits(const QcspInstance &inst);

enum class Component { CA, CB, EC };
std::string_view to_string(Component c);

struct PairNode {
  int qudit = 0;
  Component comp = Component::CA;
  auto operator<=>(const PairNode &) const = default;
};

struct PairEdge {
  PairNode a, b;  // a < b
  std::vector<int> clauses;
};

struct PairingGraph {
  std::vector<PairEdge> edges;
  struct Conflict {
    PairNode node;
    std::vector<int> clauses;
  };
  std::vector<Conflict> conflicts;  // nodes of degree >= 2
};

PairingGraph build_pairings(const QcspInstance &inst, const std::vector<QuditLabel> &labels);

enum class PathKind { Cycle, NoEndpoints, NoStart, NoEnd, Full };
std::string_view to_string(PathKind k);

struct GateEvent {
  int center = 0;  // position of the middle clock on the path, 1..L-1
  int clause = 0;
  std::string gate;
  std::vector<int> qudits;
};

struct ClockPath {
  PathKind kind = PathKind::NoEndpoints;
  std::vector<int> clocks;  // in time order
  int start_endpoint = -1;
  int end_endpoint = -1;
  int parked_value = -1;  // pinned CL value for ignorable paths
  std::vector<GateEvent> events;  // sorted by center, then clause
  std::vector<int> start_clauses, end_clauses;
  std::vector<int> gaps;  // centers without a propagation clause
};

/// Requires a conflict-free graph.
std::vector<ClockPath> decompose_paths(const QcspInstance &inst, const std::vector<QuditLabel> &labels,
                                       const PairingGraph &graph);

/// One circuit per Full path. Qubit i of the circuit is qudits[i] (sorted).
struct ExtractedCircuit {
  int path = 0;
  std::vector<int> qudits;
  Circuit circuit;
};
std::vector<ExtractedCircuit> extract_circuits(const QcspInstance &inst, const std::vector<ClockPath> &paths);

/// Earliest gate time (1-based) consuming a Free qubit, if any.
std::optional<int> propagate_undefined(const Circuit &c);

/// Qubits initialized or checked in several circuits and gated in at least
/// one of them, after truncation.
struct SharedConflict {
  int qudit = 0;
  std::vector<int> gated_paths;
  std::vector<int> using_paths;
};
std::vector<SharedConflict> check_shared_qubits(const std::vector<ExtractedCircuit> &circuits,
                                                const std::vector<std::optional<int>> &truncation);

/// Logical qudits of StartUnk clauses, ascending; the proof's bit order.
std::vector<int> witness_qudits(const QcspInstance &inst);

/// Commitment sharing over all StartUnk and Commit clauses. Returns the
/// offending qudits, empty if consistent. Throws InputError on a proof
/// length mismatch.
std::vector<int> check_commitments(const QcspInstance &inst, const std::string &proof);

enum class Decision { Accept, Reject, Indeterminate };
std::string_view to_string(Decision d);

enum class SimMode { Exact, Sampled };

struct Verdict {
  Decision decision = Decision::Accept;
  SimMode mode = SimMode::Exact;
  double p_reject = 0.0;  // sampled: exact output-1 probability
  std::int64_t trials = 0;
  std::int64_t ones = 0;
};

/// Exact: accept iff the amplitude mass on "some checked qubit is 1" is
/// exactly zero. Sampled: `trials` Bernoulli draws from a generator seeded
/// with `seed`; reject on any 1.
struct SimulationResult {
  ExactScalar p_one;  // exact probability (real)
  Verdict verdict;
};
SimulationResult simulate_and_verify(const Circuit &c, SimMode mode, std::int64_t trials, std::uint64_t seed,
                                     const std::vector<int> &witness_bits = {});

struct DecideOptions {
  SimMode mode = SimMode::Exact;
  std::int64_t trials = 0;  // 0: ceil(9 p^2) with a gap exponent, else 1000
  std::uint64_t seed = 1;
  int max_qubits = 24;
};

struct RejectReason {
  std::string step;
  std::string code;
  std::vector<int> clauses;
  std::string message;
};

struct PathCircuit {
  int path = 0;
  std::vector<int> qudits;
  Circuit circuit;
  std::optional<int> truncated_at;  // circuit time whose gate does not fire
  bool end_checked = false;
  std::string p_one;  // exact output-1 probability when checked
};

struct AnalysisReport {
  std::vector<QuditLabel> labels;
  PairingGraph pairing;
  std::vector<ClockPath> paths;
  std::vector<PathCircuit> circuits;
  Decision decision = Decision::Accept;
  std::optional<RejectReason> reason;
  Verdict verdict;
  std::vector<std::string> notes;
};

/// Throws InputError if a QCMA instance has no proof or the wrong length.
AnalysisReport decide(const QcspInstance &inst, const std::optional<std::string> &proof,
                      const DecideOptions &opt = {});

inline constexpr int kReportSchemaVersion = 1;
std::string report_json(const AnalysisReport &r, const std::string &config_json = "{}");

}  // namespace qcsp
