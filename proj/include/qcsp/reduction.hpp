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

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/instance.hpp"
#include "qcsp/operator.hpp"

namespace qcsp {

using Rational = boost::multiprecision::cpp_rational;

/// Amplitudes over a qubit register, first qubit most significant.
struct GadgetState {
  int num_qubits = 0;
  std::vector<Rational> amp;
};

Rational inner(const GadgetState &a, const GadgetState &b);
Vec to_vec(const GadgetState &s);

/// The four rational 4-qubit states spanning the kernel of H_{4->2}.
std::array<GadgetState, 4> build_psi_states();

using RationalMatrix = std::vector<std::vector<Rational>>;
RationalMatrix rational_product(const RationalMatrix &a, const RationalMatrix &b);

/// I - sum |psi_i><psi_i|, exactly.
RationalMatrix h42_exact();
/// The same as a one-term operator on four qubits.
SparseOperator build_h42();
/// Isometry sending 4-qudit state |i> to psi_{i+1} (16 x 4).
SpMat psi_isometry();

struct PlacementRecord {
  std::array<int, 4> placement{};
  double lambda_min = 0.0;
  Satisfiability verdict = Satisfiability::Indeterminate;
};

struct PlacementCheckResult {
  std::vector<PlacementRecord> records;  // lexicographic placement order
  std::vector<std::array<int, 4>> frustration_free;
  int frustrated = 0;
  int indeterminate = 0;
};

/// Copy A on qubits (0,1,2,3) of seven; copy B on every ordered 4-tuple of
/// distinct qubits. Records are in lexicographic order of B.
PlacementCheckResult verify_uniqueness_840(const EigenOptions &opt = {});

/// X^a as the principal matrix power: |+><+| + e^{i pi a} |-><-|.
Dense x_power(double a);

struct T2Gadget {
  int n = 0;
  Vec state;            // (I (x) X^theta (x) ... (x) X^{(n-1) theta}) GHZ_n
  SparseOperator op;    // I - |state><state| on n qubits
};

/// theta = 1 / (2 (n + 1)). Throws std::invalid_argument for n < 1.
T2Gadget build_t2(int n);

struct T2PlacementRecord {
  std::vector<int> placement;
  double lambda_min = 0.0;
  Satisfiability verdict = Satisfiability::Indeterminate;
};

struct T2CheckResult {
  int n = 0;
  int num_qubits = 0;
  int kernel_dim = 0;  // of a single copy
  std::vector<T2PlacementRecord> records;
  std::vector<std::vector<int>> frustration_free;
  int frustrated = 0;
  int indeterminate = 0;
};

/// Copy A on qubits 0..n-1 of min(max_qubits, 2n - 1); copy B on every other
/// ordered n-tuple of distinct qubits, in lexicographic order.
T2CheckResult verify_t2_placements(int n, int max_qubits = 6, const EigenOptions &opt = {});

/// Qudit CSP with explicit clause matrices (d^k x d^k, Hermitian PSD).
struct ClauseUse {
  int type = 0;
  std::vector<int> sites;
  bool operator==(const ClauseUse &) const = default;
};

struct QuditCsp {
  int d = 2;
  int num_qudits = 0;
  std::vector<SpMat> clause_types;
  std::vector<ClauseUse> clauses;
};

/// Checks dimensions, arity, ranges, distinct sites and Hermiticity.
void validate_qudit_csp(const QuditCsp &c);
int clause_arity(const QuditCsp &c, int type);

/// Qudit i occupies qubits [x i, x i + x - 1]; within a block, 4-qudit j
/// occupies qubits [4 j, 4 j + 3] and its state 2 * data + ent.
struct ReductionMap {
  int d = 2;
  int data_4qudits = 1;   // ceil(log2 d)
  int block_4qudits = 1;  // 2^ceil(log2 ceil(log2 d)), data bits used in a block
  int x = 4;              // qubits per qudit
  int first_qubit(int qudit) const { return x * qudit; }
};
ReductionMap reduction_map(int d);

struct QubitCsp {
  int d = 2;
  int x = 4;
  int num_qubits = 0;
  std::vector<SpMat> clause_types;  // unchanged from the source
  std::vector<ClauseUse> clauses;   // sites are qubits, x per source site
};

/// Throws InputError on block arithmetic overflow.
QubitCsp reduce_forward(const QuditCsp &c);

struct BackwardResult {
  bool consistent = true;
  QuditCsp instance;
  /// First pair of inconsistent collections (clause, position) found.
  std::optional<std::array<int, 4>> conflict;
};

/// Pairwise consistency of two collections over indices i != j.
bool collections_consistent(const std::vector<int> &a, const std::vector<int> &b);

/// Maps each collection [a_1..a_x] to qudit a_1. On an inconsistent input
/// returns a one-qudit instance with the identity as its only clause.
BackwardResult reduce_backward(const QubitCsp &q);

/// Drops qudits no clause touches; the rest keep their relative order.
QuditCsp compact_qudits(const QuditCsp &c);
/// Equal after compact_qudits on both sides, clause matrices exactly equal.
bool same_up_to_renaming(const QuditCsp &a, const QuditCsp &b);

/// Catalog clause matrices on full local dimension, one type per distinct
/// (kind, gate) pair in order of first use.
QuditCsp to_qudit_csp(const QcspInstance &inst);

/// The 4-qudit level operator of one lifted clause: H on the data bits of the
/// blocks (zero on unused data values), plus T_1 and T_2 per block.
Dense lifted_clause(const SpMat &h, int arity, const ReductionMap &map, std::uint64_t cap = 4096);

SparseOperator qudit_hamiltonian(const QuditCsp &c);
/// Each clause becomes W M W^dagger with W the psi isometry on every 4-qudit
/// of its blocks, plus one H_{4->2} per 4-qudit.
SparseOperator qubit_hamiltonian(const QubitCsp &q, std::uint64_t lifted_cap = 4096);

std::string serialize_qudit_csp(const QuditCsp &c);
QuditCsp parse_qudit_csp(const std::string &text);
std::string serialize_qubit_csp(const QubitCsp &q);
/// Checks ranges only; collection consistency is reduce_backward's job.
QubitCsp parse_qubit_csp(const std::string &text);

}  // namespace qcsp
