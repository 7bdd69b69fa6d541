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
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qcsp/decider.hpp"
#include "qcsp/operator.hpp"

namespace qcsp {

/// Disjoint union; b's sites are shifted past a's.
QcspInstance merge_instances(const QcspInstance &a, const QcspInstance &b);
/// Replaces every use of site `drop` by `keep`, then removes `drop`.
QcspInstance identify_sites(const QcspInstance &inst, int keep, int drop);

/// Uniform random gate word on m qubits for the variant's gate set.
Circuit random_circuit(std::mt19937_64 &rng, Variant v, int m, int k);

/// splitmix64 of (master + index): the per-case seed.
std::uint64_t case_seed(std::uint64_t master, std::uint64_t index);

struct CorpusCase {
  std::string name;
  std::string branch;
  QcspInstance instance;
};

/// Deterministic corpus for the seed; covers every structural branch of the
/// decider plus compiled, undefined-input, shared-qubit, QCMA and CoRP cases.
std::vector<CorpusCase> generate_corpus(std::uint64_t seed);

struct CorpusOptions {
  std::uint64_t seed = 1;
  bool inject_bug = false;  // harness self-test: end-check rejections become accepts
  HamiltonianOptions hamiltonian;
  EigenOptions eigen;
  double ff_below = kFrustrationFreeBelow;
  double frustrated_above = kFrustratedAbove;
  int threads = 1;
};

struct CaseOutcome {
  std::string name;
  std::string branch;
  Decision decision = Decision::Accept;
  std::string reason;        // reject code, empty on accept
  std::string proof;         // QCMA: first accepted proof, else last tried
  double lambda_min = 0.0;
  std::string method;
  Satisfiability oracle = Satisfiability::Indeterminate;
  bool agree = false;
  double seconds = 0.0;
};

/// QCMA instances are decided over every proof; Accept iff some proof is.
CaseOutcome run_case(const CorpusCase &c, const CorpusOptions &opt, std::uint64_t seed);

struct CorpusSummary {
  std::vector<CaseOutcome> cases;
  int agree = 0;
  int disagree = 0;
  int oracle_band = 0;  // oracle lambda in the indeterminate band
  std::map<std::string, int> per_branch;
};

CorpusSummary run_corpus(const std::vector<CorpusCase> &cases, const CorpusOptions &opt);

}  // namespace qcsp
