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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcsp/gates.hpp"
#include "qcsp/layout.hpp"

namespace qcsp {

/// File-level kinds come first; the rest are catalog pieces that only
/// programmatic instances may use (oracle composition and tests).
enum class ClauseKind {
  Start,
  End,
  PropU,
  StartUnk,
  Commit,
  StartRand,
  TypeL,
  TypeE,
  TypeC,
  TypeP,
  BellPair,
  PD,
};

std::string_view to_string(ClauseKind k);
std::optional<ClauseKind> parse_clause_kind(std::string_view s);
bool is_file_kind(ClauseKind k);
bool kind_allowed(Variant v, ClauseKind k);

/// Positional site types. PropU takes gate_arity logical sites followed by
/// three clocks (t-1, t, t+1). Start, StartRand and End take
/// (endpoint, boundary clock, adjacent clock, logical); StartUnk appends a
/// commitment site.
std::vector<SiteType> site_types(ClauseKind k, int gate_arity = 0);
int arity(ClauseKind k, int gate_arity = 0);

struct ClauseApplication {
  ClauseKind kind = ClauseKind::Start;
  std::string gate;  // non-empty iff kind == PropU
  std::vector<int> sites;
  bool operator==(const ClauseApplication &) const = default;
};

struct QcspInstance {
  Variant variant = Variant::BQP1;
  int num_qudits = 0;
  std::vector<ClauseApplication> clauses;
  std::optional<int> promise_gap_exponent;

  int local_dim() const { return qcsp::local_dim(variant); }
  bool operator==(const QcspInstance &) const = default;
};

/// Parse or validation failure. `where` is "line L, column C" for syntax
/// errors and a JSON pointer such as "/clauses/2/sites" otherwise.
class InputError : public std::runtime_error {
 public:
  InputError(std::string where, const std::string &what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string &where() const { return where_; }

 private:
  std::string where_;
};

/// Throws InputError. Catalog-only kinds are rejected unless allow_catalog.
void validate_instance(const QcspInstance &inst, bool allow_catalog = false);
int clause_gate_arity(const QcspInstance &inst, const ClauseApplication &c);

QcspInstance parse_instance(std::string_view text);
std::string serialize_instance(const QcspInstance &inst);

enum class InitTag { Zero, Witness, Coin, Free };
std::string_view to_string(InitTag t);
std::optional<InitTag> parse_init_tag(std::string_view s);

struct GateApplication {
  std::string gate;
  std::vector<int> qubits;
  bool operator==(const GateApplication &) const = default;
};

struct Circuit {
  Variant variant = Variant::BQP1;
  int num_qubits = 0;
  std::vector<InitTag> init;
  std::vector<GateApplication> gates;
  std::vector<int> outputs{0};
  bool operator==(const Circuit &) const = default;
};

void validate_circuit(const Circuit &c);
Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit &c);

}  // namespace qcsp
