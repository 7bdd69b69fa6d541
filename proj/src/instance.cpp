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

#include "qcsp/instance.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

namespace qcsp {

using json = nlohmann::json;

namespace {

struct KindInfo {
  ClauseKind kind;
  const char *name;
};

constexpr KindInfo kKinds[] = {
    {ClauseKind::Start, "Start"},   {ClauseKind::End, "End"},
    {ClauseKind::PropU, "PropU"},   {ClauseKind::StartUnk, "StartUnk"},
    {ClauseKind::Commit, "Commit"}, {ClauseKind::StartRand, "StartRand"},
    {ClauseKind::TypeL, "TypeL"},   {ClauseKind::TypeE, "TypeE"},
    {ClauseKind::TypeC, "TypeC"},   {ClauseKind::TypeP, "TypeP"},
    {ClauseKind::BellPair, "BellPair"}, {ClauseKind::PD, "PD"},
};

std::string at(const std::string &ptr, const std::string &key) { return ptr + "/" + key; }
std::string at(const std::string &ptr, size_t i) { return ptr + "/" + std::to_string(i); }

// Byte offset -> "line L, column C" (1-based).
std::string locate(std::string_view text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    std::string msg = e.what();
    auto pos = msg.find("]: ");
    if (pos != std::string::npos) msg = msg.substr(pos + 3);
    throw InputError(locate(text, e.byte > 0 ? e.byte - 1 : 0), "syntax error: " + msg);
  }
}

void require_object(const json &j, const std::string &ptr, std::initializer_list<const char *> allowed) {
  if (!j.is_object()) throw InputError(ptr.empty() ? "/" : ptr, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char *a : allowed) ok = ok || it.key() == a;
    if (!ok) throw InputError(at(ptr, it.key()), "unknown field");
  }
}

const json &field(const json &j, const std::string &ptr, const char *key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(at(ptr, key), "missing required field");
  return *it;
}

int as_int(const json &j, const std::string &ptr) {
  if (!j.is_number_integer()) throw InputError(ptr, "expected an integer");
  auto v = j.get<long long>();
  if (v < 0 || v > (1LL << 30)) throw InputError(ptr, "integer out of range");
  return static_cast<int>(v);
}

std::string as_string(const json &j, const std::string &ptr) {
  if (!j.is_string()) throw InputError(ptr, "expected a string");
  return j.get<std::string>();
}

std::vector<int> as_int_list(const json &j, const std::string &ptr) {
  if (!j.is_array()) throw InputError(ptr, "expected an array");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], at(ptr, i)));
  return out;
}

Variant as_variant(const json &j, const std::string &ptr) {
  auto v = parse_variant(as_string(j, ptr));
  if (!v) throw InputError(ptr, "unknown variant '" + j.get<std::string>() + "'");
  return *v;
}

std::string int_list(const std::vector<int> &v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace

std::string_view to_string(ClauseKind k) {
  for (const auto &e : kKinds)
    if (e.kind == k) return e.name;
  return "?";
}

std::optional<ClauseKind> parse_clause_kind(std::string_view s) {
  for (const auto &e : kKinds)
    if (s == e.name) return e.kind;
  return std::nullopt;
}

bool is_file_kind(ClauseKind k) {
  switch (k) {
    case ClauseKind::Start:
    case ClauseKind::End:
    case ClauseKind::PropU:
    case ClauseKind::StartUnk:
    case ClauseKind::Commit:
    case ClauseKind::StartRand: return true;
    default: return false;
  }
}

bool kind_allowed(Variant v, ClauseKind k) {
  switch (k) {
    case ClauseKind::StartRand: return v == Variant::CoRP;
    case ClauseKind::StartUnk:
    case ClauseKind::Commit: return v == Variant::QCMA;
    case ClauseKind::TypeP: return v != Variant::BQP1;
    default: return true;
  }
}

std::vector<SiteType> site_types(ClauseKind k, int gate_arity) {
  using S = SiteType;
  switch (k) {
    case ClauseKind::Start:
    case ClauseKind::StartRand:
    case ClauseKind::End: return {S::Endpoint, S::Clock, S::Clock, S::Logical};
    case ClauseKind::StartUnk: return {S::Endpoint, S::Clock, S::Clock, S::Logical, S::Commitment};
    case ClauseKind::Commit: return {S::Logical, S::Commitment};
    case ClauseKind::PropU: {
      std::vector<S> t(gate_arity, S::Logical);
      t.insert(t.end(), {S::Clock, S::Clock, S::Clock});
      return t;
    }
    case ClauseKind::TypeL:
    case ClauseKind::PD: return {S::Logical};
    case ClauseKind::TypeE: return {S::Endpoint};
    case ClauseKind::TypeC: return {S::Clock};
    case ClauseKind::TypeP: return {S::Commitment};
    case ClauseKind::BellPair: return {S::Clock, S::Clock};
  }
  return {};
}

int arity(ClauseKind k, int gate_arity) { return static_cast<int>(site_types(k, gate_arity).size()); }

int clause_gate_arity(const QcspInstance &inst, const ClauseApplication &c) {
  if (c.kind != ClauseKind::PropU) return 0;
  const GateSpec *g = find_gate(inst.variant, c.gate);
  return g ? g->arity : 0;
}

void validate_instance(const QcspInstance &inst, bool allow_catalog) {
  if (inst.num_qudits < 0) throw InputError("/num_qudits", "must be non-negative");
  for (size_t i = 0; i < inst.clauses.size(); ++i) {
    const ClauseApplication &c = inst.clauses[i];
    const std::string ptr = at("/clauses", i);
    if (!is_file_kind(c.kind) && !allow_catalog)
      throw InputError(at(ptr, "kind"), "catalog-only kind '" + std::string(to_string(c.kind)) + "'");
    if (!kind_allowed(inst.variant, c.kind))
      throw InputError(at(ptr, "kind"), "variant conflict: '" + std::string(to_string(c.kind)) +
                                            "' is not legal in " + std::string(to_string(inst.variant)));
    int ga = 0;
    if (c.kind == ClauseKind::PropU) {
      const GateSpec *g = find_gate(inst.variant, c.gate);
      if (!g)
        throw InputError(at(ptr, "gate"), "gate '" + c.gate + "' is not in the " +
                                              std::string(to_string(inst.variant)) + " gate set");
      ga = g->arity;
    } else if (!c.gate.empty()) {
      throw InputError(at(ptr, "gate"), "gate given for a non-PropU clause");
    }
    const int want = arity(c.kind, ga);
    if (static_cast<int>(c.sites.size()) != want)
      throw InputError(at(ptr, "sites"), "arity mismatch: " + std::string(to_string(c.kind)) + " takes " +
                                             std::to_string(want) + " sites, got " +
                                             std::to_string(c.sites.size()));
    std::set<int> seen;
    for (size_t s = 0; s < c.sites.size(); ++s) {
      if (c.sites[s] < 0 || c.sites[s] >= inst.num_qudits)
        throw InputError(at(at(ptr, "sites"), s), "site " + std::to_string(c.sites[s]) + " out of range");
      if (!seen.insert(c.sites[s]).second)
        throw InputError(at(at(ptr, "sites"), s), "duplicate site " + std::to_string(c.sites[s]));
    }
  }
}

QcspInstance parse_instance(std::string_view text) {
  const json j = parse_json(text);
  require_object(j, "", {"variant", "num_qudits", "clauses", "promise_gap_exponent"});
  QcspInstance inst;
  inst.variant = as_variant(field(j, "", "variant"), "/variant");
  inst.num_qudits = as_int(field(j, "", "num_qudits"), "/num_qudits");
  if (j.contains("promise_gap_exponent"))
    inst.promise_gap_exponent = as_int(j["promise_gap_exponent"], "/promise_gap_exponent");
  const json &cl = field(j, "", "clauses");
  if (!cl.is_array()) throw InputError("/clauses", "expected an array");
  for (size_t i = 0; i < cl.size(); ++i) {
    const std::string ptr = at("/clauses", i);
    require_object(cl[i], ptr, {"kind", "gate", "sites"});
    ClauseApplication c;
    const std::string kname = as_string(field(cl[i], ptr, "kind"), at(ptr, "kind"));
    auto k = parse_clause_kind(kname);
    if (!k || !is_file_kind(*k)) throw InputError(at(ptr, "kind"), "unknown clause kind '" + kname + "'");
    c.kind = *k;
    if (cl[i].contains("gate")) c.gate = as_string(cl[i]["gate"], at(ptr, "gate"));
    if (c.kind == ClauseKind::PropU && c.gate.empty())
      throw InputError(at(ptr, "gate"), "PropU requires a gate");
    c.sites = as_int_list(field(cl[i], ptr, "sites"), at(ptr, "sites"));
    inst.clauses.push_back(std::move(c));
  }
  validate_instance(inst);
  return inst;
}

std::string serialize_instance(const QcspInstance &inst) {
  std::ostringstream os;
  os << "{\n  \"variant\": \"" << to_string(inst.variant) << "\",\n  \"num_qudits\": " << inst.num_qudits << ",\n";
  if (inst.promise_gap_exponent) os << "  \"promise_gap_exponent\": " << *inst.promise_gap_exponent << ",\n";
  os << "  \"clauses\": [";
  for (size_t i = 0; i < inst.clauses.size(); ++i) {
    const ClauseApplication &c = inst.clauses[i];
    os << (i ? ",\n" : "\n") << "    {\"kind\": \"" << to_string(c.kind) << "\"";
    if (!c.gate.empty()) os << ", \"gate\": " << json(c.gate).dump();
    os << ", \"sites\": " << int_list(c.sites) << "}";
  }
  os << (inst.clauses.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

std::string_view to_string(InitTag t) {
  switch (t) {
    case InitTag::Zero: return "Zero";
    case InitTag::Witness: return "Witness";
    case InitTag::Coin: return "Coin";
    case InitTag::Free: return "Free";
  }
  return "?";
}

std::optional<InitTag> parse_init_tag(std::string_view s) {
  for (InitTag t : {InitTag::Zero, InitTag::Witness, InitTag::Coin, InitTag::Free})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

void validate_circuit(const Circuit &c) {
  if (static_cast<int>(c.init.size()) != c.num_qubits)
    throw InputError("/init", "expected " + std::to_string(c.num_qubits) + " tags, got " +
                                  std::to_string(c.init.size()));
  for (size_t i = 0; i < c.init.size(); ++i) {
    if (c.init[i] == InitTag::Witness && c.variant != Variant::QCMA)
      throw InputError(at("/init", i), "Witness tags are only legal in QCMA");
    if (c.init[i] == InitTag::Coin && c.variant != Variant::CoRP)
      throw InputError(at("/init", i), "Coin tags are only legal in CoRP");
  }
  for (size_t t = 0; t < c.gates.size(); ++t) {
    const std::string ptr = at("/gates", t);
    const GateSpec *g = find_gate(c.variant, c.gates[t].gate);
    if (!g)
      throw InputError(at(ptr, "g"), "gate '" + c.gates[t].gate + "' is not in the " +
                                         std::string(to_string(c.variant)) + " gate set");
    if (static_cast<int>(c.gates[t].qubits.size()) != g->arity)
      throw InputError(at(ptr, "q"), "gate " + g->id + " takes " + std::to_string(g->arity) + " qubits");
    std::set<int> seen;
    for (size_t s = 0; s < c.gates[t].qubits.size(); ++s) {
      int q = c.gates[t].qubits[s];
      if (q < 0 || q >= c.num_qubits) throw InputError(at(at(ptr, "q"), s), "qubit out of range");
      if (!seen.insert(q).second) throw InputError(at(at(ptr, "q"), s), "duplicate qubit");
    }
  }
  if (c.outputs.empty()) throw InputError("/outputs", "at least one output qubit is required");
  std::set<int> seen;
  for (size_t s = 0; s < c.outputs.size(); ++s) {
    if (c.outputs[s] < 0 || c.outputs[s] >= c.num_qubits)
      throw InputError(at("/outputs", s), "qubit out of range");
    if (!seen.insert(c.outputs[s]).second) throw InputError(at("/outputs", s), "duplicate output");
  }
}

Circuit parse_circuit(std::string_view text) {
  const json j = parse_json(text);
  require_object(j, "", {"variant", "num_qubits", "init", "gates", "outputs"});
  Circuit c;
  c.variant = as_variant(field(j, "", "variant"), "/variant");
  c.num_qubits = as_int(field(j, "", "num_qubits"), "/num_qubits");
  const json &init = field(j, "", "init");
  if (!init.is_array()) throw InputError("/init", "expected an array");
  for (size_t i = 0; i < init.size(); ++i) {
    auto t = parse_init_tag(as_string(init[i], at("/init", i)));
    if (!t) throw InputError(at("/init", i), "unknown init tag");
    c.init.push_back(*t);
  }
  const json &gates = field(j, "", "gates");
  if (!gates.is_array()) throw InputError("/gates", "expected an array");
  for (size_t t = 0; t < gates.size(); ++t) {
    const std::string ptr = at("/gates", t);
    require_object(gates[t], ptr, {"g", "q"});
    c.gates.push_back({as_string(field(gates[t], ptr, "g"), at(ptr, "g")),
                       as_int_list(field(gates[t], ptr, "q"), at(ptr, "q"))});
  }
  if (j.contains("outputs")) c.outputs = as_int_list(j["outputs"], "/outputs");
  validate_circuit(c);
  return c;
}

std::string serialize_circuit(const Circuit &c) {
  std::ostringstream os;
  os << "{\n  \"variant\": \"" << to_string(c.variant) << "\",\n  \"num_qubits\": " << c.num_qubits
     << ",\n  \"init\": [";
  for (size_t i = 0; i < c.init.size(); ++i) os << (i ? ", " : "") << '"' << to_string(c.init[i]) << '"';
  os << "],\n  \"gates\": [";
  for (size_t t = 0; t < c.gates.size(); ++t)
    os << (t ? ",\n" : "\n") << "    {\"g\": " << json(c.gates[t].gate).dump()
       << ", \"q\": " << int_list(c.gates[t].qubits) << "}";
  os << (c.gates.empty() ? "],\n" : "\n  ],\n");
  os << "  \"outputs\": " << int_list(c.outputs) << "\n}\n";
  return os.str();
}

}  // namespace qcsp
