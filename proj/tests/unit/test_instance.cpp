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

#include <doctest.h>

#include <random>

#include "qcsp/compiler.hpp"
#include "qcsp/corpus.hpp"
#include "qcsp/instance.hpp"

using namespace qcsp;

namespace {

std::string where_of(const std::string &text, bool circuit = false) {
  try {
    if (circuit)
      parse_circuit(text);
    else
      parse_instance(text);
  } catch (const InputError &e) {
    return e.where();
  }
  return "<accepted>";
}

}  // namespace

TEST_SUITE("instance") {
  TEST_CASE("instance documents round-trip") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 60; ++i) {
      const Variant v = i % 3 == 0 ? Variant::BQP1 : i % 3 == 1 ? Variant::QCMA : Variant::CoRP;
      Circuit c = random_circuit(rng, v, v == Variant::CoRP ? 3 : 1 + static_cast<int>(rng() % 3),
                                 static_cast<int>(rng() % 4));
      if (v == Variant::QCMA) c.init[0] = InitTag::Witness;
      if (v == Variant::CoRP) c.init[0] = InitTag::Coin;
      QcspInstance inst = compile(c);
      if (i % 5 == 0) inst.promise_gap_exponent = 2;
      const std::string text = serialize_instance(inst);
      const QcspInstance back = parse_instance(text);
      CHECK(back == inst);
      CHECK(serialize_instance(back) == text);
    }
  }

  TEST_CASE("circuit documents round-trip") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 40; ++i) {
      Circuit c = random_circuit(rng, Variant::BQP1, 1 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 5));
      if (rng() % 2) c.init.back() = InitTag::Free;
      CHECK(parse_circuit(serialize_circuit(c)) == c);
    }
  }

  TEST_CASE("malformed instances name the offending location") {
    CHECK(where_of("{").rfind("line ", 0) == 0);
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":2,"clauses":[{"kind":"Nope","sites":[0]}]})") ==
          "/clauses/0/kind");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":2,"clauses":[{"kind":"BellPair","sites":[0,1]}]})") ==
          "/clauses/0/kind");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":4,"clauses":[{"kind":"Start","sites":[0,1,2]}]})") ==
          "/clauses/0/sites");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":3,"clauses":[{"kind":"Start","sites":[0,1,2,3]}]})") ==
          "/clauses/0/sites/3");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":4,"clauses":[{"kind":"Start","sites":[0,1,1,3]}]})") ==
          "/clauses/0/sites/2");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":4,"clauses":[{"kind":"PropU","sites":[0,1,2,3]}]})") ==
          "/clauses/0/gate");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":6,"clauses":[{"kind":"PropU","gate":"TOF","sites":[0,1,2,3,4,5]}]})") ==
          "/clauses/0/gate");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":4,"clauses":[{"kind":"End","gate":"H","sites":[0,1,2,3]}]})") ==
          "/clauses/0/gate");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":5,"clauses":[{"kind":"StartUnk","sites":[0,1,2,3,4]}]})") ==
          "/clauses/0/kind");
    CHECK(where_of(R"({"variant":"XYZ","num_qudits":1,"clauses":[]})") == "/variant");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":1,"clauses":[],"extra":1})") != "<accepted>");
    CHECK(where_of(R"({"variant":"BQP1","num_qudits":0,"clauses":[]})") == "<accepted>");
  }

  TEST_CASE("malformed circuits name the offending location") {
    CHECK(where_of(R"({"variant":"BQP1","num_qubits":1,"init":["Zero"],"gates":[{"g":"NOPE","q":[0]}],"outputs":[0]})",
                   true) == "/gates/0/g");
    CHECK(where_of(R"({"variant":"BQP1","num_qubits":1,"init":["zero"],"gates":[],"outputs":[0]})", true) == "/init/0");
    CHECK(where_of(R"({"variant":"BQP1","num_qubits":1,"init":["Coin"],"gates":[],"outputs":[0]})", true) == "/init/0");
    CHECK(where_of(R"({"variant":"BQP1","num_qubits":2,"init":["Zero","Zero"],"gates":[{"g":"HHCNOT","q":[0,0]}],"outputs":[0]})",
                   true) == "/gates/0/q/1");
    CHECK(where_of(R"({"variant":"BQP1","num_qubits":1,"init":["Zero"],"gates":[{"g":"H","q":[0]}],"outputs":[1]})",
                   true) == "/outputs/0");
  }

  TEST_CASE("arity and positional types") {
    CHECK(arity(ClauseKind::Start) == 4);
    CHECK(arity(ClauseKind::End) == 4);
    CHECK(arity(ClauseKind::StartUnk) == 5);
    CHECK(arity(ClauseKind::PropU, 1) == 4);
    CHECK(arity(ClauseKind::PropU, 2) == 5);
    CHECK(arity(ClauseKind::PropU, 3) == 6);
    CHECK(site_types(ClauseKind::Start) ==
          std::vector<SiteType>{SiteType::Endpoint, SiteType::Clock, SiteType::Clock, SiteType::Logical});
    CHECK(site_types(ClauseKind::Commit) == std::vector<SiteType>{SiteType::Logical, SiteType::Commitment});
  }

  TEST_CASE("variant legality") {
    CHECK(kind_allowed(Variant::QCMA, ClauseKind::StartUnk));
    CHECK_FALSE(kind_allowed(Variant::BQP1, ClauseKind::StartUnk));
    CHECK(kind_allowed(Variant::CoRP, ClauseKind::StartRand));
    CHECK_FALSE(kind_allowed(Variant::QCMA, ClauseKind::StartRand));
    CHECK(local_dim(Variant::BQP1) == 13);
    CHECK(local_dim(Variant::QCMA) == 15);
  }
}
