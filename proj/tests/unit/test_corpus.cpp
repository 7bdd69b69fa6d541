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

#include <set>

#include "qcsp/compiler.hpp"
#include "qcsp/corpus.hpp"

using namespace qcsp;

TEST_SUITE("corpus") {
  TEST_CASE("generation is deterministic and broad") {
    const auto a = generate_corpus(1), b = generate_corpus(1);
    REQUIRE(a.size() == b.size());
    CHECK(a.size() >= 200);
    std::set<std::string> names, branches;
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].name == b[i].name);
      CHECK(a[i].instance == b[i].instance);
      CHECK_NOTHROW(validate_instance(a[i].instance, true));
      names.insert(a[i].name);
      branches.insert(a[i].branch);
    }
    CHECK(names.size() == a.size());
    for (const char *br : {"trivial", "compiled", "undefined", "gap", "no-start", "no-end", "cycle", "chain",
                           "type-conflict", "monogamy", "shared", "qcma", "qcma-commit", "qcma-shared-commit", "corp"})
      CHECK_MESSAGE(branches.count(br) == 1, br);
    const auto c = generate_corpus(2);
    bool differs = c.size() != a.size();
    for (size_t i = 0; !differs && i < a.size(); ++i) differs = !(a[i].instance == c[i].instance);
    CHECK(differs);
  }

  TEST_CASE("case seeds") {
    CHECK(case_seed(1, 0) == case_seed(1, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(case_seed(7, i));
    CHECK(seen.size() == 1000);
    CHECK(case_seed(1, 5) != case_seed(2, 5));
  }

  TEST_CASE("merging and identifying sites") {
    const Circuit a{Variant::BQP1, 1, {InitTag::Zero}, {{"H", {0}}}, {0}};
    const Circuit b{Variant::BQP1, 2, {InitTag::Zero, InitTag::Zero}, {}, {1}};
    const QcspInstance ia = compile(a), ib = compile(b);
    const QcspInstance m = merge_instances(ia, ib);
    CHECK(m.num_qudits == ia.num_qudits + ib.num_qudits);
    REQUIRE(m.clauses.size() == ia.clauses.size() + ib.clauses.size());
    for (size_t i = 0; i < ib.clauses.size(); ++i)
      for (size_t s = 0; s < ib.clauses[i].sites.size(); ++s)
        CHECK(m.clauses[ia.clauses.size() + i].sites[s] == ib.clauses[i].sites[s] + ia.num_qudits);
    const QcspInstance id = identify_sites(m, 0, ia.num_qudits);
    CHECK(id.num_qudits == m.num_qudits - 1);
    CHECK(id.clauses[ia.clauses.size()].sites.back() == 0);
    CHECK(id.clauses.back().sites.back() == ia.num_qudits);
    CHECK_NOTHROW(validate_instance(id, true));
    CHECK_THROWS_AS(identify_sites(m, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(identify_sites(m, 0, m.num_qudits), std::invalid_argument);
    CHECK_THROWS_AS(merge_instances(ia, compile(Circuit{Variant::QCMA, 1, {InitTag::Witness}, {}, {0}})),
                    std::invalid_argument);
  }

  TEST_CASE("one case per branch agrees with the oracle") {
    const auto all = generate_corpus(1);
    std::vector<CorpusCase> sample;
    std::set<std::string> taken;
    for (const auto &c : all)
      if (taken.insert(c.branch).second) sample.push_back(c);
    const CorpusSummary s = run_corpus(sample, {});
    CHECK(s.cases.size() == sample.size());
    CHECK(s.disagree == 0);
    CHECK(s.oracle_band == 0);
    for (const auto &o : s.cases) CHECK_MESSAGE(o.agree, o.name);
  }

  TEST_CASE("an injected decider bug is caught") {
    const Circuit h{Variant::BQP1, 1, {InitTag::Zero}, {{"H", {0}}}, {0}};
    const CorpusCase c{"h", "compiled", compile(h)};
    CorpusOptions opt;
    const CaseOutcome good = run_case(c, opt, 1);
    CHECK(good.decision == Decision::Reject);
    CHECK(good.reason == "end-check");
    CHECK(good.agree);
    opt.inject_bug = true;
    const CaseOutcome bad = run_case(c, opt, 1);
    CHECK(bad.decision == Decision::Accept);
    CHECK_FALSE(bad.agree);
  }
}
