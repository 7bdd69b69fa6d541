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

#include "../support/oracles.hpp"
#include "qcsp/compiler.hpp"
#include "qcsp/corpus.hpp"
#include "qcsp/decider.hpp"
#include "qcsp/history.hpp"

using namespace qcsp;

namespace {

struct Energy {
  double residual;
  double expectation;
};

Energy energy(const HistoryState &h) {
  const SparseOperator op = total_hamiltonian(h.instance);
  REQUIRE(op.space().dims() == h.space.dims());
  const Vec hv = op.apply(h.psi);
  return {hv.norm(), h.psi.dot(hv).real()};
}

}  // namespace

TEST_SUITE("history") {
  TEST_CASE("history states of accepting circuits are zero-energy") {
    std::mt19937_64 rng(11);
    int tested = 0;
    for (int i = 0; i < 200 && tested < 12; ++i) {
      const Circuit c = random_circuit(rng, Variant::BQP1, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 3));
      if (!oracle::prob_one(c).is_zero()) continue;
      const HistoryState h = build_history_state(c);
      CHECK(h.psi.norm() == doctest::Approx(1.0));
      CHECK(energy(h).residual < 1e-10);
      ++tested;
    }
    CHECK(tested >= 5);
  }

  TEST_CASE("rejecting circuits give positive history energy") {
    for (const char *g : {"H", "HT"}) {
      const Circuit c{Variant::BQP1, 1, {InitTag::Zero}, {{g, {0}}}, {0}};
      REQUIRE_FALSE(oracle::prob_one(c).is_zero());
      CHECK(energy(build_history_state(c)).expectation > 1e-3);
    }
    const Circuit two{Variant::BQP1, 2, {InitTag::Zero, InitTag::Zero}, {{"HHCNOT", {0, 1}}}, {1}};
    CHECK(energy(build_history_state(two)).expectation > 1e-3);
  }

  TEST_CASE("truncation at the first undefined use keeps zero energy") {
    const Circuit c{Variant::BQP1, 2, {InitTag::Zero, InitTag::Free}, {{"H", {0}}, {"HHCNOT", {1, 0}}, {"H", {0}}}, {0}};
    const auto t = propagate_undefined(c);
    REQUIRE(t.has_value());
    CHECK(*t == 2);
    const HistoryState h = build_history_state(c, *t);
    CHECK(h.psi.norm() == doctest::Approx(1.0));
    CHECK(energy(h).residual < 1e-10);
    CHECK_THROWS_AS(build_history_state(c, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_history_state(c, 5), std::invalid_argument);
  }

  TEST_CASE("witness bits select the initial logical state") {
    const Circuit c{Variant::QCMA, 1, {InitTag::Witness}, {{"H", {0}}, {"H", {0}}}, {0}};
    CHECK(energy(build_history_state(c, std::nullopt, {0})).residual < 1e-10);
    CHECK(energy(build_history_state(c, std::nullopt, {1})).expectation > 1e-3);
    CHECK_THROWS_AS(build_history_state(c), std::invalid_argument);
  }

  TEST_CASE("coin qubits start in the plus state") {
    const Circuit idle{Variant::CoRP, 3, {InitTag::Coin, InitTag::Zero, InitTag::Zero}, {{"TOF", {0, 1, 2}}}, {2}};
    CHECK(energy(build_history_state(idle)).residual < 1e-10);
    const Circuit copy{Variant::CoRP, 3, {InitTag::Coin, InitTag::Zero, InitTag::Zero}, {{"CNOT3", {0, 1, 2}}}, {1}};
    CHECK(energy(build_history_state(copy)).expectation > 1e-3);
  }

  TEST_CASE("cap is enforced") {
    const Circuit c{Variant::BQP1, 1, {InitTag::Zero}, {{"H", {0}}}, {0}};
    CHECK_THROWS_AS(build_history_state(c, std::nullopt, {}, 100), CapExceeded);
  }
}
