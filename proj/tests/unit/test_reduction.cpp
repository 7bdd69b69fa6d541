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

#include <Eigen/Eigenvalues>
#include <random>

#include "qcsp/compiler.hpp"
#include "qcsp/reduction.hpp"

using namespace qcsp;

namespace {

QuditCsp toy(std::mt19937_64 &rng, int d, int n, int clauses) {
  QuditCsp c;
  c.d = d;
  c.num_qudits = n;
  for (int i = 0; i < clauses; ++i) {
    const int arity = n >= 2 && rng() % 2 ? 2 : 1;
    const int dim = arity == 1 ? d : d * d;
    SpMat m(dim, dim);
    for (int s = 0; s < dim; ++s)
      if (rng() % 3 == 0) m.coeffRef(s, s) = 1.0;
    if (rng() % 4 == 0 && dim >= 2) {
      m.coeffRef(0, 1) += cplx(0.0, 0.5);
      m.coeffRef(1, 0) += cplx(0.0, -0.5);
      m.coeffRef(0, 0) += 1.0;
      m.coeffRef(1, 1) += 1.0;
    }
    m.makeCompressed();
    c.clause_types.push_back(m);
    const int a = static_cast<int>(rng() % n);
    std::vector<int> sites{a};
    if (arity == 2) sites.push_back((a + 1 + static_cast<int>(rng() % (n - 1))) % n);
    c.clauses.push_back({i, sites});
  }
  return c;
}

bool divides_denominator(const Rational &r, long long m) {
  const auto den = boost::multiprecision::denominator(r);
  return boost::multiprecision::cpp_int(m) % den == 0;
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("psi states are exactly orthonormal with small denominators") {
    const auto psi = build_psi_states();
    for (int i = 0; i < 4; ++i) {
      CHECK(psi[i].num_qubits == 4);
      for (int j = 0; j < 4; ++j) CHECK(inner(psi[i], psi[j]) == Rational(i == j ? 1 : 0));
      for (const auto &a : psi[i].amp) CHECK(divides_denominator(a, 2LL * 5 * 13 * 17 * 29));
    }
  }

  TEST_CASE("H42 is the projector off the psi span, exactly and numerically") {
    const RationalMatrix h = h42_exact();
    CHECK(rational_product(h, h) == h);
    Rational trace = 0;
    for (int i = 0; i < 16; ++i) trace += h[i][i];
    CHECK(trace == 12);
    for (const auto &p : build_psi_states())
      for (int r = 0; r < 16; ++r) {
        Rational s = 0;
        for (int c = 0; c < 16; ++c) s += h[r][c] * p.amp[c];
        CHECK(s == 0);
      }
    const SparseOperator op = build_h42();
    CHECK(kernel_basis(op).size() == 4);
    const Eigen::SelfAdjointEigenSolver<Dense> es(op.to_dense());
    for (int i = 0; i < 16; ++i) CHECK(es.eigenvalues()[i] == doctest::Approx(i < 4 ? 0.0 : 1.0));
    const Dense w = Dense(psi_isometry());
    CHECK((w.adjoint() * w - Dense::Identity(4, 4)).norm() < 1e-12);
    CHECK((op.to_dense() * w).norm() < 1e-12);
  }

  TEST_CASE("fractional X powers") {
    Dense x(2, 2);
    x << 0, 1, 1, 0;
    CHECK((x_power(1.0) - x).norm() < 1e-12);
    CHECK((x_power(0.0) - Dense::Identity(2, 2)).norm() < 1e-12);
    for (double a : {0.1, 0.25, 1.0 / 6.0})
      for (double b : {0.3, 0.5}) {
        CHECK((x_power(a) * x_power(b) - x_power(a + b)).norm() < 1e-12);
        CHECK((x_power(a) - x_power(a).transpose()).norm() < 1e-12);
        CHECK((x_power(a) * x_power(a).adjoint() - Dense::Identity(2, 2)).norm() < 1e-12);
      }
  }

  TEST_CASE("T2 gadget has a one-dimensional kernel") {
    for (int n = 1; n <= 4; ++n) {
      const T2Gadget g = build_t2(n);
      CHECK(g.n == n);
      CHECK(g.state.norm() == doctest::Approx(1.0));
      CHECK(g.op.apply(g.state).norm() < 1e-12);
      CHECK(kernel_basis(g.op).size() == 1);
    }
    CHECK_THROWS_AS(build_t2(0), std::invalid_argument);
  }

  TEST_CASE("block sizes") {
    const std::vector<std::pair<int, int>> expect{{2, 4}, {3, 8}, {4, 8}, {5, 16}, {16, 16}, {17, 32}};
    for (auto [d, x] : expect) {
      const ReductionMap m = reduction_map(d);
      CHECK(m.x == x);
      CHECK((1 << m.data_4qudits) >= d);
      CHECK(m.block_4qudits >= m.data_4qudits);
      CHECK(m.first_qubit(3) == 3 * x);
    }
  }

  TEST_CASE("collection consistency") {
    CHECK(collections_consistent({0, 1, 2, 3}, {0, 1, 2, 3}));
    CHECK(collections_consistent({0, 1, 2, 3}, {4, 5, 6, 7}));
    CHECK_FALSE(collections_consistent({0, 1, 2, 3}, {0, 1, 6, 7}));
    CHECK_FALSE(collections_consistent({0, 1, 2, 3}, {1, 0, 2, 3}));
    CHECK_FALSE(collections_consistent({0, 1, 2, 3}, {4, 0, 6, 7}));
  }

  TEST_CASE("backward on an inconsistent qubit instance is frustrated") {
    QubitCsp q;
    q.d = 2;
    q.x = 4;
    q.num_qubits = 8;
    SpMat z(2, 2);
    q.clause_types = {z};
    q.clauses = {{0, {0, 1, 2, 3}}, {0, {0, 1, 6, 7}}};
    const BackwardResult b = reduce_backward(q);
    CHECK_FALSE(b.consistent);
    REQUIRE(b.conflict.has_value());
    CHECK(*b.conflict == std::array<int, 4>{0, 0, 1, 0});
    CHECK(min_eigenvalue(qudit_hamiltonian(b.instance)).lambda_min == doctest::Approx(1.0));
    q.clauses = {{0, {0, 1, 2}}};
    CHECK_THROWS_AS(reduce_backward(q), InputError);
  }

  TEST_CASE("forward then backward recovers the instance up to renaming") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 60; ++i) {
      const int d = 2 + static_cast<int>(rng() % 8);
      const QuditCsp c = toy(rng, d, 1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5));
      REQUIRE_NOTHROW(validate_qudit_csp(c));
      const QubitCsp q = reduce_forward(c);
      CHECK(q.x == reduction_map(d).x);
      CHECK(q.num_qubits == c.num_qudits * q.x);
      const BackwardResult b = reduce_backward(q);
      CHECK(b.consistent);
      CHECK(same_up_to_renaming(b.instance, c));
      CHECK(same_up_to_renaming(compact_qudits(c), c));
    }
  }

  TEST_CASE("renaming comparison is not vacuous") {
    std::mt19937_64 rng(13);
    QuditCsp c = toy(rng, 3, 3, 3);
    QuditCsp other = c;
    other.clause_types[0].coeffRef(0, 0) += 1.0;
    CHECK_FALSE(same_up_to_renaming(c, other));
    QuditCsp swapped = c;
    swapped.clauses[0].sites = {swapped.clauses[0].sites.rbegin(), swapped.clauses[0].sites.rend()};
    if (swapped.clauses[0].sites.size() == 2) CHECK_FALSE(same_up_to_renaming(c, swapped));
  }

  TEST_CASE("qubit lifting preserves the verdict on small instances") {
    std::mt19937_64 rng(14);
    int ff = 0, fr = 0;
    for (int i = 0; i < 10; ++i) {
      const QuditCsp c = toy(rng, 2, 1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 3));
      const Satisfiability a = classify(min_eigenvalue(qudit_hamiltonian(c)).lambda_min);
      const Satisfiability b = classify(min_eigenvalue(qubit_hamiltonian(reduce_forward(c))).lambda_min);
      CHECK(a == b);
      ff += a == Satisfiability::FrustrationFree;
      fr += a == Satisfiability::Frustrated;
    }
    CHECK(ff > 0);
    CHECK(fr > 0);
  }

  TEST_CASE("CSP documents round-trip") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 20; ++i) {
      const QuditCsp c = toy(rng, 2 + static_cast<int>(rng() % 4), 3, 3);
      const QuditCsp back = parse_qudit_csp(serialize_qudit_csp(c));
      CHECK(same_up_to_renaming(back, c));
      CHECK(back.clauses == c.clauses);
      const QubitCsp q = reduce_forward(c);
      const QubitCsp qb = parse_qubit_csp(serialize_qubit_csp(q));
      CHECK(qb.clauses == q.clauses);
      CHECK(qb.x == q.x);
      CHECK(serialize_qubit_csp(qb) == serialize_qubit_csp(q));
    }
    CHECK_THROWS_AS(parse_qubit_csp(R"({"d":2,"x":3,"num_qubits":6,"clause_types":[],"clauses":[]})"), InputError);
    CHECK_THROWS_AS(parse_qudit_csp(R"({"d":2,"num_qudits":1,"clause_types":[{"dim":2,"entries":[[0,1,1,0]]}],"clauses":[]})"),
                    InputError);
  }

  TEST_CASE("catalog clause matrices match the engine operator") {
    QcspInstance inst;
    inst.num_qudits = 5;
    inst.clauses = {{ClauseKind::Start, "", {0, 1, 2, 3}}, {ClauseKind::End, "", {4, 2, 1, 3}}};
    HamiltonianOptions opt;
    opt.restrict_types = false;
    const SparseOperator engine = total_hamiltonian(inst, opt);
    const QuditCsp csp = to_qudit_csp(inst);
    CHECK(csp.d == 13);
    CHECK(csp.clause_types.size() == 2);
    const SparseOperator direct = qudit_hamiltonian(csp);
    REQUIRE(engine.dim() == direct.dim());
    std::mt19937_64 rng(16);
    std::normal_distribution<double> g;
    Vec v(static_cast<Eigen::Index>(engine.dim()));
    for (auto &x : v) x = cplx(g(rng), g(rng));
    CHECK((engine.apply(v) - direct.apply(v)).norm() < 1e-9 * v.norm());
  }
}
