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

#include "qcsp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <limits>
#include <map>
#include <sstream>

#include "qcsp/gates.hpp"

namespace qcsp {

Rational inner(const GadgetState &a, const GadgetState &b) {
  Rational s = 0;
  for (size_t i = 0; i < a.amp.size(); ++i) s += a.amp[i] * b.amp[i];
  return s;
}

Vec to_vec(const GadgetState &s) {
  Vec v(static_cast<Eigen::Index>(s.amp.size()));
  for (size_t i = 0; i < s.amp.size(); ++i) v[static_cast<Eigen::Index>(i)] = s.amp[i].convert_to<double>();
  return v;
}

std::array<GadgetState, 4> build_psi_states() {
  using R = Rational;
  struct Entry {
    int index;
    R value;
  };
  const std::array<std::vector<Entry>, 4> table{{
      {{0b0000, R(3, 5)}, {0b0001, R(-4, 5)}, {0b0100, R(1)}, {0b1010, R(1)}, {0b1100, R(8, 17)}, {0b1111, R(15, 17)}},
      {{0b0000, R(4, 5)}, {0b0001, R(3, 5)}, {0b0110, R(-1)}, {0b1001, R(1)}, {0b1101, R(20, 29)}, {0b1110, R(21, 29)}},
      {{0b0010, R(5, 13)}, {0b0011, R(12, 13)}, {0b0111, R(-1)}, {0b1000, R(1)}, {0b1101, R(-21, 29)}, {0b1110, R(20, 29)}},
      {{0b0010, R(-12, 13)}, {0b0011, R(5, 13)}, {0b0101, R(-1)}, {0b1011, R(1)}, {0b1100, R(-15, 17)}, {0b1111, R(8, 17)}},
  }};
  std::array<GadgetState, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i].num_qubits = 4;
    out[i].amp.assign(16, R(0));
    for (const auto &e : table[i]) out[i].amp[e.index] = e.value / 2;
  }
  return out;
}

RationalMatrix rational_product(const RationalMatrix &a, const RationalMatrix &b) {
  const size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  RationalMatrix c(n, std::vector<Rational>(m, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

RationalMatrix h42_exact() {
  const auto psi = build_psi_states();
  RationalMatrix h(16, std::vector<Rational>(16, Rational(0)));
  for (int i = 0; i < 16; ++i) h[i][i] = 1;
  for (const auto &p : psi)
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) h[i][j] -= p.amp[i] * p.amp[j];
  return h;
}

SparseOperator build_h42() {
  const RationalMatrix h = h42_exact();
  Dense d(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) d(i, j) = h[i][j].convert_to<double>();
  SparseOperator op(SiteSpace::uniform(4, 2));
  op.add({{0, 1, 2, 3}, d.sparseView(), std::nullopt});
  return op;
}

SpMat psi_isometry() {
  const auto psi = build_psi_states();
  SpMat v(16, 4);
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 16; ++r)
      if (psi[c].amp[r] != 0) v.insert(r, c) = psi[c].amp[r].convert_to<double>();
  v.makeCompressed();
  return v;
}

PlacementCheckResult verify_uniqueness_840(const EigenOptions &opt) {
  const SparseOperator h42 = build_h42();
  const LocalTerm &t = h42.terms().front();
  PlacementCheckResult res;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int d = 0; d < 7; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          SparseOperator op(SiteSpace::uniform(7, 2));
          op.add({{0, 1, 2, 3}, t.op, std::nullopt});
          op.add({{a, b, c, d}, t.op, std::nullopt});
          PlacementRecord r;
          r.placement = {a, b, c, d};
          r.lambda_min = min_eigenvalue(op, opt).lambda_min;
          r.verdict = classify(r.lambda_min);
          if (r.verdict == Satisfiability::FrustrationFree) res.frustration_free.push_back(r.placement);
          res.frustrated += r.verdict == Satisfiability::Frustrated;
          res.indeterminate += r.verdict == Satisfiability::Indeterminate;
          res.records.push_back(r);
        }
  return res;
}

Dense x_power(double a) {
  const cplx ph = std::polar(1.0, M_PI * a);
  Dense m(2, 2);
  // |+><+| + ph |-><-|
  m(0, 0) = m(1, 1) = 0.5 * (1.0 + ph);
  m(0, 1) = m(1, 0) = 0.5 * (1.0 - ph);
  return m;
}

T2Gadget build_t2(int n) {
  if (n < 1) throw std::invalid_argument("T2 needs at least one qubit");
  const double theta = 1.0 / (2.0 * (n + 1));
  const Eigen::Index dim = Eigen::Index(1) << n;
  Vec ghz = Vec::Zero(dim);
  ghz[0] = ghz[dim - 1] = M_SQRT1_2;
  Dense u = Dense::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    const Dense f = x_power(k * theta);
    Dense next(u.rows() * 2, u.cols() * 2);
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      for (Eigen::Index j = 0; j < u.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = u(i, j) * f;
    u = std::move(next);
  }
  T2Gadget g;
  g.n = n;
  g.state = u * ghz;
  Dense p = Dense::Identity(dim, dim) - g.state * g.state.adjoint();
  g.op = SparseOperator(SiteSpace::uniform(n, 2));
  std::vector<int> sites(n);
  for (int i = 0; i < n; ++i) sites[i] = i;
  g.op.add({sites, p.sparseView(1.0, 1e-15), std::nullopt});
  return g;
}

T2CheckResult verify_t2_placements(int n, int max_qubits, const EigenOptions &opt) {
  const T2Gadget g = build_t2(n);
  T2CheckResult res;
  res.n = n;
  res.num_qubits = std::min(max_qubits, 2 * n - 1);
  if (res.num_qubits < n) throw std::invalid_argument("T2 placement register smaller than the gadget");
  res.kernel_dim = static_cast<int>(kernel_basis(g.op).size());
  const SpMat &t = g.op.terms().front().op;
  std::vector<int> a(n), b(n);
  for (int i = 0; i < n; ++i) a[i] = i;
  // Every ordered n-tuple of distinct qubits except copy A itself.
  std::function<void(int, std::uint32_t)> rec = [&](int pos, std::uint32_t used) {
    if (pos == n) {
      if (b == a) return;
      SparseOperator op(SiteSpace::uniform(res.num_qubits, 2));
      op.add({a, t, std::nullopt});
      op.add({b, t, std::nullopt});
      T2PlacementRecord r{b, min_eigenvalue(op, opt).lambda_min, Satisfiability::Indeterminate};
      r.verdict = classify(r.lambda_min);
      if (r.verdict == Satisfiability::FrustrationFree) res.frustration_free.push_back(b);
      res.frustrated += r.verdict == Satisfiability::Frustrated;
      res.indeterminate += r.verdict == Satisfiability::Indeterminate;
      res.records.push_back(std::move(r));
      return;
    }
    for (int q = 0; q < res.num_qubits; ++q)
      if (!(used >> q & 1)) {
        b[pos] = q;
        rec(pos + 1, used | (1u << q));
      }
  };
  rec(0, 0);
  return res;
}

// ---------------------------------------------------------------- reduction

namespace {

int ceil_log2(int v) {
  int r = 0;
  while ((1LL << r) < v) ++r;
  return r;
}

}  // namespace

int clause_arity(const QuditCsp &c, int type) {
  const auto rows = c.clause_types.at(type).rows();
  int k = 0;
  long long p = 1;
  while (p < rows) {
    p *= c.d;
    ++k;
  }
  if (p != rows) throw InputError("/clause_types/" + std::to_string(type), "matrix size is not a power of d");
  return k;
}

void validate_qudit_csp(const QuditCsp &c) {
  if (c.d < 2) throw InputError("/d", "d must be at least 2");
  if (c.num_qudits < 0) throw InputError("/num_qudits", "must be non-negative");
  for (size_t t = 0; t < c.clause_types.size(); ++t) {
    const SpMat &m = c.clause_types[t];
    const std::string where = "/clause_types/" + std::to_string(t);
    if (m.rows() != m.cols() || m.rows() < c.d) throw InputError(where, "clause matrix must be square, d^k with k >= 1");
    clause_arity(c, static_cast<int>(t));
    if ((SpMat(m.adjoint()) - m).norm() > 1e-12) throw InputError(where, "clause matrix is not Hermitian");
  }
  for (size_t i = 0; i < c.clauses.size(); ++i) {
    const ClauseUse &u = c.clauses[i];
    const std::string where = "/clauses/" + std::to_string(i);
    if (u.type < 0 || u.type >= static_cast<int>(c.clause_types.size())) throw InputError(where, "unknown clause type");
    if (static_cast<int>(u.sites.size()) != clause_arity(c, u.type)) throw InputError(where, "arity mismatch");
    for (size_t a = 0; a < u.sites.size(); ++a) {
      if (u.sites[a] < 0 || u.sites[a] >= c.num_qudits) throw InputError(where, "site out of range");
      for (size_t b = 0; b < a; ++b)
        if (u.sites[a] == u.sites[b]) throw InputError(where, "duplicate site");
    }
  }
}

ReductionMap reduction_map(int d) {
  if (d < 2) throw InputError("/d", "d must be at least 2");
  ReductionMap m;
  m.d = d;
  m.data_4qudits = ceil_log2(d);
  m.block_4qudits = 1 << ceil_log2(m.data_4qudits);
  m.x = 4 * m.block_4qudits;
  return m;
}

QubitCsp reduce_forward(const QuditCsp &c) {
  validate_qudit_csp(c);
  const ReductionMap map = reduction_map(c.d);
  if (static_cast<long long>(map.x) * c.num_qudits > std::numeric_limits<int>::max())
    throw InputError("/num_qudits", "qubit index overflow");
  QubitCsp q;
  q.d = c.d;
  q.x = map.x;
  q.num_qubits = map.x * c.num_qudits;
  q.clause_types = c.clause_types;
  for (const ClauseUse &u : c.clauses) {
    ClauseUse v{u.type, {}};
    for (int s : u.sites)
      for (int r = 0; r < map.x; ++r) v.sites.push_back(map.first_qubit(s) + r);
    q.clauses.push_back(std::move(v));
  }
  return q;
}

bool collections_consistent(const std::vector<int> &a, const std::vector<int> &b) {
  const size_t x = a.size();
  for (size_t i = 0; i < x; ++i)
    for (size_t j = 0; j < x; ++j) {
      if (i == j) continue;
      const bool same = a[i] == b[i] && a[j] == b[j];
      const bool apart = a[i] != b[i] && a[j] != b[j];
      if (!((same || apart) && a[i] != b[j] && a[j] != b[i])) return false;
    }
  return true;
}

BackwardResult reduce_backward(const QubitCsp &q) {
  if (q.x < 1) throw InputError("/x", "block size must be positive");
  struct Collection {
    int clause, pos;
    std::vector<int> qubits;
  };
  std::vector<Collection> cols;
  for (size_t i = 0; i < q.clauses.size(); ++i) {
    const auto &s = q.clauses[i].sites;
    if (s.size() % q.x != 0) throw InputError("/clauses/" + std::to_string(i), "site count is not a multiple of x");
    for (size_t p = 0; p * q.x < s.size(); ++p)
      cols.push_back({static_cast<int>(i), static_cast<int>(p), {s.begin() + p * q.x, s.begin() + (p + 1) * q.x}});
  }
  BackwardResult r;
  for (size_t a = 0; a < cols.size() && r.consistent; ++a)
    for (size_t b = a + 1; b < cols.size(); ++b)
      if (!collections_consistent(cols[a].qubits, cols[b].qubits)) {
        r.consistent = false;
        r.conflict = std::array<int, 4>{cols[a].clause, cols[a].pos, cols[b].clause, cols[b].pos};
        break;
      }
  r.instance.d = q.d;
  r.instance.clause_types = q.clause_types;
  if (!r.consistent) {
    SpMat id(q.d, q.d);
    id.setIdentity();
    r.instance.num_qudits = 1;
    r.instance.clause_types.push_back(id);
    r.instance.clauses = {{static_cast<int>(r.instance.clause_types.size()) - 1, {0}}};
    return r;
  }
  r.instance.num_qudits = q.num_qubits;
  for (const auto &u : q.clauses) {
    ClauseUse v{u.type, {}};
    for (size_t p = 0; p < u.sites.size(); p += q.x) v.sites.push_back(u.sites[p]);
    r.instance.clauses.push_back(std::move(v));
  }
  return r;
}

QuditCsp compact_qudits(const QuditCsp &c) {
  std::vector<int> used(c.num_qudits, -1);
  for (const auto &u : c.clauses)
    for (int s : u.sites) used[s] = 0;
  QuditCsp out = c;
  out.num_qudits = 0;
  for (int &v : used)
    if (v == 0) v = out.num_qudits++;
  for (auto &u : out.clauses)
    for (int &s : u.sites) s = used[s];
  return out;
}

bool same_up_to_renaming(const QuditCsp &a, const QuditCsp &b) {
  const QuditCsp x = compact_qudits(a), y = compact_qudits(b);
  if (x.d != y.d || x.num_qudits != y.num_qudits || x.clauses != y.clauses) return false;
  if (x.clause_types.size() != y.clause_types.size()) return false;
  for (size_t t = 0; t < x.clause_types.size(); ++t) {
    const SpMat &m = x.clause_types[t], &n = y.clause_types[t];
    if (m.rows() != n.rows() || m.cols() != n.cols() || (m - n).norm() != 0.0) return false;
  }
  return true;
}

namespace {

// Sum of the clause's terms, each tensored with the identity on the clause
// sites it does not touch; site 0 most significant.
SpMat clause_matrix(const ClauseOperator &op, int arity, int d) {
  std::int64_t dim = 1;
  for (int i = 0; i < arity; ++i) dim *= d;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const LocalTerm &t : op.terms) {
    const SpMat m = t.factored ? SpMat(t.dense().sparseView(1.0, 1e-15)) : t.op;
    std::vector<int> rest;
    for (int s = 0; s < arity; ++s)
      if (std::find(t.sites.begin(), t.sites.end(), s) == t.sites.end()) rest.push_back(s);
    std::int64_t rest_dim = 1;
    for (size_t i = 0; i < rest.size(); ++i) rest_dim *= d;
    auto place = [&](std::vector<int> &digits, std::int64_t local, std::int64_t r) {
      for (int i = static_cast<int>(t.sites.size()) - 1; i >= 0; --i, local /= d) digits[t.sites[i]] = local % d;
      for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i, r /= d) digits[rest[i]] = r % d;
      std::int64_t f = 0;
      for (int v : digits) f = f * d + v;
      return f;
    };
    std::vector<int> digits(arity);
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it)
        for (std::int64_t r = 0; r < rest_dim; ++r) {
          const std::int64_t row = place(digits, it.row(), r);
          const std::int64_t col = place(digits, it.col(), r);
          trip.emplace_back(row, col, it.value());
        }
  }
  SpMat out(dim, dim);
  out.setFromTriplets(trip.begin(), trip.end());
  out.prune(cplx(0.0, 0.0), 1e-15);
  return out;
}

}  // namespace

QuditCsp to_qudit_csp(const QcspInstance &inst) {
  validate_instance(inst, true);
  QuditCsp c;
  c.d = local_dim(inst.variant);
  c.num_qudits = inst.num_qudits;
  std::map<std::pair<ClauseKind, std::string>, int> types;
  for (const auto &cl : inst.clauses) {
    auto key = std::make_pair(cl.kind, cl.gate);
    auto it = types.find(key);
    if (it == types.end()) {
      const GateSpec *g = cl.kind == ClauseKind::PropU ? find_gate(inst.variant, cl.gate) : nullptr;
      const ClauseOperator op = build_clause_operator(cl.kind, g, c.d);
      c.clause_types.push_back(clause_matrix(op, static_cast<int>(cl.sites.size()), c.d));
      it = types.emplace(key, static_cast<int>(c.clause_types.size()) - 1).first;
    }
    c.clauses.push_back({it->second, cl.sites});
  }
  return c;
}

Dense lifted_clause(const SpMat &h, int arity, const ReductionMap &map, std::uint64_t cap) {
  const int nb = map.block_4qudits, total4 = arity * nb;
  if (2 * total4 >= 62 || (std::uint64_t(1) << (2 * total4)) > cap)
    throw CapExceeded(2 * total4 >= 62 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t(1) << (2 * total4),
                      cap);
  const Eigen::Index dim = Eigen::Index(1) << (2 * total4);
  const T2Gadget t2 = build_t2(nb);
  const Dense t2m = t2.op.terms().front().dense();
  Dense m = Dense::Zero(dim, dim);
  // state bits: 4-qudit j holds (data, ent) at bit positions of its 2-bit digit.
  auto data_of = [&](Eigen::Index s, int blk) {
    int v = 0;
    for (int j = 0; j < nb; ++j) v = (v << 1) | static_cast<int>((s >> (2 * (total4 - 1 - (blk * nb + j)) + 1)) & 1);
    return v;
  };
  auto ent_of = [&](Eigen::Index s, int blk) {
    int v = 0;
    for (int j = 0; j < nb; ++j) v = (v << 1) | static_cast<int>((s >> (2 * (total4 - 1 - (blk * nb + j)))) & 1);
    return v;
  };
  Eigen::Index ent_mask = 0, data_mask = 0;
  for (int j = 0; j < total4; ++j) {
    ent_mask |= Eigen::Index(1) << (2 * j);
    data_mask |= Eigen::Index(1) << (2 * j + 1);
  }
  auto h_index = [&](Eigen::Index s) {
    long long idx = 0;
    for (int b = 0; b < arity; ++b) {
      const int v = data_of(s, b);
      if (v >= map.d) return -1LL;
      idx = idx * map.d + v;
    }
    return idx;
  };
  const Dense hd = Dense(h);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const long long hs = h_index(s);
    for (Eigen::Index t = 0; t < dim; ++t) {
      cplx v = 0;
      if ((s & ent_mask) == (t & ent_mask)) {
        const long long ht = h_index(t);
        if (hs >= 0 && ht >= 0) v += hd(hs, ht);
      }
      for (int b = 0; b < arity; ++b) {
        // T_1: diagonal on unused data values of block b.
        if (s == t && data_of(s, b) >= map.d) v += 1.0;
        // T_2 on the ent bits of block b, identity elsewhere.
        Eigen::Index other = data_mask;
        for (int j = 0; j < total4; ++j)
          if (j / nb != b) other |= Eigen::Index(1) << (2 * (total4 - 1 - j));
        if ((s & other) == (t & other)) v += t2m(ent_of(s, b), ent_of(t, b));
      }
      m(s, t) = v;
    }
  }
  return m;
}

SparseOperator qudit_hamiltonian(const QuditCsp &c) {
  validate_qudit_csp(c);
  SparseOperator op(SiteSpace::uniform(c.num_qudits, c.d));
  for (const auto &u : c.clauses) op.add({u.sites, c.clause_types[u.type], std::nullopt});
  return op;
}

SparseOperator qubit_hamiltonian(const QubitCsp &q, std::uint64_t lifted_cap) {
  const ReductionMap map = reduction_map(q.d);
  if (map.x != q.x) throw InputError("/x", "block size does not match d");
  const SpMat v = psi_isometry();
  const SpMat h42 = build_h42().terms().front().op;
  QuditCsp src{q.d, 0, q.clause_types, {}};
  SparseOperator op(SiteSpace::uniform(q.num_qubits, 2));
  for (const auto &u : q.clauses) {
    const int arity = clause_arity(src, u.type);
    if (static_cast<int>(u.sites.size()) != arity * q.x) throw InputError("/clauses", "site count mismatch");
    Factored f;
    f.factors.assign(u.sites.size() / 4, v);
    f.m = lifted_clause(q.clause_types[u.type], arity, map, lifted_cap);
    op.add({u.sites, SpMat(), f});
    for (size_t g = 0; g < u.sites.size(); g += 4)
      op.add({{u.sites[g], u.sites[g + 1], u.sites[g + 2], u.sites[g + 3]}, h42, std::nullopt});
  }
  return op;
}

// ------------------------------------------------------------------ files

namespace {

using json = nlohmann::ordered_json;

json matrix_json(const SpMat &m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it)
      entries.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
  return {{"dim", m.rows()}, {"entries", entries}};
}

json clauses_json(const std::vector<ClauseUse> &cl) {
  json a = json::array();
  for (const auto &u : cl) a.push_back({{"type", u.type}, {"sites", u.sites}});
  return a;
}

}  // namespace

std::string serialize_qudit_csp(const QuditCsp &c) {
  json j;
  j["d"] = c.d;
  j["num_qudits"] = c.num_qudits;
  j["clause_types"] = json::array();
  for (const auto &m : c.clause_types) j["clause_types"].push_back(matrix_json(m));
  j["clauses"] = clauses_json(c.clauses);
  return j.dump() + "\n";
}

std::string serialize_qubit_csp(const QubitCsp &q) {
  json j;
  j["d"] = q.d;
  j["x"] = q.x;
  j["num_qubits"] = q.num_qubits;
  j["clause_types"] = json::array();
  for (const auto &m : q.clause_types) j["clause_types"].push_back(matrix_json(m));
  j["clauses"] = clauses_json(q.clauses);
  return j.dump() + "\n";
}

namespace {

json parse_doc(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw InputError("/", std::string("syntax error: ") + e.what());
  }
}

void read_types_and_clauses(const json &j, std::vector<SpMat> &types_out, std::vector<ClauseUse> &clauses_out) {
  const auto &types = j.at("clause_types");
  for (size_t t = 0; t < types.size(); ++t) {
    const int dim = types[t].at("dim").get<int>();
    if (dim < 1) throw InputError("/clause_types/" + std::to_string(t) + "/dim", "must be positive");
    SpMat m(dim, dim);
    for (const auto &e : types[t].at("entries")) {
      const int r = e.at(0).get<int>(), col = e.at(1).get<int>();
      if (r < 0 || r >= dim || col < 0 || col >= dim)
        throw InputError("/clause_types/" + std::to_string(t) + "/entries", "index out of range");
      m.coeffRef(r, col) += cplx(e.at(2).get<double>(), e.at(3).get<double>());
    }
    m.makeCompressed();
    types_out.push_back(m);
  }
  for (const auto &u : j.at("clauses")) clauses_out.push_back({u.at("type").get<int>(), u.at("sites").get<std::vector<int>>()});
}

}  // namespace

QuditCsp parse_qudit_csp(const std::string &text) {
  const json j = parse_doc(text);
  QuditCsp c;
  try {
    c.d = j.at("d").get<int>();
    c.num_qudits = j.at("num_qudits").get<int>();
    read_types_and_clauses(j, c.clause_types, c.clauses);
  } catch (const json::exception &e) {
    throw InputError("/", std::string("malformed document: ") + e.what());
  }
  validate_qudit_csp(c);
  return c;
}

QubitCsp parse_qubit_csp(const std::string &text) {
  const json j = parse_doc(text);
  QubitCsp q;
  try {
    q.d = j.at("d").get<int>();
    q.x = j.at("x").get<int>();
    q.num_qubits = j.at("num_qubits").get<int>();
    read_types_and_clauses(j, q.clause_types, q.clauses);
  } catch (const json::exception &e) {
    throw InputError("/", std::string("malformed document: ") + e.what());
  }
  if (q.x != reduction_map(q.d).x) throw InputError("/x", "does not match d");
  if (q.num_qubits < 0 || q.num_qubits % q.x) throw InputError("/num_qubits", "must be a multiple of x");
  for (size_t i = 0; i < q.clauses.size(); ++i) {
    const ClauseUse &u = q.clauses[i];
    const std::string where = "/clauses/" + std::to_string(i);
    if (u.type < 0 || u.type >= static_cast<int>(q.clause_types.size())) throw InputError(where, "unknown clause type");
    for (int s : u.sites)
      if (s < 0 || s >= q.num_qubits) throw InputError(where, "site out of range");
  }
  return q;
}

}  // namespace qcsp
