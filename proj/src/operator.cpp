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

#include "qcsp/operator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

namespace qcsp {

// ---------------------------------------------------------------- SiteSpace

SiteSpace SiteSpace::uniform(int num_sites, int local_dim) {
  SiteSpace s;
  std::vector<int> all(local_dim);
  std::iota(all.begin(), all.end(), 0);
  s.basis.assign(num_sites, all);
  return s;
}

std::vector<int> SiteSpace::dims() const {
  std::vector<int> d;
  for (const auto &b : basis) d.push_back(static_cast<int>(b.size()));
  return d;
}

std::uint64_t SiteSpace::total_dim() const {
  std::uint64_t t = 1;
  for (const auto &b : basis) {
    if (b.empty()) return 0;
    if (t > std::numeric_limits<std::uint64_t>::max() / b.size()) return std::numeric_limits<std::uint64_t>::max();
    t *= b.size();
  }
  return t;
}

std::vector<std::uint64_t> SiteSpace::strides() const {
  std::vector<std::uint64_t> s(basis.size(), 1);
  for (int i = num_sites() - 2; i >= 0; --i) s[i] = s[i + 1] * basis[i + 1].size();
  return s;
}

int SiteSpace::local_index(int site, int flat) const {
  const auto &b = basis[site];
  auto it = std::find(b.begin(), b.end(), flat);
  return it == b.end() ? -1 : static_cast<int>(it - b.begin());
}

// ---------------------------------------------------------------- LocalTerm

namespace {

// Mode product: replaces the size-in mode `j` of tensor `v` (dims `dims`,
// first mode most significant) by a^T-like action `a` (out x in).
Vec mode_product(const Vec &v, std::vector<std::int64_t> &dims, size_t j, const SpMat &a, bool adjoint) {
  std::int64_t before = 1, after = 1;
  for (size_t i = 0; i < j; ++i) before *= dims[i];
  for (size_t i = j + 1; i < dims.size(); ++i) after *= dims[i];
  const std::int64_t in = dims[j], out = adjoint ? a.cols() : a.rows();
  Vec r = Vec::Zero(before * out * after);
  for (Eigen::Index row = 0; row < a.outerSize(); ++row)
    for (SpMat::InnerIterator it(a, row); it; ++it) {
      const std::int64_t src = adjoint ? it.row() : it.col();
      const std::int64_t dst = adjoint ? it.col() : it.row();
      const cplx c = adjoint ? std::conj(it.value()) : it.value();
      for (std::int64_t p = 0; p < before; ++p) {
        const std::int64_t si = (p * in + src) * after, di = (p * out + dst) * after;
        for (std::int64_t q = 0; q < after; ++q) r[di + q] += c * v[si + q];
      }
    }
  dims[j] = out;
  return r;
}

}  // namespace

std::int64_t Factored::rows() const {
  std::int64_t r = 1;
  for (const auto &f : factors) r *= f.rows();
  return r;
}

std::int64_t Factored::rank() const {
  std::int64_t r = 1;
  for (const auto &f : factors) r *= f.cols();
  return r;
}

Vec Factored::project(const Vec &v) const {
  std::vector<std::int64_t> dims;
  for (const auto &f : factors) dims.push_back(f.rows());
  Vec r = v;
  for (size_t j = 0; j < factors.size(); ++j) r = mode_product(r, dims, j, factors[j], true);
  return r;
}

Vec Factored::lift(const Vec &z) const {
  std::vector<std::int64_t> dims;
  for (const auto &f : factors) dims.push_back(f.cols());
  Vec r = z;
  for (size_t j = 0; j < factors.size(); ++j) r = mode_product(r, dims, j, factors[j], false);
  return r;
}

SpMat Factored::w() const {
  SpMat r(1, 1);
  r.insert(0, 0) = 1.0;
  for (const auto &f : factors) r = SpMat(Eigen::kroneckerProduct(r, f));
  return r;
}

std::int64_t LocalTerm::local_dim() const { return factored ? factored->rows() : op.rows(); }

Dense LocalTerm::dense() const {
  if (factored) {
    Dense w = Dense(factored->w());
    return w * factored->m * w.adjoint();
  }
  return Dense(op);
}

// ---------------------------------------------------------- SparseOperator

SparseOperator::Plan SparseOperator::plan_for(const LocalTerm &t) const {
  const auto strides = space_.strides();
  Plan p;
  p.offsets.assign(1, 0);
  for (int s : t.sites) {
    std::vector<std::uint64_t> next;
    next.reserve(p.offsets.size() * space_.dim(s));
    for (auto o : p.offsets)
      for (int d = 0; d < space_.dim(s); ++d) next.push_back(o + d * strides[s]);
    p.offsets = std::move(next);
  }
  std::vector<bool> in_term(space_.num_sites(), false);
  for (int s : t.sites) in_term[s] = true;
  p.rest.assign(1, 0);
  for (int s = 0; s < space_.num_sites(); ++s) {
    if (in_term[s]) continue;
    std::vector<std::uint64_t> next;
    next.reserve(p.rest.size() * space_.dim(s));
    for (auto o : p.rest)
      for (int d = 0; d < space_.dim(s); ++d) next.push_back(o + d * strides[s]);
    p.rest = std::move(next);
  }
  return p;
}

void SparseOperator::add(LocalTerm t) {
  std::int64_t want = 1;
  std::vector<bool> seen(space_.num_sites(), false);
  for (int s : t.sites) {
    if (s < 0 || s >= space_.num_sites() || seen[s]) throw std::invalid_argument("term site out of range or repeated");
    seen[s] = true;
    want *= space_.dim(s);
  }
  if (t.local_dim() != want)
    throw std::invalid_argument("term dimension " + std::to_string(t.local_dim()) + " does not match sites (" +
                                std::to_string(want) + ")");
  if (!t.factored) t.op.makeCompressed();
  plans_.push_back(plan_for(t));
  terms_.push_back(std::move(t));
}

void SparseOperator::append(const SparseOperator &other) {
  for (const auto &t : other.terms_) add(t);
}

void SparseOperator::apply(const Vec &x, Vec &y) const {
  y.setZero(static_cast<Eigen::Index>(dim()));
  for (size_t k = 0; k < terms_.size(); ++k) {
    const LocalTerm &t = terms_[k];
    const Plan &p = plans_[k];
    if (!t.factored) {
      const SpMat &m = t.op;
      for (std::uint64_t base : p.rest) {
        for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
          cplx acc = 0;
          for (SpMat::InnerIterator it(m, r); it; ++it) acc += it.value() * x[base + p.offsets[it.col()]];
          if (acc != cplx(0)) y[base + p.offsets[r]] += acc;
        }
      }
    } else {
      const Factored &f = *t.factored;
      Vec z, loc(f.rows());
      for (std::uint64_t base : p.rest) {
        for (Eigen::Index i = 0; i < loc.size(); ++i) loc[i] = x[base + p.offsets[i]];
        z = f.project(loc);
        if (z.squaredNorm() == 0.0) continue;
        loc = f.lift(f.m * z);
        for (Eigen::Index i = 0; i < loc.size(); ++i) y[base + p.offsets[i]] += loc[i];
      }
    }
  }
}

Vec SparseOperator::apply(const Vec &x) const {
  Vec y;
  apply(x, y);
  return y;
}

namespace {

// term (x) I_rest via Kronecker product, then permuted into natural site order.
SpMat embed_by_kron(const SiteSpace &space, const LocalTerm &t) {
  const int n = space.num_sites();
  std::vector<int> order = t.sites;
  std::vector<bool> in_term(n, false);
  for (int s : t.sites) in_term[s] = true;
  std::int64_t rest_dim = 1;
  for (int s = 0; s < n; ++s)
    if (!in_term[s]) {
      order.push_back(s);
      rest_dim *= space.dim(s);
    }
  SpMat local = t.factored ? SpMat(t.dense().sparseView()) : t.op;
  SpMat id(rest_dim, rest_dim);
  id.setIdentity();
  SpMat k = Eigen::kroneckerProduct(local, id);
  const auto dim = static_cast<Eigen::Index>(space.total_dim());
  const auto strides = space.strides();
  // perm[i] = natural index of the i-th state in `order` enumeration.
  Eigen::VectorXi perm(dim);
  std::vector<int> digit(n, 0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    std::uint64_t flat = 0;
    for (int j = 0; j < n; ++j) flat += digit[order[j]] * strides[order[j]];
    perm[i] = static_cast<int>(flat);
    for (int j = n - 1; j >= 0; --j) {
      if (++digit[order[j]] < space.dim(order[j])) break;
      digit[order[j]] = 0;
    }
  }
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p(perm);
  SpMat out = p * k * p.transpose();
  return out;
}

SpMat full_sparse(const SiteSpace &space, const std::vector<LocalTerm> &terms, std::uint64_t cap) {
  const std::uint64_t dim = space.total_dim();
  if (dim > cap) throw CapExceeded(dim, cap);
  SpMat h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto &t : terms) h += embed_by_kron(space, t);
  return h;
}

}  // namespace

Dense SparseOperator::to_dense(std::uint64_t cap) const { return Dense(full_sparse(space_, terms_, cap)); }

// ----------------------------------------------------------- clause builder

namespace {

using Basis = std::vector<int>;
using FlatFn = std::function<cplx(int, int)>;

SpMat site_mat(const Basis &b, const FlatFn &f) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (size_t r = 0; r < b.size(); ++r)
    for (size_t c = 0; c < b.size(); ++c) {
      cplx v = f(b[r], b[c]);
      if (v != cplx(0)) trip.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
    }
  SpMat m(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size()));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat kron(const SpMat &a, const SpMat &b) { return Eigen::kroneckerProduct(a, b).eval(); }

SpMat kron_all(const std::vector<SpMat> &ms) {
  SpMat out = ms.front();
  for (size_t i = 1; i < ms.size(); ++i) out = kron(out, ms[i]);
  return out;
}

SpMat ident(const Basis &b) { return site_mat(b, [](int r, int c) { return cplx(r == c ? 1 : 0); }); }

SpMat diag_on(const Basis &b, std::initializer_list<int> states) {
  return site_mat(b, [states](int r, int c) {
    if (r != c) return cplx(0);
    for (int s : states)
      if (s == r) return cplx(1);
    return cplx(0);
  });
}

SpMat id_minus(const Basis &b, std::initializer_list<int> states) { return ident(b) - diag_on(b, states); }

const std::vector<int> &states_of(SiteType t) { return type_basis(t); }

SpMat type_penalty(const Basis &b, SiteType t) {
  const auto &keep = states_of(t);
  return site_mat(b, [&keep](int r, int c) {
    if (r != c) return cplx(0);
    return cplx(std::find(keep.begin(), keep.end(), r) == keep.end() ? 1 : 0);
  });
}

// |to_CL><from_CL| (x) I_{CA,CB}; zero off the clock block.
SpMat clock_op(const Basis &b, int to, int from) {
  return site_mat(b, [to, from](int r, int c) {
    if (!basis::is_clock(r) || !basis::is_clock(c)) return cplx(0);
    if (basis::clock_cl(r) != to || basis::clock_cl(c) != from) return cplx(0);
    return cplx(((r - basis::kClock0) & 3) == ((c - basis::kClock0) & 3) ? 1 : 0);
  });
}

SpMat cl_proj(const Basis &b, int v) { return clock_op(b, v, v); }

enum class Comp { EC, CA, CB };

// Component bit and the key of the untouched components; -1 when the state
// does not carry the component.
int comp_bit(Comp c, int flat) {
  if (c == Comp::EC) return (flat == basis::kEC0 || flat == basis::kEC1) ? flat - basis::kEC0 : -1;
  if (!basis::is_clock(flat)) return -1;
  return c == Comp::CA ? basis::clock_ca(flat) : basis::clock_cb(flat);
}

int comp_rest(Comp c, int flat) {
  if (c == Comp::EC) return 0;
  return c == Comp::CA ? 2 * basis::clock_cl(flat) + basis::clock_cb(flat)
                       : 2 * basis::clock_cl(flat) + basis::clock_ca(flat);
}

// I - |Phi><Phi| (x) I_rest on (site a component ca, site b component cb),
// Phi = (|00> + |11>)/sqrt2.
SpMat bell_penalty(const Basis &a, Comp ca, const Basis &b, Comp cb) {
  const int da = static_cast<int>(a.size()), db = static_cast<int>(b.size());
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int ra = 0; ra < da; ++ra)
    for (int rb = 0; rb < db; ++rb) {
      const int row = ra * db + rb;
      const int xa = comp_bit(ca, a[ra]), xb = comp_bit(cb, b[rb]);
      cplx diag = 1;
      if (xa >= 0 && xb >= 0 && xa == xb) {
        for (int sa = 0; sa < da; ++sa)
          for (int sb = 0; sb < db; ++sb) {
            const int ya = comp_bit(ca, a[sa]), yb = comp_bit(cb, b[sb]);
            if (ya < 0 || yb < 0 || ya != yb) continue;
            if (comp_rest(ca, a[sa]) != comp_rest(ca, a[ra]) || comp_rest(cb, b[sb]) != comp_rest(cb, b[rb])) continue;
            const int col = sa * db + sb;
            if (col == row)
              diag -= 0.5;
            else
              trip.emplace_back(row, col, cplx(-0.5));
          }
      }
      trip.emplace_back(row, row, diag);
    }
  SpMat m(da * db, da * db);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

// U embedded on the {0_L,1_L} block of each logical site, zero elsewhere.
SpMat gate_on_logicals(const std::vector<Basis> &bases, const ExactMatrix &u) {
  const int n = static_cast<int>(bases.size());
  std::vector<std::int64_t> ldim(n), stride(n, 1);
  for (int i = 0; i < n; ++i) ldim[i] = static_cast<std::int64_t>(bases[i].size());
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * ldim[i + 1];
  std::int64_t total = stride[0] * ldim[0];
  auto index_of = [&](int x) -> std::int64_t {
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i) {
      const int bit = (x >> (n - 1 - i)) & 1;
      auto it = std::find(bases[i].begin(), bases[i].end(), bit ? basis::kL1 : basis::kL0);
      if (it == bases[i].end()) return -1;
      idx += (it - bases[i].begin()) * stride[i];
    }
    return idx;
  };
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int r = 0; r < (1 << n); ++r)
    for (int c = 0; c < (1 << n); ++c) {
      cplx v = u(r, c).to_complex();
      if (v == cplx(0)) continue;
      auto ir = index_of(r), ic = index_of(c);
      if (ir >= 0 && ic >= 0) trip.emplace_back(ir, ic, v);
    }
  SpMat m(total, total);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

struct Builder {
  ClauseOperator out;
  const std::vector<Basis> &b;

  void add(std::vector<int> sites, SpMat m) {
    m.prune(cplx(0));
    if (m.nonZeros() == 0) return;
    out.terms.push_back({std::move(sites), std::move(m), std::nullopt});
  }
  void types(const std::vector<SiteType> &t) {
    for (size_t i = 0; i < t.size(); ++i) add({static_cast<int>(i)}, type_penalty(b[i], t[i]));
  }
};

SpMat plus_penalty(const Basis &b) {
  return ident(b) - site_mat(b, [](int r, int c) {
           bool in = (r == basis::kL0 || r == basis::kL1) && (c == basis::kL0 || c == basis::kL1);
           return cplx(in ? 0.5 : 0.0);
         });
}

SpMat commit_penalty(const Basis &q, const Basis &p) {
  SpMat keep = kron(diag_on(q, {basis::kL0}), diag_on(p, {basis::kP0})) +
               kron(diag_on(q, {basis::kL1}), diag_on(p, {basis::kP1}));
  return kron(ident(q), ident(p)) - keep;
}

}  // namespace

ClauseOperator build_clause_operator(ClauseKind kind, const GateSpec *gate, const std::vector<Basis> &b) {
  if ((kind == ClauseKind::PropU) != (gate != nullptr))
    throw std::invalid_argument("a gate is required iff the kind is PropU");
  const auto types = site_types(kind, gate ? gate->arity : 0);
  if (b.size() != types.size())
    throw std::invalid_argument(std::string(to_string(kind)) + " expects " + std::to_string(types.size()) +
                                " sites, got " + std::to_string(b.size()));
  Builder B{{kind, {}, true}, b};
  switch (kind) {
    case ClauseKind::TypeL:
    case ClauseKind::TypeE:
    case ClauseKind::TypeC:
    case ClauseKind::TypeP: B.types(types); break;
    case ClauseKind::PD:
      B.add({0}, diag_on(b[0], {basis::kL0, basis::kL1}));
      B.types(types);
      break;
    case ClauseKind::BellPair:
      B.add({0, 1}, bell_penalty(b[0], Comp::CB, b[1], Comp::CA));
      B.types(types);
      break;
    case ClauseKind::Commit:
      B.add({0, 1}, commit_penalty(b[0], b[1]));
      B.types(types);
      break;
    case ClauseKind::Start:
    case ClauseKind::StartRand:
    case ClauseKind::StartUnk: {
      // (endpoint e, first clock c0, second clock c1, logical q [, commitment p])
      B.add({0, 1}, bell_penalty(b[0], Comp::EC, b[1], Comp::CA));
      B.add({1, 2}, bell_penalty(b[1], Comp::CB, b[2], Comp::CA));
      B.add({1}, cl_proj(b[1], 0));
      SpMat at_t0 = ident(b[2]) - cl_proj(b[2], 1);
      if (kind == ClauseKind::Start) {
        B.add({2, 3}, kron(at_t0, id_minus(b[3], {basis::kL0})));
      } else if (kind == ClauseKind::StartRand) {
        B.add({2, 3}, kron(at_t0, plus_penalty(b[3])));
      } else {
        B.add({2, 3}, kron(at_t0, id_minus(b[3], {basis::kL0, basis::kL1})));
        B.add({2, 3, 4}, kron(at_t0, commit_penalty(b[3], b[4])));
      }
      B.types(types);
      break;
    }
    case ClauseKind::End: {
      // (endpoint e, last clock cL, previous clock cL-1, logical q)
      B.add({0, 1}, bell_penalty(b[0], Comp::EC, b[1], Comp::CB));
      B.add({2, 1}, bell_penalty(b[2], Comp::CB, b[1], Comp::CA));
      B.add({1}, cl_proj(b[1], 1));
      B.add({2, 3}, kron(ident(b[2]) - cl_proj(b[2], 0), id_minus(b[3], {basis::kL0, basis::kLU})));
      B.types(types);
      break;
    }
    case ClauseKind::PropU: {
      const int n = gate->arity;
      std::vector<Basis> lb(b.begin(), b.begin() + n);
      const Basis &ta = b[n], &tb = b[n + 1], &tc = b[n + 2];
      std::vector<SpMat> pd, id;
      for (int i = 0; i < n; ++i) {
        pd.push_back(diag_on(b[i], {basis::kL0, basis::kL1}));
        id.push_back(ident(b[i]));
      }
      SpMat tu = gate_on_logicals(lb, gate->matrix);
      SpMat c100 = kron_all({cl_proj(ta, 1), cl_proj(tb, 0), cl_proj(tc, 0)});
      SpMat c110 = kron_all({cl_proj(ta, 1), cl_proj(tb, 1), cl_proj(tc, 0)});
      SpMat c110_100 = kron_all({cl_proj(ta, 1), clock_op(tb, 1, 0), cl_proj(tc, 0)});
      SpMat fwd = kron(tu, c110_100);
      SpMat prop = kron(kron_all(pd), c100) + kron(kron_all(id), c110) - fwd - SpMat(fwd.adjoint());
      std::vector<int> all(n + 3);
      std::iota(all.begin(), all.end(), 0);
      B.add(all, prop);
      // Bell links and clock-order penalties on (t-1, t) and (t, t+1).
      B.add({n, n + 1}, bell_penalty(ta, Comp::CB, tb, Comp::CA) + kron(cl_proj(ta, 0), cl_proj(tb, 1)));
      B.add({n + 1, n + 2}, bell_penalty(tb, Comp::CB, tc, Comp::CA) + kron(cl_proj(tb, 0), cl_proj(tc, 1)));
      B.types(types);
      break;
    }
  }
  return B.out;
}

ClauseOperator build_clause_operator(ClauseKind kind, const GateSpec *gate, int local_dim) {
  const int n = arity(kind, gate ? gate->arity : 0);
  Basis all(local_dim);
  std::iota(all.begin(), all.end(), 0);
  return build_clause_operator(kind, gate, std::vector<Basis>(n, all));
}

SparseOperator embed(const LocalTerm &term, const std::vector<int> &sites, const SiteSpace &space) {
  SparseOperator op(space);
  LocalTerm t = term;
  t.sites = sites;
  op.add(std::move(t));
  return op;
}

// ------------------------------------------------------- total Hamiltonian

std::vector<std::vector<SiteType>> demanded_types(const QcspInstance &inst) {
  std::vector<std::vector<SiteType>> out(inst.num_qudits);
  for (const auto &c : inst.clauses) {
    const auto t = site_types(c.kind, clause_gate_arity(inst, c));
    for (size_t i = 0; i < t.size() && i < c.sites.size(); ++i) {
      auto &v = out[c.sites[i]];
      if (std::find(v.begin(), v.end(), t[i]) == v.end()) v.push_back(t[i]);
    }
  }
  return out;
}

Restriction type_restrict(const QcspInstance &inst, bool strict) {
  Restriction r;
  const auto demands = demanded_types(inst);
  r.conflict.assign(inst.num_qudits, false);
  Basis all(inst.local_dim());
  std::iota(all.begin(), all.end(), 0);
  for (int s = 0; s < inst.num_qudits; ++s) {
    const auto &d = demands[s];
    if (d.empty()) {
      r.space.basis.push_back({0});
    } else if (d.size() == 1) {
      r.space.basis.push_back(type_basis(d[0]));
    } else {
      if (strict) throw InputError("site " + std::to_string(s), "type conflict");
      r.conflict[s] = true;
      r.space.basis.push_back(all);
    }
  }
  return r;
}

TermList hamiltonian_terms(const QcspInstance &inst, const HamiltonianOptions &opt) {
  validate_instance(inst, opt.allow_catalog);
  TermList out;
  out.space = opt.restrict_types ? type_restrict(inst).space : SiteSpace::uniform(inst.num_qudits, inst.local_dim());
  // Terms with identical site tuples are summed to cut matvec passes.
  std::map<std::vector<int>, SpMat> merged;
  for (const auto &c : inst.clauses) {
    const GateSpec *g = c.kind == ClauseKind::PropU ? find_gate(inst.variant, c.gate) : nullptr;
    std::vector<Basis> bases;
    for (int s : c.sites) bases.push_back(out.space.basis[s]);
    for (auto &t : build_clause_operator(c.kind, g, bases).terms) {
      std::vector<int> sites;
      for (int p : t.sites) sites.push_back(c.sites[p]);
      auto it = merged.find(sites);
      if (it == merged.end())
        merged.emplace(std::move(sites), std::move(t.op));
      else
        it->second += t.op;
    }
  }
  for (auto &[sites, m] : merged) out.terms.push_back({sites, std::move(m), std::nullopt});
  return out;
}

SparseOperator total_hamiltonian(const QcspInstance &inst, const HamiltonianOptions &opt) {
  TermList tl = hamiltonian_terms(inst, opt);
  const std::uint64_t dim = tl.space.total_dim();
  if (dim > opt.cap) throw CapExceeded(dim, opt.cap);
  SparseOperator h(std::move(tl.space));
  for (auto &t : tl.terms) h.add(std::move(t));
  return h;
}

// ------------------------------------------------------------ eigensolvers

namespace {

SpectralResult dense_min(const SparseOperator &op, std::uint64_t cap) {
  SpectralResult r;
  r.method = "dense";
  const auto n = static_cast<Eigen::Index>(op.dim());
  if (n == 0) return r;
  Dense h = op.to_dense(cap);
  Eigen::SelfAdjointEigenSolver<Dense> es(h);
  r.lambda_min = es.eigenvalues()[0];
  r.witness = es.eigenvectors().col(0);
  r.residual_norm = (op.apply(r.witness) - r.lambda_min * r.witness).norm();
  return r;
}

Vec random_unit(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(u(rng), u(rng));
  return v / v.norm();
}

SpectralResult lanczos_min(const SparseOperator &op, const EigenOptions &opt) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  const std::size_t per_vec = sizeof(cplx) * static_cast<std::size_t>(n);
  const Eigen::Index basis_cap = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(opt.memory_budget_bytes / std::max<std::size_t>(per_vec, 1)) - 4, 8,
      std::min<Eigen::Index>(n, 400));
  SpectralResult r;
  r.method = "lanczos";
  Vec v0 = random_unit(n, opt.seed);
  Dense vb(n, basis_cap);
  Vec w(n);
  int total = 0;
  double best_res = std::numeric_limits<double>::infinity();
  while (total < opt.max_iterations) {
    std::vector<double> alpha, beta;
    vb.col(0) = v0;
    Eigen::Index m = 0;
    double theta = 0;
    Eigen::VectorXd y;
    for (Eigen::Index j = 0; j < basis_cap; ++j) {
      op.apply(vb.col(j), w);
      ++total;
      const double a = vb.col(j).dot(w).real();
      alpha.push_back(a);
      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        Vec coef = vb.leftCols(j + 1).adjoint() * w;
        w.noalias() -= vb.leftCols(j + 1) * coef;
      }
      const double b = w.norm();
      m = j + 1;
      Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd e(std::max<Eigen::Index>(m - 1, 0));
      for (Eigen::Index i = 0; i + 1 < m; ++i) e[i] = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()[0];
      y = tri.eigenvectors().col(0);
      const double est = b * std::abs(y[m - 1]);
      if (est < opt.tol * 0.1 || b < 1e-14 || j + 1 == basis_cap || total >= opt.max_iterations) break;
      beta.push_back(b);
      vb.col(j + 1) = w / b;
    }
    Vec ritz = vb.leftCols(m) * y.cast<cplx>();
    ritz /= ritz.norm();
    op.apply(ritz, w);
    theta = ritz.dot(w).real();
    const double res = (w - theta * ritz).norm();
    best_res = std::min(best_res, res);
    r.lambda_min = theta;
    r.witness = ritz;
    r.residual_norm = res;
    r.iterations = total;
    if (res <= opt.tol) return r;
    v0 = ritz;
  }
  throw std::runtime_error("lanczos did not converge: residual " + std::to_string(best_res) + " after " +
                           std::to_string(total) + " matvecs");
}

}  // namespace

SpectralResult min_eigenvalue(const SparseOperator &op, const EigenOptions &opt) {
  if (op.dim() == 0) return {};
  if (op.terms().empty()) {
    SpectralResult r;
    r.method = "zero";
    r.witness = random_unit(static_cast<Eigen::Index>(op.dim()), opt.seed);
    return r;
  }
  if (op.dim() <= opt.dense_cap) return dense_min(op, opt.dense_cap);
  return lanczos_min(op, opt);
}

// ------------------------------------------------------- component split

namespace {

struct SiteCut {
  std::vector<int> a, b;  // per local index
  int da = 1, db = 1;
};

std::optional<SiteCut> cut_for(const std::vector<int> &basis) {
  SiteCut c;
  if (basis.size() == 1) {
    c.a = {0};
    c.b = {0};
    return c;
  }
  auto same = [&](SiteType t) { return basis == type_basis(t); };
  for (int f : basis) {
    if (same(SiteType::Logical)) {
      c.a.push_back(f - basis::kL0);
      c.b.push_back(0);
    } else if (same(SiteType::Clock)) {
      c.a.push_back(basis::clock_cl(f));
      c.b.push_back(2 * basis::clock_ca(f) + basis::clock_cb(f));
    } else if (same(SiteType::Endpoint)) {
      c.a.push_back(0);
      c.b.push_back(f - basis::kEC0);
    } else if (same(SiteType::Commitment)) {
      c.a.push_back(f - basis::kP0);
      c.b.push_back(0);
    } else {
      return std::nullopt;
    }
  }
  c.da = *std::max_element(c.a.begin(), c.a.end()) + 1;
  c.db = *std::max_element(c.b.begin(), c.b.end()) + 1;
  return c;
}

SpMat from_map(const std::map<std::pair<std::int64_t, std::int64_t>, cplx> &m, std::int64_t dim) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const auto &[rc, v] : m)
    if (std::abs(v) > 1e-15) trip.emplace_back(rc.first, rc.second, v);
  SpMat out(dim, dim);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

std::optional<ComponentSplit> split_components(const SparseOperator &h) {
  return split_components(h.space(), h.terms());
}

std::optional<ComponentSplit> split_components(const SiteSpace &sp, const std::vector<LocalTerm> &terms,
                                               std::uint64_t cap) {
  std::vector<SiteCut> cuts;
  SiteSpace sa, sb;
  for (int s = 0; s < sp.num_sites(); ++s) {
    auto c = cut_for(sp.basis[s]);
    if (!c) return std::nullopt;
    std::vector<int> ia(c->da), ib(c->db);
    std::iota(ia.begin(), ia.end(), 0);
    std::iota(ib.begin(), ib.end(), 0);
    sa.basis.push_back(ia);
    sb.basis.push_back(ib);
    cuts.push_back(std::move(*c));
  }
  if (sa.total_dim() > cap) throw CapExceeded(sa.total_dim(), cap);
  if (sb.total_dim() > cap) throw CapExceeded(sb.total_dim(), cap);
  ComponentSplit out{SparseOperator(sa), SparseOperator(sb)};
  for (const LocalTerm &t : terms) {
    if (t.factored) return std::nullopt;
    const int n = static_cast<int>(t.sites.size());
    std::int64_t da = 1, db = 1;
    for (int s : t.sites) {
      da *= cuts[s].da;
      db *= cuts[s].db;
    }
    // local index -> (A index, B index)
    const std::int64_t dl = t.op.rows();
    std::vector<std::int64_t> ra(dl), rb(dl);
    for (std::int64_t i = 0; i < dl; ++i) {
      std::int64_t rest = i, xa = 0, xb = 0, ma = 1, mb = 1;
      for (int j = n - 1; j >= 0; --j) {
        const SiteCut &c = cuts[t.sites[j]];
        const int digit = static_cast<int>(rest % sp.dim(t.sites[j]));
        rest /= sp.dim(t.sites[j]);
        xa += c.a[digit] * ma;
        xb += c.b[digit] * mb;
        ma *= c.da;
        mb *= c.db;
      }
      ra[i] = xa;
      rb[i] = xb;
    }
    if (da * db != dl) return std::nullopt;
    std::map<std::pair<std::int64_t, std::int64_t>, cplx> x, y, entries;
    cplx tr = 0;
    for (Eigen::Index r = 0; r < t.op.outerSize(); ++r)
      for (SpMat::InnerIterator it(t.op, r); it; ++it) {
        const auto c = it.col();
        entries[{r, c}] += it.value();
        if (rb[r] == rb[c]) x[{ra[r], ra[c]}] += it.value() / double(db);
        if (ra[r] == ra[c]) y[{rb[r], rb[c]}] += it.value() / double(da);
        if (r == c) tr += it.value();
      }
    const cplx shift = tr / double(da * db);
    for (std::int64_t i = 0; i < da; ++i) x[{i, i}] -= shift;
    // Verify term == X (x) I + I (x) Y entrywise over the union of supports.
    std::vector<std::vector<std::int64_t>> by_a(da), by_b(db);
    for (std::int64_t i = 0; i < dl; ++i) {
      by_a[ra[i]].push_back(i);
      by_b[rb[i]].push_back(i);
    }
    std::vector<std::int64_t> inv(da * db, -1);
    for (std::int64_t i = 0; i < dl; ++i) inv[ra[i] * db + rb[i]] = i;
    std::map<std::pair<std::int64_t, std::int64_t>, cplx> cand;
    for (const auto &[rc, v] : x)
      for (std::int64_t k = 0; k < db; ++k) cand[{inv[rc.first * db + k], inv[rc.second * db + k]}] += v;
    for (const auto &[rc, v] : y)
      for (std::int64_t k = 0; k < da; ++k) cand[{inv[k * db + rc.first], inv[k * db + rc.second]}] += v;
    for (const auto &[rc, v] : cand) {
      auto it = entries.find(rc);
      if (std::abs(v - (it == entries.end() ? cplx(0) : it->second)) > 1e-12) return std::nullopt;
    }
    for (const auto &[rc, v] : entries)
      if (!cand.count(rc) && std::abs(v) > 1e-12) return std::nullopt;
    SpMat xa = from_map(x, da), yb = from_map(y, db);
    if (xa.nonZeros()) out.a.add({t.sites, std::move(xa), std::nullopt});
    if (yb.nonZeros()) out.b.add({t.sites, std::move(yb), std::nullopt});
  }
  return out;
}

namespace {

SpectralResult split_min(const ComponentSplit &s, const EigenOptions &opt) {
  SpectralResult ra = min_eigenvalue(s.a, opt), rb = min_eigenvalue(s.b, opt);
  SpectralResult r;
  r.method = "split(" + ra.method + "," + rb.method + ")";
  r.lambda_min = ra.lambda_min + rb.lambda_min;
  r.iterations = ra.iterations + rb.iterations;
  r.residual_norm = std::hypot(ra.residual_norm, rb.residual_norm);
  return r;
}

}  // namespace

SpectralResult oracle_min_eigenvalue(const SparseOperator &h, const EigenOptions &opt, bool allow_split) {
  if (allow_split && !h.terms().empty())
    if (auto s = split_components(h)) return split_min(*s, opt);
  return min_eigenvalue(h, opt);
}

SpectralResult instance_min_eigenvalue(const QcspInstance &inst, const HamiltonianOptions &hopt,
                                       const EigenOptions &opt, bool allow_split) {
  if (allow_split) {
    TermList tl = hamiltonian_terms(inst, hopt);
    if (tl.terms.empty()) return min_eigenvalue(SparseOperator(SiteSpace{}), opt);
    if (auto s = split_components(tl.space, tl.terms, hopt.cap)) return split_min(*s, opt);
  }
  return min_eigenvalue(total_hamiltonian(inst, hopt), opt);
}

std::vector<Vec> kernel_basis(const SparseOperator &op, std::uint64_t max_dim, double tol) {
  const std::uint64_t n = op.dim();
  if (n > max_dim) throw CapExceeded(n, max_dim);
  Dense h = op.to_dense(max_dim);
  Eigen::SelfAdjointEigenSolver<Dense> es(h);
  Eigen::Index k = 0;
  while (k < es.eigenvalues().size() && es.eigenvalues()[k] < tol) ++k;
  Dense v = es.eigenvectors().leftCols(k);
  std::vector<Vec> out;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n) && static_cast<Eigen::Index>(out.size()) < k; ++i) {
    Vec cand = v * v.row(i).adjoint();
    for (const Vec &u : out) cand -= u * u.dot(cand);
    for (const Vec &u : out) cand -= u * u.dot(cand);
    const double nrm = cand.norm();
    if (nrm > 1e-6) out.push_back(cand / nrm);
  }
  return out;
}

SparseOperator normalize_to_projector(const SparseOperator &op, std::uint64_t max_dim, double tol) {
  const auto ker = kernel_basis(op, max_dim, tol);
  const auto n = static_cast<Eigen::Index>(op.dim());
  Dense p = Dense::Identity(n, n);
  for (const Vec &v : ker) p -= v * v.adjoint();
  std::vector<int> sites(op.space().num_sites());
  std::iota(sites.begin(), sites.end(), 0);
  SparseOperator out(op.space());
  out.add({sites, p.sparseView(1.0, 1e-14), std::nullopt});
  return out;
}

std::string dump_coo(const SparseOperator &op, std::uint64_t cap) {
  SpMat h = full_sparse(op.space(), op.terms(), cap);
  std::ostringstream os;
  os.precision(17);
  os << "# dims";
  for (int d : op.space().dims()) os << ' ' << d;
  os << "\n# strides";
  for (auto s : op.space().strides()) os << ' ' << s;
  os << "\n# row col re im\n";
  for (Eigen::Index r = 0; r < h.outerSize(); ++r)
    for (SpMat::InnerIterator it(h, r); it; ++it)
      if (it.value() != cplx(0))
        os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
  return os.str();
}

Satisfiability classify(double lambda_min, double ff_below, double frustrated_above) {
  if (lambda_min < ff_below) return Satisfiability::FrustrationFree;
  if (lambda_min > frustrated_above) return Satisfiability::Frustrated;
  return Satisfiability::Indeterminate;
}

std::string_view to_string(Satisfiability s) {
  switch (s) {
    case Satisfiability::FrustrationFree: return "frustration-free";
    case Satisfiability::Frustrated: return "frustrated";
    case Satisfiability::Indeterminate: return "indeterminate";
  }
  return "?";
}

}  // namespace qcsp
