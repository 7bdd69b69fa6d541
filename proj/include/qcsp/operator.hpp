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

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsp/instance.hpp"

namespace qcsp {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vec = Eigen::VectorXcd;
using Dense = Eigen::MatrixXcd;

/// Thrown when an operation would exceed a configured dimension cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::uint64_t required, std::uint64_t cap)
      : std::runtime_error("dimension " + std::to_string(required) + " exceeds cap " + std::to_string(cap)),
        required_(required) {}
  std::uint64_t required() const { return required_; }

 private:
  std::uint64_t required_;
};

/// Per-site flat basis subsets; the local dimension of a site is the size of
/// its subset. Row-major: site 0 is the most significant digit.
struct SiteSpace {
  std::vector<std::vector<int>> basis;

  static SiteSpace uniform(int num_sites, int local_dim);
  int num_sites() const { return static_cast<int>(basis.size()); }
  int dim(int site) const { return static_cast<int>(basis[site].size()); }
  std::vector<int> dims() const;
  /// Saturates at UINT64_MAX.
  std::uint64_t total_dim() const;
  std::vector<std::uint64_t> strides() const;
  /// Position of flat state `flat` in the site's subset, or -1.
  int local_index(int site, int flat) const;
};

/// W * M * W^dagger with W = factors[0] (x) factors[1] (x) ... an isometry;
/// used when the local space is too large for an explicit sparse matrix.
struct Factored {
  std::vector<SpMat> factors;  // each rows x cols, first is most significant
  Dense m;                     // rank x rank, Hermitian

  std::int64_t rows() const;
  std::int64_t rank() const;
  /// W^dagger v and W z through mode products.
  Vec project(const Vec &v) const;
  Vec lift(const Vec &z) const;
  SpMat w() const;
};

/// A Hermitian PSD operator on `sites` (in that order). Exactly one of `op`
/// and `factored` is populated.
struct LocalTerm {
  std::vector<int> sites;
  SpMat op;
  std::optional<Factored> factored;

  std::int64_t local_dim() const;
  Dense dense() const;
};

class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(SiteSpace space) : space_(std::move(space)) {}

  const SiteSpace &space() const { return space_; }
  const std::vector<LocalTerm> &terms() const { return terms_; }
  std::uint64_t dim() const { return space_.total_dim(); }

  /// Adds a term; sites index this operator's space. Throws on dimension
  /// mismatch.
  void add(LocalTerm t);
  void append(const SparseOperator &other);

  /// y = H x (y is overwritten).
  void apply(const Vec &x, Vec &y) const;
  Vec apply(const Vec &x) const;

  /// Dense Kronecker construction, independent of apply(); throws CapExceeded.
  Dense to_dense(std::uint64_t cap = 4096) const;

 private:
  struct Plan {
    std::vector<std::uint64_t> offsets;  // local index -> flat offset
    std::vector<std::uint64_t> rest;     // flat bases of the remaining sites
  };
  Plan plan_for(const LocalTerm &t) const;

  SiteSpace space_;
  std::vector<LocalTerm> terms_;
  mutable std::vector<Plan> plans_;
};

/// Clause operator on positional sites 0..arity-1, each a subset of the
/// flat basis. `normalized_kernel_matches` records that the kernel equals
/// that of the normalized projector, which holds for every catalog entry.
struct ClauseOperator {
  ClauseKind kind;
  std::vector<LocalTerm> terms;
  bool normalized_kernel_matches = true;
};

/// Builds the unnormalized PSD sum for `kind` with positional site bases.
/// `gate` is required iff kind == PropU. Throws std::invalid_argument on a
/// gate/kind mismatch or a wrong number of bases.
ClauseOperator build_clause_operator(ClauseKind kind, const GateSpec *gate,
                                     const std::vector<std::vector<int>> &bases);

/// Same with the full local dimension on every site.
ClauseOperator build_clause_operator(ClauseKind kind, const GateSpec *gate, int local_dim);

/// Wraps one term in a SparseOperator on `space` at `sites`.
SparseOperator embed(const LocalTerm &term, const std::vector<int> &sites, const SiteSpace &space);

/// Per-site positional demands; empty set means the site is unused.
std::vector<std::vector<SiteType>> demanded_types(const QcspInstance &inst);

struct Restriction {
  SiteSpace space;
  std::vector<bool> conflict;  // per site; conflicting sites keep the full basis
};

/// Shrinks each site to its type's subspace (logical 3, clock 8, endpoint 2,
/// commitment 2, unused 1). With strict = true a conflict throws
/// InputError, otherwise the conflicting site keeps its full basis.
Restriction type_restrict(const QcspInstance &inst, bool strict = false);

struct HamiltonianOptions {
  bool restrict_types = true;
  std::uint64_t cap = std::uint64_t(1) << 22;
  bool allow_catalog = true;
};

/// Clause terms on the (optionally restricted) space, summed per site tuple.
struct TermList {
  SiteSpace space;
  std::vector<LocalTerm> terms;
};
TermList hamiltonian_terms(const QcspInstance &inst, const HamiltonianOptions &opt = {});

/// Throws CapExceeded above opt.cap.
SparseOperator total_hamiltonian(const QcspInstance &inst, const HamiltonianOptions &opt = {});

struct SpectralResult {
  double lambda_min = 0.0;
  Vec witness;
  int iterations = 0;
  double residual_norm = 0.0;
  std::string method;
};

struct EigenOptions {
  double tol = 1e-10;  // residual target
  std::uint64_t seed = 1;
  std::uint64_t dense_cap = 1024;
  int max_iterations = 20000;
  std::size_t memory_budget_bytes = std::size_t(1) << 30;
};

/// Dense eigensolver at or below dense_cap, restarted Lanczos with full
/// reorthogonalization above. Throws std::runtime_error on non-convergence.
SpectralResult min_eigenvalue(const SparseOperator &op, const EigenOptions &opt = {});

/// Every typed site factors as (CL, logical value, commitment bit) x
/// (CA, CB, EC bits). When each term is X (x) I + I (x) Y across that cut,
/// H = A (x) I + I (x) B and lambda_min(H) = lambda_min(A) + lambda_min(B).
/// Returns nullopt if some site is untyped (conflict) or some term does not
/// separate; every term's separation is verified entrywise.
struct ComponentSplit {
  SparseOperator a;
  SparseOperator b;
};
std::optional<ComponentSplit> split_components(const SparseOperator &h);
/// Same on a term list; throws CapExceeded when a factor space exceeds `cap`.
std::optional<ComponentSplit> split_components(const SiteSpace &space, const std::vector<LocalTerm> &terms,
                                               std::uint64_t cap = std::uint64_t(1) << 22);

/// split_components when available (method "split"), else min_eigenvalue.
SpectralResult oracle_min_eigenvalue(const SparseOperator &h, const EigenOptions &opt = {}, bool allow_split = true);

/// Instance-level oracle: splits before building the full space, so only the
/// factor spaces need to fit `hopt.cap`; falls back to the full operator.
SpectralResult instance_min_eigenvalue(const QcspInstance &inst, const HamiltonianOptions &hopt = {},
                                       const EigenOptions &opt = {}, bool allow_split = true);

/// Orthonormal basis of {v : |Hv| small}; eigenvalues below `tol` count as
/// zero. Deterministic: candidates are the projected standard basis vectors
/// in index order, then Gram-Schmidt.
std::vector<Vec> kernel_basis(const SparseOperator &op, std::uint64_t max_dim = 4096, double tol = 1e-9);

/// I - (projector onto the kernel of op), as a single dense term.
SparseOperator normalize_to_projector(const SparseOperator &op, std::uint64_t max_dim = 4096,
                                      double tol = 1e-9);

/// Coordinate list "row col re im" per nonzero, preceded by a header with
/// the site dimensions and strides.
std::string dump_coo(const SparseOperator &op, std::uint64_t cap = 4096);

enum class Satisfiability { FrustrationFree, Frustrated, Indeterminate };
inline constexpr double kFrustrationFreeBelow = 1e-7;
inline constexpr double kFrustratedAbove = 1e-4;
Satisfiability classify(double lambda_min, double ff_below = kFrustrationFreeBelow,
                        double frustrated_above = kFrustratedAbove);
std::string_view to_string(Satisfiability s);

}  // namespace qcsp
