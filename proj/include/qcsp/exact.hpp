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

#include <complex>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qcsp {

using BigInt = boost::multiprecision::cpp_int;

/// Element of Z[sqrt2, i][1/sqrt2]:
///   (a + b*sqrt2 + i*(c + d*sqrt2)) / sqrt2^e.
/// Canonical: e == 0, or at least one of a, c is odd. Zero is all-zero.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(long long a) : a_(a) {}  // NOLINT: integers embed implicitly
  ExactScalar(BigInt a, BigInt b, BigInt c, BigInt d, int e);

  static ExactScalar sqrt2_inv(int power);  // 1 / sqrt2^power
  static ExactScalar omega(int k);          // exp(i*pi*k/4)

  const BigInt &a() const { return a_; }
  const BigInt &b() const { return b_; }
  const BigInt &c() const { return c_; }
  const BigInt &d() const { return d_; }
  int e() const { return e_; }

  bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }
  ExactScalar conj() const;
  ExactScalar operator-() const;
  ExactScalar &operator+=(const ExactScalar &o);
  ExactScalar &operator-=(const ExactScalar &o) { return *this += -o; }
  ExactScalar &operator*=(const ExactScalar &o);
  friend ExactScalar operator+(ExactScalar x, const ExactScalar &y) { return x += y; }
  friend ExactScalar operator-(ExactScalar x, const ExactScalar &y) { return x -= y; }
  friend ExactScalar operator*(ExactScalar x, const ExactScalar &y) { return x *= y; }
  bool operator==(const ExactScalar &o) const;
  bool operator!=(const ExactScalar &o) const { return !(*this == o); }

  /// |x|^2, which is real: returns it with c == d == 0.
  ExactScalar norm2() const { return *this * conj(); }
  std::complex<double> to_complex() const;
  std::string str() const;

  /// The same value written as (a + i*b + sqrt2*c + i*sqrt2*d) / 2^k.
  struct Dyadic {
    BigInt a, b, c, d;
    int k = 0;
  };
  Dyadic dyadic_form() const;

 private:
  void canonicalize();
  BigInt a_ = 0, b_ = 0, c_ = 0, d_ = 0;
  int e_ = 0;
};

/// Dense square matrix over ExactScalar, row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  explicit ExactMatrix(int dim) : dim_(dim), v_(static_cast<size_t>(dim) * dim) {}
  static ExactMatrix identity(int dim);

  int dim() const { return dim_; }
  ExactScalar &operator()(int r, int c) { return v_[static_cast<size_t>(r) * dim_ + c]; }
  const ExactScalar &operator()(int r, int c) const { return v_[static_cast<size_t>(r) * dim_ + c]; }

  ExactMatrix operator*(const ExactMatrix &o) const;
  ExactMatrix adjoint() const;
  ExactMatrix kron(const ExactMatrix &o) const;
  bool operator==(const ExactMatrix &o) const { return dim_ == o.dim_ && v_ == o.v_; }
  bool is_unitary() const { return (*this * adjoint()) == identity(dim_); }
  std::vector<std::complex<double>> to_complex() const;

 private:
  int dim_ = 0;
  std::vector<ExactScalar> v_;
};

}  // namespace qcsp
