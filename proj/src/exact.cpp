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

#include "qcsp/exact.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace qcsp {

namespace {

// (x + y*sqrt2) * sqrt2 = 2y + x*sqrt2
void times_sqrt2(BigInt &x, BigInt &y) {
  BigInt nx = 2 * y;
  y = std::move(x);
  x = std::move(nx);
}

bool even(const BigInt &v) { return (v & 1) == 0; }

}  // namespace

ExactScalar::ExactScalar(BigInt a, BigInt b, BigInt c, BigInt d, int e)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), e_(e) {
  while (e_ < 0) {
    times_sqrt2(a_, b_);
    times_sqrt2(c_, d_);
    ++e_;
  }
  canonicalize();
}

ExactScalar ExactScalar::sqrt2_inv(int power) { return ExactScalar(1, 0, 0, 0, power); }

ExactScalar ExactScalar::omega(int k) {
  k = ((k % 8) + 8) % 8;
  switch (k) {
    case 0: return ExactScalar(1, 0, 0, 0, 0);
    case 1: return ExactScalar(1, 0, 1, 0, 1);
    case 2: return ExactScalar(0, 0, 1, 0, 0);
    case 3: return ExactScalar(-1, 0, 1, 0, 1);
    case 4: return ExactScalar(-1, 0, 0, 0, 0);
    case 5: return ExactScalar(-1, 0, -1, 0, 1);
    case 6: return ExactScalar(0, 0, -1, 0, 0);
    default: return ExactScalar(1, 0, -1, 0, 1);
  }
}

void ExactScalar::canonicalize() {
  if (is_zero()) {
    e_ = 0;
    return;
  }
  // (a + b*sqrt2) / sqrt2 = b + (a/2)*sqrt2 when a is even.
  while (e_ > 0 && even(a_) && even(c_)) {
    BigInt na = b_, nb = a_ / 2, nc = d_, nd = c_ / 2;
    a_ = std::move(na);
    b_ = std::move(nb);
    c_ = std::move(nc);
    d_ = std::move(nd);
    --e_;
  }
}

ExactScalar ExactScalar::conj() const { return ExactScalar(a_, b_, -c_, -d_, e_); }

ExactScalar ExactScalar::operator-() const { return ExactScalar(-a_, -b_, -c_, -d_, e_); }

ExactScalar &ExactScalar::operator+=(const ExactScalar &o) {
  BigInt oa = o.a_, ob = o.b_, oc = o.c_, od = o.d_;
  int e = std::max(e_, o.e_);
  for (int i = e_; i < e; ++i) {
    times_sqrt2(a_, b_);
    times_sqrt2(c_, d_);
  }
  for (int i = o.e_; i < e; ++i) {
    times_sqrt2(oa, ob);
    times_sqrt2(oc, od);
  }
  a_ += oa;
  b_ += ob;
  c_ += oc;
  d_ += od;
  e_ = e;
  canonicalize();
  return *this;
}

ExactScalar &ExactScalar::operator*=(const ExactScalar &o) {
  // Z[sqrt2] product: (p + q s)(r + t s) = (pr + 2qt) + (pt + qr) s
  auto mul = [](const BigInt &p, const BigInt &q, const BigInt &r, const BigInt &t) {
    return std::pair<BigInt, BigInt>(p * r + 2 * q * t, p * t + q * r);
  };
  auto [xx0, xx1] = mul(a_, b_, o.a_, o.b_);
  auto [yy0, yy1] = mul(c_, d_, o.c_, o.d_);
  auto [xy0, xy1] = mul(a_, b_, o.c_, o.d_);
  auto [yx0, yx1] = mul(c_, d_, o.a_, o.b_);
  a_ = xx0 - yy0;
  b_ = xx1 - yy1;
  c_ = xy0 + yx0;
  d_ = xy1 + yx1;
  e_ += o.e_;
  canonicalize();
  return *this;
}

bool ExactScalar::operator==(const ExactScalar &o) const {
  return e_ == o.e_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
}

std::complex<double> ExactScalar::to_complex() const {
  const double s = std::sqrt(2.0);
  double scale = std::pow(s, -e_);
  double re = a_.convert_to<double>() + b_.convert_to<double>() * s;
  double im = c_.convert_to<double>() + d_.convert_to<double>() * s;
  return {re * scale, im * scale};
}

std::string ExactScalar::str() const {
  std::ostringstream os;
  os << "(" << a_ << " + " << b_ << "r2 + i(" << c_ << " + " << d_ << "r2))";
  if (e_ != 0) os << "/r2^" << e_;
  return os.str();
}

ExactScalar::Dyadic ExactScalar::dyadic_form() const {
  Dyadic out;
  BigInt a = a_, b = b_, c = c_, d = d_;
  int e = e_;
  if (e % 2 == 1) {
    times_sqrt2(a, b);
    times_sqrt2(c, d);
    ++e;
  }
  // (a + b s + i(c + d s)) / 2^(e/2) = (a + i c + s b + i s d) / 2^k
  out.a = a;
  out.b = c;
  out.c = b;
  out.d = d;
  out.k = e / 2;
  return out;
}

ExactMatrix ExactMatrix::identity(int dim) {
  ExactMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix &o) const {
  ExactMatrix out(dim_);
  for (int r = 0; r < dim_; ++r) {
    for (int k = 0; k < dim_; ++k) {
      const ExactScalar &x = (*this)(r, k);
      if (x.is_zero()) continue;
      for (int c = 0; c < dim_; ++c) {
        const ExactScalar &y = o(k, c);
        if (!y.is_zero()) out(r, c) += x * y;
      }
    }
  }
  return out;
}

ExactMatrix ExactMatrix::adjoint() const {
  ExactMatrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c).conj();
  return out;
}

ExactMatrix ExactMatrix::kron(const ExactMatrix &o) const {
  ExactMatrix out(dim_ * o.dim_);
  for (int r1 = 0; r1 < dim_; ++r1)
    for (int c1 = 0; c1 < dim_; ++c1) {
      const ExactScalar &x = (*this)(r1, c1);
      if (x.is_zero()) continue;
      for (int r2 = 0; r2 < o.dim_; ++r2)
        for (int c2 = 0; c2 < o.dim_; ++c2) out(r1 * o.dim_ + r2, c1 * o.dim_ + c2) = x * o(r2, c2);
    }
  return out;
}

std::vector<std::complex<double>> ExactMatrix::to_complex() const {
  std::vector<std::complex<double>> out(v_.size());
  for (size_t i = 0; i < v_.size(); ++i) out[i] = v_[i].to_complex();
  return out;
}

}  // namespace qcsp
