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

#include "qcsp/history.hpp"

#include <cmath>

#include "qcsp/compiler.hpp"
#include "qcsp/gates.hpp"

namespace qcsp {

namespace {

// Logical register over the circuit's qubits, one bit per defined qubit.
std::vector<cplx> apply_gate(const std::vector<cplx> &s, int n, const GateSpec &g, const std::vector<int> &qs) {
  const auto u = g.matrix.to_complex();
  const int a = static_cast<int>(qs.size()), da = 1 << a;
  std::vector<cplx> out(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (s[x] == cplx(0)) continue;
    int col = 0;
    for (int j = 0; j < a; ++j) col = (col << 1) | static_cast<int>((x >> (n - 1 - qs[j])) & 1);
    for (int row = 0; row < da; ++row) {
      const cplx m = u[static_cast<size_t>(row) * da + col];
      if (m == cplx(0)) continue;
      std::size_t y = x;
      for (int j = 0; j < a; ++j) {
        const std::size_t bit = std::size_t(1) << (n - 1 - qs[j]);
        y = ((row >> (a - 1 - j)) & 1) ? (y | bit) : (y & ~bit);
      }
      out[y] += m * s[x];
    }
  }
  return out;
}

}  // namespace

HistoryState build_history_state(const Circuit &c, std::optional<int> truncate_at,
                                 const std::vector<int> &witness_bits, std::uint64_t cap) {
  HistoryState h;
  h.instance = compile(c);
  h.space = type_restrict(h.instance, true).space;
  const std::uint64_t dim = h.space.total_dim();
  if (dim > cap) throw CapExceeded(dim, cap);
  const CompilationLayout l = layout_for(c);
  const int m = l.m, k = l.k;
  const int times = truncate_at ? *truncate_at : k + 1;
  if (times < 1 || times > k + 1) throw std::invalid_argument("truncation time out of range");

  std::vector<int> bit(m, 0);
  size_t wi = 0;
  for (int i = 0; i < m; ++i) {
    if (c.init[i] == InitTag::Witness) {
      if (wi >= witness_bits.size()) throw std::invalid_argument("missing witness bit");
      bit[i] = witness_bits[wi++];
    }
  }
  // Product initial state on the m-bit register; Free qubits are tracked as
  // bit 0 here and mapped to U_L when embedding.
  std::vector<cplx> s(std::size_t(1) << m);
  for (std::size_t x = 0; x < s.size(); ++x) {
    cplx amp = 1.0;
    for (int i = 0; i < m; ++i) {
      const int b = static_cast<int>((x >> (m - 1 - i)) & 1);
      switch (c.init[i]) {
        case InitTag::Coin: amp *= M_SQRT1_2; break;
        case InitTag::Free: amp *= b == 0 ? 1.0 : 0.0; break;
        default: amp *= b == bit[i] ? 1.0 : 0.0; break;
      }
    }
    s[x] = amp;
  }

  const auto strides = h.space.strides();
  // Digit of `flat` on `site`; unused sites have a single state.
  auto digit = [&](int site, int flat) -> std::uint64_t {
    if (h.space.dim(site) == 1) return 0;
    return static_cast<std::uint64_t>(h.space.local_index(site, flat)) * strides[site];
  };
  // Without any Start clause S is unused and T_0.CA is left in |0>.
  const bool start_used = h.space.dim(l.start()) > 1;
  const int pairs = k + 3;
  const double norm =
      1.0 / std::sqrt(static_cast<double>(times)) * std::pow(M_SQRT1_2, start_used ? pairs : pairs - 1);
  h.psi = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (int tau = 0; tau < times; ++tau) {
    if (tau > 0) {
      const GateApplication &g = c.gates[tau - 1];
      s = apply_gate(s, m, *find_gate(c.variant, g.gate), g.qubits);
    }
    for (std::size_t x = 0; x < s.size(); ++x) {
      if (s[x] == cplx(0)) continue;
      std::uint64_t base = 0;
      for (int i = 0; i < m; ++i) {
        const int b = static_cast<int>((x >> (m - 1 - i)) & 1);
        const int flat = c.init[i] == InitTag::Free ? basis::kLU : b;
        base += digit(l.q(i), flat);
        if (l.commit[i] >= 0) base += digit(l.commit[i], basis::kP0 + bit[i]);
      }
      for (std::uint64_t pat = 0; pat < (std::uint64_t(1) << pairs); ++pat) {
        if (!start_used && (pat & 1)) continue;
        auto pb = [&](int j) { return static_cast<int>((pat >> j) & 1); };
        std::uint64_t idx = base;
        idx += digit(l.start(), basis::kEC0 + pb(0));
        idx += digit(l.end(), basis::kEC0 + pb(k + 2));
        for (int j = 0; j <= k + 1; ++j) idx += digit(l.t(j), basis::clock(j <= tau ? 1 : 0, pb(j), pb(j + 1)));
        h.psi[static_cast<Eigen::Index>(idx)] += norm * s[x];
      }
    }
  }
  return h;
}

}  // namespace qcsp
