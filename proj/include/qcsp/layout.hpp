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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcsp {

enum class Variant { BQP1, QCMA, CoRP };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view s);

/// 13 for BQP1; 15 for QCMA and CoRP (commitment states appended).
int local_dim(Variant v);

/// Flat basis indices of one qudit.
///   0..2   logical   0_L 1_L U_L
///   3..4   endpoint  0_EC 1_EC
///   5..12  clock     CL (x) CA (x) CB, flat = 5 + 4*CL + 2*CA + CB
///   13..14 commitment 0_P 1_P (15-dim variants only)
namespace basis {
inline constexpr int kL0 = 0;
inline constexpr int kL1 = 1;
inline constexpr int kLU = 2;
inline constexpr int kEC0 = 3;
inline constexpr int kEC1 = 4;
inline constexpr int kClock0 = 5;
inline constexpr int kP0 = 13;
inline constexpr int kP1 = 14;
inline constexpr int kBaseDim = 13;
inline constexpr int kExtDim = 15;

constexpr int clock(int cl, int ca, int cb) { return kClock0 + 4 * cl + 2 * ca + cb; }
constexpr int clock_cl(int flat) { return ((flat - kClock0) >> 2) & 1; }
constexpr int clock_ca(int flat) { return ((flat - kClock0) >> 1) & 1; }
constexpr int clock_cb(int flat) { return (flat - kClock0) & 1; }
constexpr bool is_clock(int flat) { return flat >= kClock0 && flat < kClock0 + 8; }

std::string label(int flat);
}  // namespace basis

enum class SiteType { Logical, Clock, Endpoint, Commitment };

std::string_view to_string(SiteType t);

/// Flat indices spanning the typed subspace, in increasing order.
/// Restricted index of a clock state is 4*CL + 2*CA + CB.
const std::vector<int> &type_basis(SiteType t);

}  // namespace qcsp
