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

#include "qcsp/layout.hpp"

namespace qcsp {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::BQP1: return "BQP1";
    case Variant::QCMA: return "QCMA";
    case Variant::CoRP: return "CoRP";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "BQP1") return Variant::BQP1;
  if (s == "QCMA") return Variant::QCMA;
  if (s == "CoRP") return Variant::CoRP;
  return std::nullopt;
}

int local_dim(Variant v) { return v == Variant::BQP1 ? basis::kBaseDim : basis::kExtDim; }

std::string basis::label(int flat) {
  static const char *fixed[] = {"0_L", "1_L", "U_L", "0_EC", "1_EC"};
  if (flat >= 0 && flat < kClock0) return fixed[flat];
  if (is_clock(flat)) {
    return std::string("CL") + char('0' + clock_cl(flat)) + "CA" + char('0' + clock_ca(flat)) + "CB" +
           char('0' + clock_cb(flat));
  }
  if (flat == kP0) return "0_P";
  if (flat == kP1) return "1_P";
  return "?";
}

std::string_view to_string(SiteType t) {
  switch (t) {
    case SiteType::Logical: return "Logical";
    case SiteType::Clock: return "Clock";
    case SiteType::Endpoint: return "Endpoint";
    case SiteType::Commitment: return "Commitment";
  }
  return "?";
}

const std::vector<int> &type_basis(SiteType t) {
  static const std::vector<int> logical{basis::kL0, basis::kL1, basis::kLU};
  static const std::vector<int> endpoint{basis::kEC0, basis::kEC1};
  static const std::vector<int> clock{5, 6, 7, 8, 9, 10, 11, 12};
  static const std::vector<int> commit{basis::kP0, basis::kP1};
  switch (t) {
    case SiteType::Logical: return logical;
    case SiteType::Clock: return clock;
    case SiteType::Endpoint: return endpoint;
    case SiteType::Commitment: return commit;
  }
  return logical;
}

}  // namespace qcsp
