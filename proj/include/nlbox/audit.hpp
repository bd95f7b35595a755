// Copyright 2026 The nlbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Packages the extended PR box with Alice's local rotation as an ordinary
// input/output box, and checks which box-world axioms survive.

#ifndef NLBOX_AUDIT_HPP_
#define NLBOX_AUDIT_HPP_

#include <iosfwd>

#include "nlbox/boxes.hpp"

namespace nlbox {

inline constexpr double kAuditPositivityTolerance = 1e-12;
inline constexpr double kAuditNormalizationTolerance = 1e-12;

// P(a,b|x,y): Alice's input x chooses rotation angle 0 (x=0) or theta (x=1)
// applied to |0> in her input register, Bob's box input is |1>. After the
// extended PR box, Alice measures her output register in Z, Bob measures in
// Z (y=0) or in |+-> (y=1).
ConditionalBox effective_box(double theta);

struct AuditReport {
  double theta = 0.0;
  bool positivity_ok = false;
  bool normalization_ok = false;
  double min_entry = 0.0;
  double max_normalization_error = 0.0;
  double a_to_b_violation = 0.0;
  double b_to_a_violation = 0.0;
  SettingPair worst_setting;
};

AuditReport audit_dynamics(double theta);

void write_audit_csv_header(std::ostream& out);
void write_audit_csv_row(std::ostream& out, const AuditReport& r, int digits);

}  // namespace nlbox

#endif  // NLBOX_AUDIT_HPP_
