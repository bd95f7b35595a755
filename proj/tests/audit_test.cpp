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

#include "nlbox/audit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nlbox/hybrid.hpp"
#include "nlbox/quantum.hpp"

namespace nlbox {
namespace {

using std::numbers::pi;

TEST(EffectiveBoxTest, UnrotatedSettingIsPsi0InZZ) {
  for (double t : {0.0, 0.3, 1.0}) {
    const auto box = effective_box(t);
    EXPECT_NEAR(box(0, 0, 0, 0), 0.5, 1e-15);
    EXPECT_NEAR(box(1, 1, 0, 0), 0.5, 1e-15);
    EXPECT_NEAR(box(0, 1, 0, 0), 0.0, 1e-15);
    EXPECT_NEAR(box(1, 0, 0, 0), 0.0, 1e-15);
  }
}

TEST(EffectiveBoxTest, BobMarginalInXAtQuarterPi) {
  const auto m = effective_box(pi / 4).bob_marginal(1, 1);
  EXPECT_NEAR(m[0], 0.75, 1e-15);
  EXPECT_NEAR(m[1], 0.25, 1e-15);
}

TEST(EffectiveBoxTest, ZeroAngleIsNonSignaling) {
  const auto r = check_no_signaling(effective_box(0.0));
  EXPECT_LE(r.a_to_b_violation, 1e-15);
  EXPECT_LE(r.b_to_a_violation, 1e-15);
}

TEST(AuditTest, KnownViolations) {
  const auto quarter = audit_dynamics(pi / 4);
  EXPECT_TRUE(quarter.positivity_ok);
  EXPECT_TRUE(quarter.normalization_ok);
  EXPECT_NEAR(quarter.a_to_b_violation, 0.25, 1e-10);
  EXPECT_EQ(quarter.worst_setting.receiver_input, 1);
  const auto zero = audit_dynamics(0.0);
  EXPECT_TRUE(zero.positivity_ok && zero.normalization_ok);
  EXPECT_LE(zero.a_to_b_violation, 1e-10);
  EXPECT_NEAR(audit_dynamics(0.3).a_to_b_violation, std::sin(0.6) / 4, 1e-10);
  EXPECT_NEAR(audit_dynamics(0.3).a_to_b_violation, 0.1411606, 1e-7);
}

TEST(AuditTest, PropertyMatchesTraceDistanceAndNoRetroSignal) {
  for (int i = 0; i <= 32; ++i) {
    const double t = -pi / 2 + pi * i / 32;
    const auto r = audit_dynamics(t);
    EXPECT_TRUE(r.positivity_ok) << t;
    EXPECT_TRUE(r.normalization_ok) << t;
    EXPECT_GE(r.min_entry, -1e-12);
    EXPECT_NEAR(r.a_to_b_violation,
                trace_distance(bob_state(t), bob_state(0.0)), 1e-10);
    EXPECT_LE(r.b_to_a_violation, 1e-10);
  }
}

TEST(AuditCsvTest, RowFormat) {
  std::ostringstream out;
  write_audit_csv_header(out);
  write_audit_csv_row(out, audit_dynamics(0.0), 17);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "theta,pos_ok,norm_ok,ab_violation,ba_violation");
  EXPECT_EQ(out.str().find("\n0,1,1,0,"), out.str().find('\n'));
}

}  // namespace
}  // namespace nlbox
