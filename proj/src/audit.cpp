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

#include <cmath>
#include <ostream>

#include "nlbox/errors.hpp"
#include "nlbox/hybrid.hpp"
#include "nlbox/io.hpp"
#include "nlbox/quantum.hpp"

namespace nlbox {

ConditionalBox effective_box(double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const DensityOperator outputs[2] = {pr_output_state(0.0),
                                      pr_output_state(theta)};
  const std::vector<Ket> bob_bases[2] = {computational_basis(2),
                                         plus_minus_basis()};

  std::vector<double> table(16, 0.0);
  const ConditionalBox layout({}, table);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const auto joint =
          measure_probs(outputs[x], product_basis(computational_basis(2),
                                                  bob_bases[y]));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          table[layout.index(a, b, x, y)] = joint[2 * a + b];
    }
  }
  return ConditionalBox({}, std::move(table));
}

AuditReport audit_dynamics(double theta) {
  const ConditionalBox box = effective_box(theta);
  AuditReport report;
  report.theta = theta;
  report.min_entry = box.min_entry();
  report.max_normalization_error = box.max_normalization_error();
  report.positivity_ok = report.min_entry >= -kAuditPositivityTolerance;
  report.normalization_ok =
      report.max_normalization_error <= kAuditNormalizationTolerance;
  if (!report.positivity_ok || !report.normalization_ok) {
    // Marginals of an invalid table are not meaningful.
    report.a_to_b_violation = report.b_to_a_violation = std::nan("");
    return report;
  }
  const auto ns = check_no_signaling(box, kAuditNormalizationTolerance);
  report.a_to_b_violation = ns.a_to_b_violation;
  report.b_to_a_violation = ns.b_to_a_violation;
  report.worst_setting = ns.a_to_b_worst;
  return report;
}

void write_audit_csv_header(std::ostream& out) {
  out << "theta,pos_ok,norm_ok,ab_violation,ba_violation\n";
}

void write_audit_csv_row(std::ostream& out, const AuditReport& r,
                         int digits) {
  out << format_double(r.theta, digits) << ',' << (r.positivity_ok ? 1 : 0)
      << ',' << (r.normalization_ok ? 1 : 0) << ','
      << format_double(r.a_to_b_violation, digits) << ','
      << format_double(r.b_to_a_violation, digits) << '\n';
}

}  // namespace nlbox
