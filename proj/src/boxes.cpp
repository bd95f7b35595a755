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

#include "nlbox/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>

#include "nlbox/errors.hpp"
#include "nlbox/io.hpp"

namespace nlbox {
namespace {

void require_binary(const ConditionalBox& box, const char* op) {
  if (!box.alphabet().is_binary()) {
    throw DimensionError(std::string(op) + " requires a 2x2x2x2 box");
  }
}

double total_variation(const std::vector<double>& p,
                       const std::vector<double>& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

bool is_permutation_of_range(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<int> invert(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

}  // namespace

ConditionalBox::ConditionalBox(Alphabet alphabet, std::vector<double> table)
    : alphabet_(alphabet), table_(std::move(table)) {
  if (alphabet_.alice_inputs < 1 || alphabet_.bob_inputs < 1 ||
      alphabet_.alice_outputs < 1 || alphabet_.bob_outputs < 1) {
    throw DimensionError("alphabet sizes must be positive");
  }
  if (table_.size() != alphabet_.table_size()) {
    throw DimensionError("table has " + std::to_string(table_.size()) +
                         " entries, alphabet needs " +
                         std::to_string(alphabet_.table_size()));
  }
}

std::size_t ConditionalBox::index(int a, int b, int alice_in,
                                  int bob_in) const {
  const auto& s = alphabet_;
  return ((static_cast<std::size_t>(alice_in) * s.bob_inputs + bob_in) *
              s.alice_outputs +
          a) *
             s.bob_outputs +
         b;
}

std::vector<double> ConditionalBox::alice_marginal(int alice_in,
                                                   int bob_in) const {
  std::vector<double> m(alphabet_.alice_outputs, 0.0);
  for (int a = 0; a < alphabet_.alice_outputs; ++a)
    for (int b = 0; b < alphabet_.bob_outputs; ++b)
      m[a] += (*this)(a, b, alice_in, bob_in);
  return m;
}

std::vector<double> ConditionalBox::bob_marginal(int alice_in,
                                                 int bob_in) const {
  std::vector<double> m(alphabet_.bob_outputs, 0.0);
  for (int a = 0; a < alphabet_.alice_outputs; ++a)
    for (int b = 0; b < alphabet_.bob_outputs; ++b)
      m[b] += (*this)(a, b, alice_in, bob_in);
  return m;
}

double ConditionalBox::max_normalization_error() const {
  double worst = 0.0;
  for (int x = 0; x < alphabet_.alice_inputs; ++x) {
    for (int y = 0; y < alphabet_.bob_inputs; ++y) {
      double total = 0.0;
      for (int a = 0; a < alphabet_.alice_outputs; ++a)
        for (int b = 0; b < alphabet_.bob_outputs; ++b)
          total += (*this)(a, b, x, y);
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  return worst;
}

double ConditionalBox::min_entry() const {
  double lowest = *std::min_element(table_.begin(), table_.end());
  return std::min(lowest, 0.0);
}

void validate(const ConditionalBox& box, double tol) {
  for (double p : box.table()) {
    if (!std::isfinite(p)) throw ValidationError("box entry is not finite");
  }
  if (box.min_entry() < -tol) {
    throw ValidationError("negative box entry " +
                          format_double(box.min_entry()));
  }
  if (box.max_normalization_error() > tol) {
    throw ValidationError("box setting not normalized (error " +
                          format_double(box.max_normalization_error()) + ")");
  }
}

ConditionalBox pr_box() {
  std::vector<double> t(16, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) t[((x * 2 + y) * 2 + a) * 2 + b] = 0.5;
  return ConditionalBox({}, std::move(t));
}

ConditionalBox uniform_box(Alphabet alphabet) {
  const double p = 1.0 / (alphabet.alice_outputs * alphabet.bob_outputs);
  return ConditionalBox(alphabet,
                        std::vector<double>(alphabet.table_size(), p));
}

ConditionalBox deterministic_box(int vertex) {
  if (vertex < 0 || vertex >= kDeterministicVertices) {
    throw DimensionError("deterministic vertex out of range");
  }
  const int alice[2] = {(vertex >> 3) & 1, (vertex >> 2) & 1};
  const int bob[2] = {(vertex >> 1) & 1, vertex & 1};
  std::vector<double> t(16, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      t[((x * 2 + y) * 2 + alice[x]) * 2 + bob[y]] = 1.0;
  return ConditionalBox({}, std::move(t));
}

ConditionalBox mix(const ConditionalBox& first, const ConditionalBox& second,
                   double weight) {
  if (!(first.alphabet() == second.alphabet())) {
    throw DimensionError("mix: alphabets differ");
  }
  std::vector<double> t(first.table().size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = weight * first.table()[i] + (1.0 - weight) * second.table()[i];
  }
  return ConditionalBox(first.alphabet(), std::move(t));
}

NoSignalingReport check_no_signaling(const ConditionalBox& box, double tol) {
  validate(box, tol);
  const auto& s = box.alphabet();
  NoSignalingReport report;
  // Alice -> Bob: Bob's marginal must not depend on Alice's input.
  for (int y = 0; y < s.bob_inputs; ++y) {
    for (int x0 = 0; x0 < s.alice_inputs; ++x0) {
      for (int x1 = x0 + 1; x1 < s.alice_inputs; ++x1) {
        double tv = total_variation(box.bob_marginal(x0, y),
                                    box.bob_marginal(x1, y));
        if (tv > report.a_to_b_violation) {
          report.a_to_b_violation = tv;
          report.a_to_b_worst = {x0, x1, y};
        }
      }
    }
  }
  for (int x = 0; x < s.alice_inputs; ++x) {
    for (int y0 = 0; y0 < s.bob_inputs; ++y0) {
      for (int y1 = y0 + 1; y1 < s.bob_inputs; ++y1) {
        double tv = total_variation(box.alice_marginal(x, y0),
                                    box.alice_marginal(x, y1));
        if (tv > report.b_to_a_violation) {
          report.b_to_a_violation = tv;
          report.b_to_a_worst = {y0, y1, x};
        }
      }
    }
  }
  return report;
}

Relabeling Relabeling::identity(const Alphabet& alphabet) {
  auto iota = [](int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
  };
  Relabeling r;
  r.alice_inputs = iota(alphabet.alice_inputs);
  r.bob_inputs = iota(alphabet.bob_inputs);
  r.alice_outputs.assign(alphabet.alice_inputs, iota(alphabet.alice_outputs));
  r.bob_outputs.assign(alphabet.bob_inputs, iota(alphabet.bob_outputs));
  return r;
}

Relabeling Relabeling::flip_alice_output() {
  Relabeling r = identity({});
  r.alice_outputs = {{1, 0}, {1, 0}};
  return r;
}

Relabeling Relabeling::inverse() const {
  Relabeling inv;
  inv.alice_inputs = invert(alice_inputs);
  inv.bob_inputs = invert(bob_inputs);
  // Output maps are keyed by the input they act under; after inversion they
  // are keyed by the relabeled input.
  inv.alice_outputs.resize(alice_outputs.size());
  for (std::size_t x = 0; x < alice_outputs.size(); ++x)
    inv.alice_outputs[alice_inputs[x]] = invert(alice_outputs[x]);
  inv.bob_outputs.resize(bob_outputs.size());
  for (std::size_t y = 0; y < bob_outputs.size(); ++y)
    inv.bob_outputs[bob_inputs[y]] = invert(bob_outputs[y]);
  return inv;
}

ConditionalBox relabel(const ConditionalBox& box, const Relabeling& r) {
  const auto& s = box.alphabet();
  bool ok = is_permutation_of_range(r.alice_inputs, s.alice_inputs) &&
            is_permutation_of_range(r.bob_inputs, s.bob_inputs) &&
            static_cast<int>(r.alice_outputs.size()) == s.alice_inputs &&
            static_cast<int>(r.bob_outputs.size()) == s.bob_inputs;
  for (const auto& perm : r.alice_outputs)
    ok = ok && is_permutation_of_range(perm, s.alice_outputs);
  for (const auto& perm : r.bob_outputs)
    ok = ok && is_permutation_of_range(perm, s.bob_outputs);
  if (!ok) throw DimensionError("relabeling does not match box alphabet");

  ConditionalBox out(s, std::vector<double>(box.table().size(), 0.0));
  std::vector<double> t(box.table().size(), 0.0);
  for (int x = 0; x < s.alice_inputs; ++x)
    for (int y = 0; y < s.bob_inputs; ++y)
      for (int a = 0; a < s.alice_outputs; ++a)
        for (int b = 0; b < s.bob_outputs; ++b)
          t[out.index(r.alice_outputs[x][a], r.bob_outputs[y][b],
                      r.alice_inputs[x], r.bob_inputs[y])] = box(a, b, x, y);
  return ConditionalBox(s, std::move(t));
}

double chsh_value(const ConditionalBox& box) {
  require_binary(box, "chsh_value");
  double value = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double correlator = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          correlator += ((a ^ b) ? -1.0 : 1.0) * box(a, b, x, y);
      value += ((x & y) ? -1.0 : 1.0) * correlator;
    }
  }
  return value;
}

ConditionalBox local_mixture(
    const std::array<double, kDeterministicVertices>& weights) {
  std::vector<double> t(16, 0.0);
  for (int v = 0; v < kDeterministicVertices; ++v) {
    if (weights[v] == 0.0) continue;
    const auto vertex = deterministic_box(v);
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] += weights[v] * vertex.table()[i];
  }
  return ConditionalBox({}, std::move(t));
}

void write_box_csv(std::ostream& out, const ConditionalBox& box) {
  const auto& s = box.alphabet();
  out << "A,B,a,b,p\n";
  for (int x = 0; x < s.alice_inputs; ++x)
    for (int y = 0; y < s.bob_inputs; ++y)
      for (int a = 0; a < s.alice_outputs; ++a)
        for (int b = 0; b < s.bob_outputs; ++b)
          out << x << ',' << y << ',' << a << ',' << b << ','
              << format_double(box(a, b, x, y)) << '\n';
}

ConditionalBox read_box_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "A,B,a,b,p") {
    throw ValidationError("box CSV: expected header 'A,B,a,b,p'");
  }
  std::map<std::tuple<int, int, int, int>, double> entries;
  Alphabet s{0, 0, 0, 0};
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 5) {
      throw ValidationError("box CSV line " + std::to_string(line_no) +
                            ": expected 5 fields");
    }
    int idx[4];
    double p = 0.0;
    try {
      for (int k = 0; k < 4; ++k) {
        long long v = parse_integer(fields[k]);
        if (v < 0 || v > 1 << 16) throw std::invalid_argument("range");
        idx[k] = static_cast<int>(v);
      }
      p = parse_double(fields[4]);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("box CSV line " + std::to_string(line_no) + ": " +
                            e.what());
    }
    auto key = std::make_tuple(idx[0], idx[1], idx[2], idx[3]);
    if (!entries.empty() && key <= entries.rbegin()->first) {
      throw ValidationError("box CSV line " + std::to_string(line_no) +
                            ": rows must be in (A,B,a,b) lexicographic order");
    }
    entries[key] = p;
    s.alice_inputs = std::max(s.alice_inputs, idx[0] + 1);
    s.bob_inputs = std::max(s.bob_inputs, idx[1] + 1);
    s.alice_outputs = std::max(s.alice_outputs, idx[2] + 1);
    s.bob_outputs = std::max(s.bob_outputs, idx[3] + 1);
  }
  if (entries.empty()) throw ValidationError("box CSV has no rows");
  if (entries.size() != s.table_size()) {
    throw ValidationError("box CSV: table incomplete (" +
                          std::to_string(entries.size()) + " of " +
                          std::to_string(s.table_size()) + " entries)");
  }
  std::vector<double> t;
  t.reserve(entries.size());
  for (const auto& [key, p] : entries) t.push_back(p);
  return ConditionalBox(s, std::move(t));
}

}  // namespace nlbox
