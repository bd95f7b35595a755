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

// Finite bipartite conditional probability boxes P(a,b|A,B).

#ifndef NLBOX_BOXES_HPP_
#define NLBOX_BOXES_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace nlbox {

inline constexpr double kDefaultTolerance = 1e-9;

// Alphabet sizes: Alice's and Bob's input counts, then their output counts.
struct Alphabet {
  int alice_inputs = 2;
  int bob_inputs = 2;
  int alice_outputs = 2;
  int bob_outputs = 2;

  std::size_t table_size() const {
    return static_cast<std::size_t>(alice_inputs) * bob_inputs *
           alice_outputs * bob_outputs;
  }
  bool is_binary() const {
    return alice_inputs == 2 && bob_inputs == 2 && alice_outputs == 2 &&
           bob_outputs == 2;
  }
  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

// Conditional probability table. Entries are stored in (A, B, a, b)
// lexicographic order, the same order the CSV format uses.
//
// Construction only checks the table has the right size; use `validate` to
// check positivity and per-setting normalization.
class ConditionalBox {
 public:
  ConditionalBox(Alphabet alphabet, std::vector<double> table);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<double>& table() const { return table_; }

  double operator()(int a, int b, int alice_in, int bob_in) const {
    return table_[index(a, b, alice_in, bob_in)];
  }
  std::size_t index(int a, int b, int alice_in, int bob_in) const;

  // P(a | A, B) and P(b | A, B).
  std::vector<double> alice_marginal(int alice_in, int bob_in) const;
  std::vector<double> bob_marginal(int alice_in, int bob_in) const;

  // Largest deviation from per-setting normalization and the most negative
  // entry (0 when all entries are non-negative).
  double max_normalization_error() const;
  double min_entry() const;

  friend bool operator==(const ConditionalBox&,
                         const ConditionalBox&) = default;

 private:
  Alphabet alphabet_;
  std::vector<double> table_;
};

// Throws ValidationError if an entry is below -tol or a setting's total is
// off by more than tol.
void validate(const ConditionalBox& box, double tol = kDefaultTolerance);

// P(a,b|A,B) = 1/2 if a xor b = A.B, else 0.
ConditionalBox pr_box();
// Every entry 1/(|a||b|).
ConditionalBox uniform_box(Alphabet alphabet = {});
// Binary deterministic box. Vertex index is lexicographic in
// (a(A=0), a(A=1), b(B=0), b(B=1)), i.e. index = 8 a0 + 4 a1 + 2 b0 + b1.
ConditionalBox deterministic_box(int vertex);
inline constexpr int kDeterministicVertices = 16;

// weight * first + (1 - weight) * second.
ConditionalBox mix(const ConditionalBox& first, const ConditionalBox& second,
                   double weight);

struct SettingPair {
  int sender_input_0 = 0;
  int sender_input_1 = 0;
  int receiver_input = 0;
};

// Violations are total-variation distances of one party's output marginal
// across the other party's inputs, maximized over the receiver's setting and
// sender input pairs.
struct NoSignalingReport {
  double a_to_b_violation = 0.0;
  double b_to_a_violation = 0.0;
  SettingPair a_to_b_worst;
  SettingPair b_to_a_worst;

  bool no_signaling(double tol) const {
    return a_to_b_violation <= tol && b_to_a_violation <= tol;
  }
};

NoSignalingReport check_no_signaling(const ConditionalBox& box,
                                     double tol = kDefaultTolerance);

// Local relabeling: inputs are permuted per side, outputs per side and per
// (original) input. The relabeled box satisfies
//   P'(sigma_A[A](a), sigma_B[B](b) | pi_A(A), pi_B(B)) = P(a, b | A, B).
struct Relabeling {
  std::vector<int> alice_inputs;
  std::vector<int> bob_inputs;
  std::vector<std::vector<int>> alice_outputs;
  std::vector<std::vector<int>> bob_outputs;

  static Relabeling identity(const Alphabet& alphabet);
  // Flip Alice's output bit for every input of a binary box.
  static Relabeling flip_alice_output();

  Relabeling inverse() const;
};

ConditionalBox relabel(const ConditionalBox& box, const Relabeling& r);

// sum_{A,B} (-1)^{A.B} E(A,B), E(A,B) = sum_{a,b} (-1)^{a xor b} P(a,b|A,B).
double chsh_value(const ConditionalBox& box);

struct LocalityResult {
  bool local = false;
  // Infinity-norm distance from the box to the local polytope.
  double distance = 0.0;
  // Convex weights over deterministic_box(0..15); meaningful when local.
  std::array<double, kDeterministicVertices> weights{};
};

// Local polytope membership by linear programming: minimizes the
// infinity-norm gap between the box and a convex combination of the 16
// deterministic boxes.
LocalityResult is_local(const ConditionalBox& box,
                        double tol = kDefaultTolerance);

// Weighted sum of deterministic boxes.
ConditionalBox local_mixture(
    const std::array<double, kDeterministicVertices>& weights);

// CSV with header `A,B,a,b,p`, rows in (A,B,a,b) lexicographic order.
void write_box_csv(std::ostream& out, const ConditionalBox& box);
ConditionalBox read_box_csv(std::istream& in);

}  // namespace nlbox

#endif  // NLBOX_BOXES_HPP_
