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

// Mixtures of coherent branches and the linear extension of the PR box to
// superposed inputs.

#ifndef NLBOX_HYBRID_HPP_
#define NLBOX_HYBRID_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "nlbox/expr.hpp"
#include "nlbox/quantum.hpp"

namespace nlbox {

inline constexpr std::size_t kDefaultMaxBranches = 16;

// A weighted list of (possibly unnormalized) kets on `width` qubits. The
// physical state is the trace-normalized mixture sum_i w_i |psi_i><psi_i|.
class HybridState {
 public:
  HybridState(std::size_t width, std::vector<WeightedKet<double>> branches);
  static HybridState pure(const Ket& ket);

  std::size_t width() const { return width_; }
  const std::vector<WeightedKet<double>>& branches() const {
    return branches_;
  }
  std::size_t size() const { return branches_.size(); }

  DensityOperator density() const;

  // Set by pr_extend when some input branch was superposed on both the
  // Alice and the Bob input; the per-branch rule is then an extrapolation.
  bool extrapolated() const { return extrapolated_; }
  void mark_extrapolated() { extrapolated_ = true; }

 private:
  std::size_t width_;
  std::vector<WeightedKet<double>> branches_;
  bool extrapolated_ = false;
};

struct DistributeOptions {
  std::size_t max_branches = kDefaultMaxBranches;
};

// Normal form of an expression:
//   |x>          -> {(1, |x>)}
//   alpha E      -> amplitudes of every branch of E scaled by alpha
//   E1 ⊙ ... ⊙ En -> union of operand branches, weights times 1/n
//   E1 + E2      -> {(w_i v_j, psi_i + phi_j)} over all pairs
// Branches are emitted in left-to-right expansion order. `theta` binds the
// symbols c and s.
HybridState distribute(const StateExpr& expr,
                       std::optional<double> theta = std::nullopt,
                       const DistributeOptions& options = {});

enum class Pairing {
  // Every amplitude picks its own PR output independently (2^k branches).
  kIndependent,
  // All amplitudes pick the same PR output slot (2 branches).
  kCorrelated,
};

struct PrExtendOptions {
  Pairing pairing = Pairing::kIndependent;
  std::size_t max_branches = kDefaultMaxBranches;
};

// For each branch sum_{AB} c_AB |AB>, evaluates
//   sum_{AB} c_AB 1/2 (|0, A.B> ⊙ |1, 1 xor A.B>)
// under `distribute`. Input must be a 2-qubit state.
HybridState pr_extend(const HybridState& input,
                      const PrExtendOptions& options = {});

// The formal expression pr_extend distributes for one input ket.
StateExpr pr_extension_expr(const Ket& input);

// Joint output of the extended PR box when Alice rotates |0> by theta and
// Bob inputs |1>.
DensityOperator pr_output_state(double theta,
                                const PrExtendOptions& options = {});
// Reduced states of that output (Bob keeps the second qubit).
DensityOperator bob_state(double theta, const PrExtendOptions& options = {});
DensityOperator alice_state(double theta,
                            const PrExtendOptions& options = {});

struct SignalingReport {
  double theta = 0.0;
  // Trace distance between Bob's state with and without Alice's rotation.
  double a_to_b_violation = 0.0;
  double helstrom_success = 0.5;
  // Optimal measurement for Bob, decision "rotated" on the first element.
  std::vector<Ket> witness_basis;
  bool plus_minus_witness = false;
};

SignalingReport signaling_witness(double theta,
                                  const PrExtendOptions& options = {});

// One branch per line: `weight; re im re im ...`.
void write_hybrid(std::ostream& out, const HybridState& state);
HybridState read_hybrid(std::istream& in);

}  // namespace nlbox

#endif  // NLBOX_HYBRID_HPP_
