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

// Local polytope membership for binary boxes.
//
// The LP minimizes t subject to
//   |sum_v w_v D_v(a,b|A,B) - P(a,b|A,B)| <= t   for all 16 entries,
//   sum_v w_v = 1,  w >= 0,
// written in equality form with slacks and solved by a dense two-phase
// simplex using Bland's rule.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nlbox/boxes.hpp"
#include "nlbox/errors.hpp"

namespace nlbox {
namespace {

constexpr double kPivotEps = 1e-12;

// min c.x  s.t.  A x = b, x >= 0.
class DenseSimplex {
 public:
  DenseSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
               const Eigen::VectorXd& c)
      : m_(a.rows()), n_(a.cols()), cost_(c) {
    tableau_ = Eigen::MatrixXd::Zero(m_, n_ + m_ + 1);
    for (Eigen::Index i = 0; i < m_; ++i) {
      double sign = b(i) < 0 ? -1.0 : 1.0;
      tableau_.row(i).head(n_) = sign * a.row(i);
      tableau_(i, n_ + i) = 1.0;
      tableau_(i, n_ + m_) = sign * b(i);
    }
    basis_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = n_ + i;
    active_.assign(m_, true);
  }

  std::optional<Eigen::VectorXd> solve() {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_ + m_);
    phase1.tail(m_).setOnes();
    run(phase1, n_ + m_);
    if (objective(phase1) > 1e-9) return std::nullopt;
    drive_out_artificials();
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n_ + m_);
    phase2.head(n_) = cost_;
    run(phase2, n_);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (active_[i] && basis_[i] < n_) x(basis_[i]) = rhs(i);
    return x;
  }

 private:
  double rhs(Eigen::Index i) const { return tableau_(i, n_ + m_); }

  double objective(const Eigen::VectorXd& c) const {
    double z = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (active_[i]) z += c(basis_[i]) * rhs(i);
    return z;
  }

  // Columns [0, allowed) may enter the basis.
  void run(const Eigen::VectorXd& c, Eigen::Index allowed) {
    const int max_iterations = 50 * static_cast<int>(n_ + m_);
    for (int iter = 0; iter < max_iterations; ++iter) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        double reduced = c(j);
        for (Eigen::Index i = 0; i < m_; ++i)
          if (active_[i]) reduced -= c(basis_[i]) * tableau_(i, j);
        if (reduced < -kPivotEps) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return;
      Eigen::Index leaving = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!active_[i] || tableau_(i, entering) <= kPivotEps) continue;
        double ratio = rhs(i) / tableau_(i, entering);
        if (leaving < 0 || ratio < best - kPivotEps ||
            (std::abs(ratio - best) <= kPivotEps &&
             basis_[i] < basis_[leaving])) {
          leaving = i;
          best = ratio;
        }
      }
      if (leaving < 0) throw std::runtime_error("locality LP is unbounded");
      pivot(leaving, entering);
    }
    throw std::runtime_error("locality LP did not converge");
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    tableau_.row(row) /= tableau_(row, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row || !active_[i]) continue;
      double f = tableau_(i, col);
      if (f != 0.0) tableau_.row(i) -= f * tableau_.row(row);
    }
    basis_[row] = col;
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(tableau_(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        active_[i] = false;  // redundant constraint
      }
    }
  }

  Eigen::Index m_, n_;
  Eigen::VectorXd cost_;
  Eigen::MatrixXd tableau_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> active_;
};

}  // namespace

LocalityResult is_local(const ConditionalBox& box, double tol) {
  if (!box.alphabet().is_binary()) {
    throw DimensionError("is_local requires a 2x2x2x2 box");
  }
  validate(box, tol);

  constexpr int kEntries = 16;
  constexpr int kWeights = kDeterministicVertices;
  // Variables: w (16), t, upper slacks (16), lower surplus (16).
  constexpr int kT = kWeights;
  constexpr int kVars = kWeights + 1 + 2 * kEntries;
  constexpr int kRows = 2 * kEntries + 1;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kRows, kVars);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(kRows);
  for (int v = 0; v < kWeights; ++v) {
    const auto vertex = deterministic_box(v);
    for (int e = 0; e < kEntries; ++e) {
      a(e, v) = vertex.table()[e];
      a(kEntries + e, v) = vertex.table()[e];
    }
    a(2 * kEntries, v) = 1.0;
  }
  for (int e = 0; e < kEntries; ++e) {
    // M w - t + u = p
    a(e, kT) = -1.0;
    a(e, kT + 1 + e) = 1.0;
    b(e) = box.table()[e];
    // M w + t - v = p
    a(kEntries + e, kT) = 1.0;
    a(kEntries + e, kT + 1 + kEntries + e) = -1.0;
    b(kEntries + e) = box.table()[e];
  }
  b(2 * kEntries) = 1.0;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(kVars);
  c(kT) = 1.0;

  auto x = DenseSimplex(a, b, c).solve();
  if (!x) throw std::runtime_error("locality LP reported infeasible");

  LocalityResult result;
  double total = 0.0;
  for (int v = 0; v < kWeights; ++v) {
    result.weights[v] = std::max(0.0, (*x)(v));
    total += result.weights[v];
  }
  for (auto& w : result.weights) w /= total;

  // Report the gap of the returned weights rather than the LP's t, so the
  // verdict is certified by the weights themselves.
  const auto reconstructed = local_mixture(result.weights);
  double gap = 0.0;
  for (int e = 0; e < kEntries; ++e)
    gap = std::max(gap, std::abs(reconstructed.table()[e] - box.table()[e]));
  result.distance = gap;
  result.local = gap <= tol;
  return result;
}

}  // namespace nlbox
