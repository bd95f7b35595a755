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

#include "nlbox/hybrid.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nlbox/errors.hpp"
#include "nlbox/io.hpp"

namespace nlbox {
namespace {

using Branches = std::vector<WeightedKet<double>>;

// Amplitudes below this fraction of the branch norm count as absent.
constexpr double kNegligibleAmplitude = 1e-15;

void enforce_limit(std::size_t count, std::size_t limit) {
  if (count > limit) {
    throw DomainError("expansion produces " + std::to_string(count) +
                      " branches, limit is " + std::to_string(limit));
  }
}

Branches expand(const StateExpr& e, std::optional<double> theta,
                std::size_t limit) {
  switch (e.kind()) {
    case StateExpr::Kind::kKet:
      return {{1.0, Ket::from_label(e.label())}};
    case StateExpr::Kind::kScaled: {
      const auto alpha = e.scalar().evaluate(theta);
      Branches branches = expand(e.child(), theta, limit);
      for (auto& b : branches) b.ket = alpha * b.ket;
      return branches;
    }
    case StateExpr::Kind::kIncoherentSum: {
      const double share = 1.0 / static_cast<double>(e.children().size());
      Branches branches;
      for (const auto& operand : e.children()) {
        for (auto& b : expand(operand, theta, limit)) {
          b.weight *= share;
          branches.push_back(std::move(b));
        }
        enforce_limit(branches.size(), limit);
      }
      return branches;
    }
    case StateExpr::Kind::kCoherentSum: {
      Branches acc = expand(e.children().front(), theta, limit);
      for (std::size_t t = 1; t < e.children().size(); ++t) {
        const Branches rhs = expand(e.children()[t], theta, limit);
        enforce_limit(acc.size() * rhs.size(), limit);
        Branches next;
        next.reserve(acc.size() * rhs.size());
        for (const auto& x : acc)
          for (const auto& y : rhs)
            next.push_back({x.weight * y.weight, x.ket + y.ket});
        acc = std::move(next);
      }
      return acc;
    }
  }
  throw ValidationError("unknown expression node");
}

std::string two_bits(int first, int second) {
  return std::string{static_cast<char>('0' + first),
                     static_cast<char>('0' + second)};
}

// Output labels of the PR box for input (A, B): slot 0 has a = 0.
std::string pr_output_label(int slot, int alice_in, int bob_in) {
  const int and_bit = alice_in & bob_in;
  return slot == 0 ? two_bits(0, and_bit) : two_bits(1, 1 ^ and_bit);
}

std::vector<Eigen::Index> support(const Ket& ket) {
  const double cutoff = kNegligibleAmplitude * ket.norm();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < ket.dim(); ++i)
    if (std::abs(ket[i]) > cutoff) idx.push_back(i);
  return idx;
}

std::size_t qubit_count(Eigen::Index dim) {
  std::size_t width = 0;
  while ((Eigen::Index{1} << width) < dim) ++width;
  if ((Eigen::Index{1} << width) != dim || width == 0) {
    throw DimensionError("ket dimension is not a power of two");
  }
  return width;
}

}  // namespace

HybridState::HybridState(std::size_t width,
                         std::vector<WeightedKet<double>> branches)
    : width_(width), branches_(std::move(branches)) {
  if (width_ == 0 || width_ > 20) throw DimensionError("register width");
  if (branches_.empty()) throw ValidationError("hybrid state has no branches");
  const Eigen::Index dim = Eigen::Index{1} << width_;
  for (const auto& b : branches_) {
    if (b.ket.dim() != dim) throw DimensionError("branch dimension");
    if (!(b.weight >= 0.0) || !std::isfinite(b.weight)) {
      throw ValidationError("branch weight must be finite and >= 0");
    }
  }
}

HybridState HybridState::pure(const Ket& ket) {
  return HybridState(qubit_count(ket.dim()), {{1.0, ket}});
}

DensityOperator HybridState::density() const {
  return density_from_mixture(branches_);
}

HybridState distribute(const StateExpr& expr, std::optional<double> theta,
                       const DistributeOptions& options) {
  const WidthCheck check = check_width(expr);
  if (check.mismatch) {
    throw DimensionError("ket |" + check.mismatch->label() +
                         "> does not match register width " +
                         std::to_string(check.width));
  }
  Branches branches = expand(expr, theta, options.max_branches);
  enforce_limit(branches.size(), options.max_branches);
  return HybridState(check.width, std::move(branches));
}

StateExpr pr_extension_expr(const Ket& input) {
  if (input.dim() != 4) throw DimensionError("PR extension needs 2 qubits");
  std::vector<StateExpr> terms;
  for (Eigen::Index i : support(input)) {
    const int alice_in = static_cast<int>(i >> 1);
    const int bob_in = static_cast<int>(i & 1);
    auto outcomes = StateExpr::incoherent(
        {StateExpr::ket(pr_output_label(0, alice_in, bob_in)),
         StateExpr::ket(pr_output_label(1, alice_in, bob_in))});
    terms.push_back(StateExpr::scaled(
        Scalar::complex(input[i]),
        StateExpr::scaled(Scalar::fraction(1, 2), std::move(outcomes))));
  }
  if (terms.empty()) throw ValidationError("PR extension of a zero ket");
  if (terms.size() == 1) return std::move(terms.front());
  return StateExpr::coherent(std::move(terms));
}

HybridState pr_extend(const HybridState& input,
                      const PrExtendOptions& options) {
  if (input.width() != 2) throw DimensionError("PR extension needs 2 qubits");
  Branches out;
  bool extrapolated = false;
  for (const auto& [weight, ket] : input.branches()) {
    const auto idx = support(ket);
    if (idx.empty() || weight == 0.0) continue;

    bool alice_varies = false, bob_varies = false;
    for (Eigen::Index i : idx) {
      alice_varies = alice_varies || ((i >> 1) != (idx.front() >> 1));
      bob_varies = bob_varies || ((i & 1) != (idx.front() & 1));
    }
    extrapolated = extrapolated || (alice_varies && bob_varies);

    if (options.pairing == Pairing::kIndependent) {
      const HybridState part =
          distribute(pr_extension_expr(ket), std::nullopt,
                     {options.max_branches});
      for (const auto& b : part.branches())
        out.push_back({weight * b.weight, b.ket});
    } else {
      for (int slot = 0; slot < 2; ++slot) {
        CVector<double> v = CVector<double>::Zero(4);
        for (Eigen::Index i : idx) {
          const auto label = pr_output_label(slot, static_cast<int>(i >> 1),
                                             static_cast<int>(i & 1));
          v(std::stoi(label, nullptr, 2)) += 0.5 * ket[i];
        }
        out.push_back({0.5 * weight, Ket(std::move(v))});
      }
    }
    enforce_limit(out.size(), options.max_branches);
  }
  if (out.empty()) throw ValidationError("PR extension of an empty state");
  HybridState result(2, std::move(out));
  if (extrapolated) result.mark_extrapolated();
  return result;
}

DensityOperator pr_output_state(double theta, const PrExtendOptions& options) {
  const Ket input =
      tensor(rotation(theta), Unitary::identity(2)) * Ket::from_label("01");
  return pr_extend(HybridState::pure(input), options).density();
}

DensityOperator bob_state(double theta, const PrExtendOptions& options) {
  return partial_trace(pr_output_state(theta, options), 1, {2, 2});
}

DensityOperator alice_state(double theta, const PrExtendOptions& options) {
  return partial_trace(pr_output_state(theta, options), 0, {2, 2});
}

SignalingReport signaling_witness(double theta,
                                  const PrExtendOptions& options) {
  const auto rho0 = bob_state(0.0, options);
  const auto rho1 = bob_state(theta, options);
  SignalingReport report;
  report.theta = theta;
  report.a_to_b_violation = trace_distance(rho1, rho0);
  auto h = helstrom(rho0, rho1, 0.5);
  report.helstrom_success = h.success_probability;
  report.witness_basis = std::move(h.basis);
  if (report.a_to_b_violation > 1e-15) {
    const auto pm = plus_minus_basis();
    const auto& first = report.witness_basis.front().amplitudes();
    for (const auto& ref : pm) {
      if (std::abs(ref.amplitudes().dot(first)) > 1.0 - 1e-9)
        report.plus_minus_witness = true;
    }
  }
  return report;
}

void write_hybrid(std::ostream& out, const HybridState& state) {
  for (const auto& [weight, ket] : state.branches()) {
    out << format_double(weight) << ';';
    for (Eigen::Index i = 0; i < ket.dim(); ++i) {
      out << ' ' << format_double(ket[i].real()) << ' '
          << format_double(ket[i].imag());
    }
    out << '\n';
  }
}

HybridState read_hybrid(std::istream& in) {
  Branches branches;
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto semi = line.find(';');
    if (semi == std::string::npos) {
      throw ValidationError("hybrid line missing ';'");
    }
    double weight = 0.0;
    std::vector<double> numbers;
    try {
      weight = parse_double(std::string_view(line).substr(0, semi));
      std::istringstream amps(line.substr(semi + 1));
      std::string token;
      while (amps >> token) numbers.push_back(parse_double(token));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("hybrid line: ") + e.what());
    }
    if (numbers.empty() || numbers.size() % 2 != 0) {
      throw ValidationError("hybrid line needs re/im amplitude pairs");
    }
    CVector<double> v(static_cast<Eigen::Index>(numbers.size() / 2));
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v(i) = {numbers[2 * i], numbers[2 * i + 1]};
    Ket ket(std::move(v));
    const std::size_t w = qubit_count(ket.dim());
    if (width != 0 && w != width) throw DimensionError("branch widths differ");
    width = w;
    branches.push_back({weight, std::move(ket)});
  }
  if (branches.empty()) throw ValidationError("hybrid state has no branches");
  return HybridState(width, std::move(branches));
}

}  // namespace nlbox
