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

// Expression trees over basis kets with coherent (+) and incoherent (⊙)
// sums.

#ifndef NLBOX_EXPR_HPP_
#define NLBOX_EXPR_HPP_

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nlbox {

// A left-multiplying scalar. Literal forms keep their written shape so that
// formatting reproduces them; `c` and `s` stay symbolic until an angle binds
// them to cos(theta) and sin(theta).
struct Scalar {
  enum class Kind {
    kNumber,       // 0.5
    kFraction,     // 1/2
    kSqrt,         // sqrt(2)
    kInverseSqrt,  // 1/sqrt(2)
    kCos,          // c
    kSin,          // s
    kComplex,      // programmatic only; no text form unless real
  };

  Kind kind = Kind::kNumber;
  double value = 1.0;  // number, sqrt argument, or real part
  double imag = 0.0;   // kComplex only
  long long numerator = 1;
  long long denominator = 1;

  static Scalar number(double v) { return {Kind::kNumber, v}; }
  static Scalar fraction(long long num, long long den) {
    return {Kind::kFraction, 0.0, 0.0, num, den};
  }
  static Scalar sqrt_of(double v) { return {Kind::kSqrt, v}; }
  static Scalar inverse_sqrt_of(double v) { return {Kind::kInverseSqrt, v}; }
  static Scalar cos_theta() { return {Kind::kCos}; }
  static Scalar sin_theta() { return {Kind::kSin}; }
  static Scalar complex(std::complex<double> z) {
    return {Kind::kComplex, z.real(), z.imag()};
  }

  bool symbolic() const { return kind == Kind::kCos || kind == Kind::kSin; }

  // Throws DomainError for a symbolic scalar without an angle, or a zero
  // denominator.
  std::complex<double> evaluate(std::optional<double> theta) const;

  friend bool operator==(const Scalar&, const Scalar&) = default;
};

class StateExpr {
 public:
  enum class Kind { kKet, kScaled, kCoherentSum, kIncoherentSum };

  static StateExpr ket(std::string label, std::size_t offset = 0);
  static StateExpr scaled(Scalar scalar, StateExpr child,
                          std::size_t offset = 0);
  static StateExpr coherent(std::vector<StateExpr> terms,
                            std::size_t offset = 0);
  static StateExpr incoherent(std::vector<StateExpr> terms,
                              std::size_t offset = 0);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const Scalar& scalar() const { return scalar_; }
  const std::vector<StateExpr>& children() const { return children_; }
  const StateExpr& child() const { return children_.front(); }
  // Byte offset of the node in the text it was parsed from (0 otherwise).
  std::size_t offset() const { return offset_; }

  // Structural equality; source offsets are ignored.
  friend bool operator==(const StateExpr& x, const StateExpr& y);

 private:
  StateExpr() = default;

  Kind kind_ = Kind::kKet;
  std::string label_;
  Scalar scalar_;
  std::vector<StateExpr> children_;
  std::size_t offset_ = 0;
};

// Result of checking that every ket label has the same length.
struct WidthCheck {
  std::size_t width = 0;
  // First ket whose label length differs from the first ket's; null if none.
  const StateExpr* mismatch = nullptr;
};

WidthCheck check_width(const StateExpr& expr);

}  // namespace nlbox

#endif  // NLBOX_EXPR_HPP_
