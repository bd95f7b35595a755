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

#include "nlbox/expr.hpp"

#include <cmath>

#include "nlbox/errors.hpp"

namespace nlbox {

std::complex<double> Scalar::evaluate(std::optional<double> theta) const {
  switch (kind) {
    case Kind::kNumber:
      return value;
    case Kind::kFraction:
      if (denominator == 0) throw DomainError("fraction with zero denominator");
      return static_cast<double>(numerator) / static_cast<double>(denominator);
    case Kind::kSqrt:
      if (value < 0) throw DomainError("sqrt of a negative number");
      return std::sqrt(value);
    case Kind::kInverseSqrt:
      if (!(value > 0)) throw DomainError("1/sqrt of a non-positive number");
      return 1.0 / std::sqrt(value);
    case Kind::kCos:
    case Kind::kSin:
      if (!theta) {
        throw DomainError(std::string("symbol '") +
                          (kind == Kind::kCos ? "c" : "s") +
                          "' needs an angle");
      }
      return kind == Kind::kCos ? std::cos(*theta) : std::sin(*theta);
    case Kind::kComplex:
      return {value, imag};
  }
  return value;
}

StateExpr StateExpr::ket(std::string label, std::size_t offset) {
  if (label.empty()) throw ValidationError("empty ket label");
  for (char ch : label) {
    if (ch != '0' && ch != '1') throw ValidationError("ket label bit");
  }
  StateExpr e;
  e.kind_ = Kind::kKet;
  e.label_ = std::move(label);
  e.offset_ = offset;
  return e;
}

StateExpr StateExpr::scaled(Scalar scalar, StateExpr child,
                            std::size_t offset) {
  StateExpr e;
  e.kind_ = Kind::kScaled;
  e.scalar_ = scalar;
  e.children_.push_back(std::move(child));
  e.offset_ = offset;
  return e;
}

StateExpr StateExpr::coherent(std::vector<StateExpr> terms,
                              std::size_t offset) {
  if (terms.empty()) throw ValidationError("empty coherent sum");
  StateExpr e;
  e.kind_ = Kind::kCoherentSum;
  e.children_ = std::move(terms);
  e.offset_ = offset;
  return e;
}

StateExpr StateExpr::incoherent(std::vector<StateExpr> terms,
                                std::size_t offset) {
  if (terms.empty()) throw ValidationError("empty incoherent sum");
  StateExpr e;
  e.kind_ = Kind::kIncoherentSum;
  e.children_ = std::move(terms);
  e.offset_ = offset;
  return e;
}

bool operator==(const StateExpr& x, const StateExpr& y) {
  return x.kind_ == y.kind_ && x.label_ == y.label_ &&
         (x.kind_ != StateExpr::Kind::kScaled || x.scalar_ == y.scalar_) &&
         x.children_ == y.children_;
}

namespace {

void visit_width(const StateExpr& e, WidthCheck& check) {
  if (check.mismatch) return;
  if (e.kind() == StateExpr::Kind::kKet) {
    if (check.width == 0) {
      check.width = e.label().size();
    } else if (e.label().size() != check.width) {
      check.mismatch = &e;
    }
    return;
  }
  for (const auto& c : e.children()) visit_width(c, check);
}

}  // namespace

WidthCheck check_width(const StateExpr& expr) {
  WidthCheck check;
  visit_width(expr, check);
  return check;
}

}  // namespace nlbox
