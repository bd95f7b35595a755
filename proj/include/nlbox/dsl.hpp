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

// Text notation for state expressions.
//
//   expr    := term ( "(+)" term )*        "(+)" or "⊙": incoherent sum
//   term    := factor ( "+" factor )*      coherent sum, binds tighter
//   factor  := [ scalar [ "*" ] ] primary
//   primary := ket | "(" expr ")"
//   ket     := "|" [01]+ ">"
//   scalar  := number | int "/" int | "sqrt(" number ")"
//            | "1/sqrt(" number ")" | "c" | "s"

#ifndef NLBOX_DSL_HPP_
#define NLBOX_DSL_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nlbox/expr.hpp"

namespace nlbox::dsl {

struct Token {
  enum class Kind {
    kKet,
    kScalar,
    kSymbolC,
    kSymbolS,
    kPlus,
    kOdot,
    kLParen,
    kRParen,
    kStar,
  };
  Kind kind;
  std::string lexeme;
  std::size_t offset;
};

// Throws ParseError on characters outside the notation.
std::vector<Token> tokenize(std::string_view text);

// Throws ParseError (with the byte offset of the offending token) for
// syntax errors, bad ket labels and mismatched register widths.
StateExpr parse(std::string_view text);

// Canonical text: numeric scalars are followed by a space, c and s abut
// their operand, sums nested in a sum of the same kind keep their parens.
// Throws DomainError for scalars with no text form (negative or complex).
std::string format(const StateExpr& expr);

}  // namespace nlbox::dsl

#endif  // NLBOX_DSL_HPP_
