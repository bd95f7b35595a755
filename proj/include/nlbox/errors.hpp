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

#ifndef NLBOX_ERRORS_HPP_
#define NLBOX_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlbox {

// A value violates the invariants of its type (normalization, positivity,
// Hermiticity, orthonormality).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands have incompatible shapes or alphabet sizes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Scalar arguments outside the domain of an operation (non-finite angle,
// prior outside [0,1], zero rounds).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed DSL text. `offset()` is the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace nlbox

#endif  // NLBOX_ERRORS_HPP_
