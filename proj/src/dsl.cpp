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

#include "nlbox/dsl.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <system_error>

#include "nlbox/errors.hpp"
#include "nlbox/io.hpp"

namespace nlbox::dsl {
namespace {

constexpr std::string_view kOdotUtf8 = "\xE2\x8A\x99";

bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ >= text_.size()) return tokens;
      tokens.push_back(next());
    }
  }

 private:
  Token make(Token::Kind kind, std::size_t start) {
    return {kind, std::string(text_.substr(start, pos_ - start)), start};
  }

  bool starts_with(std::string_view s) const {
    return text_.substr(pos_).starts_with(s);
  }

  Token next() {
    const std::size_t start = pos_;
    const char ch = text_[pos_];
    if (starts_with("(+)")) {
      pos_ += 3;
      return make(Token::Kind::kOdot, start);
    }
    if (starts_with(kOdotUtf8)) {
      pos_ += kOdotUtf8.size();
      return make(Token::Kind::kOdot, start);
    }
    switch (ch) {
      case '|':
        return ket();
      case '(':
        ++pos_;
        return make(Token::Kind::kLParen, start);
      case ')':
        ++pos_;
        return make(Token::Kind::kRParen, start);
      case '+':
        ++pos_;
        return make(Token::Kind::kPlus, start);
      case '*':
        ++pos_;
        return make(Token::Kind::kStar, start);
      case 'c':
        ++pos_;
        return make(Token::Kind::kSymbolC, start);
      default:
        break;
    }
    if (starts_with("sqrt(")) {
      pos_ += 5;
      number("sqrt argument");
      expect(')', "expected ')' closing sqrt(");
      return make(Token::Kind::kScalar, start);
    }
    if (ch == 's') {
      ++pos_;
      return make(Token::Kind::kSymbolS, start);
    }
    if (is_digit(ch) || ch == '.') return numeric_scalar();
    throw ParseError(std::string("unexpected character '") + ch + "'", start);
  }

  Token ket() {
    const std::size_t start = pos_++;
    const std::size_t bits = pos_;
    while (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1'))
      ++pos_;
    if (pos_ == bits) {
      throw ParseError("ket label must be a non-empty bit string", pos_ < text_.size() ? pos_ : start);
    }
    if (pos_ >= text_.size()) throw ParseError("unterminated ket", start);
    if (text_[pos_] != '>') {
      throw ParseError("bad ket label character", pos_);
    }
    ++pos_;
    return make(Token::Kind::kKet, start);
  }

  Token numeric_scalar() {
    const std::size_t start = pos_;
    const bool integral = number("number");
    if (pos_ < text_.size() && text_[pos_] == '/') {
      const std::size_t numerator_end = pos_;
      ++pos_;
      if (starts_with("sqrt(")) {
        if (text_.substr(start, numerator_end - start) != "1") {
          throw ParseError("only 1/sqrt(...) is supported", start);
        }
        pos_ += 5;
        number("sqrt argument");
        expect(')', "expected ')' closing sqrt(");
      } else {
        if (!integral) throw ParseError("fraction numerator must be an integer", start);
        const std::size_t den = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        if (pos_ == den) throw ParseError("expected fraction denominator", den);
      }
    }
    return make(Token::Kind::kScalar, start);
  }

  // Reads digits [. digits] [e [+-] digits]; returns true for a bare integer.
  bool number(const char* what) {
    const std::size_t start = pos_;
    bool integral = true;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      integral = false;
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
      throw ParseError(std::string("expected ") + what, start);
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      integral = false;
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      const std::size_t exp_digits = p;
      while (p < text_.size() && is_digit(text_[p])) ++p;
      if (p == exp_digits) throw ParseError("malformed exponent", pos_);
      pos_ = p;
    }
    return integral;
  }

  void expect(char ch, const char* message) {
    if (pos_ >= text_.size() || text_[pos_] != ch) {
      throw ParseError(message, pos_ < text_.size() ? pos_ : text_.size());
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double lexeme_number(std::string_view text, std::size_t offset) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ParseError("bad number", offset);
  }
}

Scalar scalar_from_token(const Token& tok) {
  std::string_view lex = tok.lexeme;
  if (tok.kind == Token::Kind::kSymbolC) return Scalar::cos_theta();
  if (tok.kind == Token::Kind::kSymbolS) return Scalar::sin_theta();
  auto inner = [&](std::size_t prefix) {
    return lexeme_number(lex.substr(prefix, lex.size() - prefix - 1),
                         tok.offset + prefix);
  };
  if (lex.starts_with("sqrt(")) return Scalar::sqrt_of(inner(5));
  if (lex.starts_with("1/sqrt(")) return Scalar::inverse_sqrt_of(inner(7));
  const auto slash = lex.find('/');
  if (slash != std::string_view::npos) {
    long long num = 0, den = 0;
    try {
      num = parse_integer(lex.substr(0, slash));
      den = parse_integer(lex.substr(slash + 1));
    } catch (const std::invalid_argument&) {
      throw ParseError("fraction out of range", tok.offset);
    }
    if (den == 0) throw ParseError("zero denominator", tok.offset + slash + 1);
    return Scalar::fraction(num, den);
  }
  return Scalar::number(lexeme_number(lex, tok.offset));
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t end)
      : tokens_(std::move(tokens)), end_(end) {}

  StateExpr run() {
    if (tokens_.empty()) throw ParseError("empty expression", 0);
    StateExpr e = expr();
    if (pos_ < tokens_.size()) {
      throw ParseError("unexpected '" + tokens_[pos_].lexeme + "'",
                       tokens_[pos_].offset);
    }
    return e;
  }

 private:
  const Token* peek() const {
    return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr;
  }
  bool at(Token::Kind kind) const { return peek() && peek()->kind == kind; }
  std::size_t here() const { return peek() ? peek()->offset : end_; }

  StateExpr expr() {
    const std::size_t start = here();
    std::vector<StateExpr> terms;
    terms.push_back(term());
    while (at(Token::Kind::kOdot)) {
      ++pos_;
      terms.push_back(term());
    }
    if (terms.size() == 1) return std::move(terms.front());
    return StateExpr::incoherent(std::move(terms), start);
  }

  StateExpr term() {
    const std::size_t start = here();
    std::vector<StateExpr> factors;
    factors.push_back(factor());
    while (at(Token::Kind::kPlus)) {
      ++pos_;
      factors.push_back(factor());
    }
    if (factors.size() == 1) return std::move(factors.front());
    return StateExpr::coherent(std::move(factors), start);
  }

  StateExpr factor() {
    if (at(Token::Kind::kScalar) || at(Token::Kind::kSymbolC) ||
        at(Token::Kind::kSymbolS)) {
      const Token& tok = tokens_[pos_++];
      const Scalar scalar = scalar_from_token(tok);
      if (at(Token::Kind::kStar)) ++pos_;
      if (!at(Token::Kind::kKet) && !at(Token::Kind::kLParen)) {
        throw ParseError("scalar '" + tok.lexeme +
                             "' must multiply a ket or a parenthesized "
                             "expression",
                         here());
      }
      return StateExpr::scaled(scalar, primary(), tok.offset);
    }
    return primary();
  }

  StateExpr primary() {
    const Token* tok = peek();
    if (!tok) throw ParseError("unexpected end of expression", end_);
    if (tok->kind == Token::Kind::kKet) {
      ++pos_;
      return StateExpr::ket(tok->lexeme.substr(1, tok->lexeme.size() - 2),
                            tok->offset);
    }
    if (tok->kind == Token::Kind::kLParen) {
      const std::size_t open = tok->offset;
      ++pos_;
      StateExpr inner = expr();
      if (!at(Token::Kind::kRParen)) {
        throw ParseError("unbalanced '('", open);
      }
      ++pos_;
      return inner;
    }
    throw ParseError("expected a ket or '(' but found '" + tok->lexeme + "'",
                     tok->offset);
  }

  std::vector<Token> tokens_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError("scalar " + format_double(v) + " has no text form");
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_scalar(const Scalar& s) {
  switch (s.kind) {
    case Scalar::Kind::kNumber:
      return format_number(s.value);
    case Scalar::Kind::kFraction:
      if (s.numerator < 0 || s.denominator <= 0) {
        throw DomainError("fraction has no text form");
      }
      return std::to_string(s.numerator) + "/" +
             std::to_string(s.denominator);
    case Scalar::Kind::kSqrt:
      return "sqrt(" + format_number(s.value) + ")";
    case Scalar::Kind::kInverseSqrt:
      return "1/sqrt(" + format_number(s.value) + ")";
    case Scalar::Kind::kCos:
      return "c";
    case Scalar::Kind::kSin:
      return "s";
    case Scalar::Kind::kComplex:
      if (s.imag != 0.0) throw DomainError("complex scalar has no text form");
      return format_number(s.value);
  }
  return {};
}

bool is_sum(const StateExpr& e) {
  return e.kind() == StateExpr::Kind::kCoherentSum ||
         e.kind() == StateExpr::Kind::kIncoherentSum;
}

void emit(const StateExpr& e, std::string& out);

void emit_wrapped(const StateExpr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  emit(e, out);
  if (parens) out += ')';
}

void emit(const StateExpr& e, std::string& out) {
  switch (e.kind()) {
    case StateExpr::Kind::kKet:
      out += '|';
      out += e.label();
      out += '>';
      return;
    case StateExpr::Kind::kScaled: {
      out += format_scalar(e.scalar());
      if (!e.scalar().symbolic()) out += ' ';
      const auto& child = e.child();
      emit_wrapped(child,
                   is_sum(child) || child.kind() == StateExpr::Kind::kScaled,
                   out);
      return;
    }
    case StateExpr::Kind::kCoherentSum:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += " + ";
        emit_wrapped(e.children()[i], is_sum(e.children()[i]), out);
      }
      return;
    case StateExpr::Kind::kIncoherentSum:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += " (+) ";
        const auto& c = e.children()[i];
        emit_wrapped(c, c.kind() == StateExpr::Kind::kIncoherentSum, out);
      }
      return;
  }
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  return Lexer(text).run();
}

StateExpr parse(std::string_view text) {
  StateExpr e = Parser(tokenize(text), text.size()).run();
  const WidthCheck check = check_width(e);
  if (check.mismatch) {
    throw ParseError("ket |" + check.mismatch->label() +
                         "> does not match register width " +
                         std::to_string(check.width),
                     check.mismatch->offset());
  }
  return e;
}

std::string format(const StateExpr& expr) {
  std::string out;
  emit(expr, out);
  return out;
}

}  // namespace nlbox::dsl
