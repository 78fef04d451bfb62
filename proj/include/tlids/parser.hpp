/*
 * Copyright (c) 2026, the tlids authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlids/formula.hpp"
#include "tlids/validate.hpp"

namespace tlids {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error("syntax error at position " + std::to_string(pos) + ": " + msg),
        position(pos) {}
  std::size_t position;
};

namespace detail {

enum class Tok {
  End, Ident, Number, String,
  Not, And, Or, Parallel, Arrow, Semi, Star,
  NextOp, UntilOp, Eventually, Globally,
  LParen, RParen, LBracket, RBracket, Colon, Comma, Assign,
  Lt, Le, Gt, Ge, Eq, Ne,
  KwTrue, KwFalse, KwSkip, KwForall, KwIn, KwHere, KwObs, KwLet, KwTf,
};

struct Token {
  Tok type = Tok::End;
  std::string text;
  double num = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  static bool head_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool body_char(char c) { return head_char(c) || (c >= '0' && c <= '9'); }

  void advance() {
    while (i_ < src_.size() && (src_[i_] == ' ' || src_[i_] == '\t' || src_[i_] == '\n' ||
                                src_[i_] == '\r'))
      ++i_;
    cur_ = Token{};
    cur_.pos = i_;
    if (i_ >= src_.size()) return;
    const char c = src_[i_];
    auto two = [&](Tok t) { cur_.type = t; i_ += 2; };
    auto one = [&](Tok t) { cur_.type = t; i_ += 1; };
    switch (c) {
      case '(': one(Tok::LParen); return;
      case ')': one(Tok::RParen); return;
      case ']': one(Tok::RBracket); return;
      case ',': one(Tok::Comma); return;
      case ';': one(Tok::Semi); return;
      case '*': one(Tok::Star); return;
      case '=': one(Tok::Eq); return;
      case '&': one(Tok::And); return;
      case '"': lex_string(); return;
      case '|': next_is('|') ? two(Tok::Parallel) : one(Tok::Or); return;
      case '!': next_is('=') ? two(Tok::Ne) : one(Tok::Not); return;
      case '<':
        if (next_is('>')) two(Tok::Eventually);
        else if (next_is('=')) two(Tok::Le);
        else one(Tok::Lt);
        return;
      case '>': next_is('=') ? two(Tok::Ge) : one(Tok::Gt); return;
      case '[': next_is(']') ? two(Tok::Globally) : one(Tok::LBracket); return;
      case ':': next_is('=') ? two(Tok::Assign) : one(Tok::Colon); return;
      case '-':
        if (next_is('>')) { two(Tok::Arrow); return; }
        if (i_ + 1 < src_.size() && is_digit(src_[i_ + 1])) { lex_number(); return; }
        throw ParseError("stray '-'", i_);
      default: break;
    }
    if (is_digit(c)) { lex_number(); return; }
    if (head_char(c)) { lex_ident(); return; }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  bool next_is(char c) const { return i_ + 1 < src_.size() && src_[i_ + 1] == c; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void lex_number() {
    std::size_t start = i_;
    if (src_[i_] == '-') ++i_;
    while (i_ < src_.size() && (is_digit(src_[i_]) || src_[i_] == '.')) ++i_;
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      ++i_;
      if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
      while (i_ < src_.size() && is_digit(src_[i_])) ++i_;
    }
    cur_.type = Tok::Number;
    cur_.text = std::string(src_.substr(start, i_ - start));
    char* end = nullptr;
    cur_.num = std::strtod(cur_.text.c_str(), &end);
    if (end != cur_.text.c_str() + cur_.text.size())
      throw ParseError("malformed number '" + cur_.text + "'", start);
  }

  void lex_string() {
    std::size_t start = i_++;
    std::string out;
    while (i_ < src_.size() && src_[i_] != '"') {
      if (src_[i_] == '\n') throw ParseError("unterminated string", start);
      out.push_back(src_[i_++]);
    }
    if (i_ >= src_.size()) throw ParseError("unterminated string", start);
    ++i_;
    cur_.type = Tok::String;
    cur_.text = std::move(out);
  }

  void lex_ident() {
    std::size_t start = i_;
    ++i_;
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (body_char(c)) { ++i_; continue; }
      // '.' and '-' continue an identifier only when followed by more of it,
      // so "accept-encoding" lexes whole while "a ->b" and "m.size" both work.
      if ((c == '.' || c == '-') && i_ + 1 < src_.size() && body_char(src_[i_ + 1])) {
        i_ += 2;
        continue;
      }
      break;
    }
    cur_.text = std::string(src_.substr(start, i_ - start));
    if (cur_.text == "true") cur_.type = Tok::KwTrue;
    else if (cur_.text == "false") cur_.type = Tok::KwFalse;
    else if (cur_.text == "skip") cur_.type = Tok::KwSkip;
    else if (cur_.text == "forall") cur_.type = Tok::KwForall;
    else if (cur_.text == "in") cur_.type = Tok::KwIn;
    else if (cur_.text == "here") cur_.type = Tok::KwHere;
    else if (cur_.text == "obs") cur_.type = Tok::KwObs;
    else if (cur_.text == "let") cur_.type = Tok::KwLet;
    else if (cur_.text == "Tf") cur_.type = Tok::KwTf;
    else if (cur_.text == "X") cur_.type = Tok::NextOp;
    else if (cur_.text == "U") cur_.type = Tok::UntilOp;
    else cur_.type = Tok::Ident;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Token cur_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Formula parse() {
    Formula f = parse_implies();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, lex_.peek().pos); }

  Token expect(Tok t, const char* what) {
    if (lex_.peek().type != t) fail(std::string("expected ") + what);
    return lex_.take();
  }

  bool accept(Tok t) {
    if (lex_.peek().type != t) return false;
    lex_.take();
    return true;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Tok::Arrow)) return f_implies(std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_parallel();
    while (accept(Tok::Or)) lhs = f_or(std::move(lhs), parse_parallel());
    return lhs;
  }

  Formula parse_parallel() {
    Formula lhs = parse_chop();
    while (accept(Tok::Parallel)) lhs = f_parallel(std::move(lhs), parse_chop());
    return lhs;
  }

  // Chop chains associate to the right so a timed constraint binds the
  // chunk immediately to its left.
  Formula parse_chop() {
    Formula lhs = parse_and();
    if (lex_.peek().type != Tok::Semi) return lhs;
    lex_.take();
    if (accept(Tok::LBracket)) {
      std::vector<TimeBound> bounds = parse_time_bounds();
      expect(Tok::RBracket, "']'");
      return f_timed_chop(std::move(lhs), std::move(bounds), parse_chop());
    }
    return f_chop(std::move(lhs), parse_chop());
  }

  std::vector<TimeBound> parse_time_bounds() {
    std::vector<TimeBound> bounds;
    do {
      Token v = expect(Tok::Ident, "'x'");
      if (v.text != "x") fail("timed-chop constraints are written over 'x'");
      CmpOp op = parse_relop(/*with_eq=*/false);
      Token n = expect(Tok::Number, "number");
      if (n.num < 0.0) fail("elapsed-time bounds must be non-negative");
      bounds.push_back(TimeBound{op, n.num});
    } while (accept(Tok::And));
    return bounds;
  }

  Formula parse_and() {
    Formula lhs = parse_until();
    while (accept(Tok::And)) lhs = f_and(std::move(lhs), parse_until());
    return lhs;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (accept(Tok::UntilOp)) return f_until(std::move(lhs), parse_until());
    return lhs;
  }

  Formula parse_unary() {
    switch (lex_.peek().type) {
      case Tok::Not: lex_.take(); return f_not(parse_unary());
      case Tok::NextOp: lex_.take(); return f_next(parse_unary());
      case Tok::Eventually: lex_.take(); return f_eventually(parse_unary());
      case Tok::Globally: lex_.take(); return f_globally(parse_unary());
      case Tok::KwForall: return parse_forall();
      case Tok::KwLet: return parse_let();
      default: return parse_postfix();
    }
  }

  Formula parse_forall() {
    lex_.take();
    Token var = expect(Tok::Ident, "variable name");
    check_fresh(var.text);
    expect(Tok::KwIn, "'in'");
    DomainSel sel;
    if (accept(Tok::KwHere)) sel.kind = DomainSel::Kind::Here;
    else if (accept(Tok::KwObs)) sel.kind = DomainSel::Kind::Obs;
    else fail("expected 'here' or 'obs'");
    expect(Tok::LParen, "'('");
    sel.attr = expect(Tok::Ident, "attribute name").text;
    if (accept(Tok::Comma)) {
      if (sel.kind == DomainSel::Kind::Here) fail("here() takes no range");
      Token lo = expect(Tok::Number, "range low bound");
      expect(Tok::Comma, "','");
      Token hi = expect(Tok::Number, "range high bound");
      if (lo.num > hi.num) fail("empty range");
      sel.lo = lo.num;
      sel.hi = hi.num;
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Colon, "':'");
    bound_.push_back(var.text);
    Formula body = parse_implies();
    bound_.pop_back();
    return f_forall(var.text, std::move(sel), std::move(body));
  }

  Formula parse_let() {
    lex_.take();
    Token var = expect(Tok::Ident, "variable name");
    check_fresh(var.text);
    expect(Tok::Assign, "':='");
    Token attr = expect(Tok::Ident, "attribute name");
    expect(Tok::KwIn, "'in'");
    bound_.push_back(var.text);
    Formula body = parse_implies();
    bound_.pop_back();
    return f_let(var.text, attr.text, std::move(body));
  }

  Formula parse_postfix() {
    Formula f = parse_primary();
    while (accept(Tok::Star)) f = f_chop_star(std::move(f));
    return f;
  }

  bool at_relop() const {
    switch (lex_.peek().type) {
      case Tok::Lt: case Tok::Le: case Tok::Gt: case Tok::Ge:
      case Tok::Eq: case Tok::Ne:
        return true;
      default: return false;
    }
  }

  CmpOp parse_relop(bool with_eq) {
    Token t = lex_.take();
    switch (t.type) {
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Gt: return CmpOp::Gt;
      case Tok::Ge: return CmpOp::Ge;
      case Tok::Eq: if (with_eq) return CmpOp::Eq; break;
      case Tok::Ne: if (with_eq) return CmpOp::Ne; break;
      default: break;
    }
    throw ParseError("expected comparison operator", t.pos);
  }

  Formula parse_primary() {
    const Token& t = lex_.peek();
    switch (t.type) {
      case Tok::KwTrue: lex_.take(); return f_true();
      case Tok::KwFalse: lex_.take(); return f_false();
      case Tok::KwSkip: lex_.take(); return f_skip();
      case Tok::LParen: {
        lex_.take();
        Formula f = parse_implies();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::KwTf: {
        lex_.take();
        CmpOp op = parse_relop(/*with_eq=*/false);
        Token n = expect(Tok::Number, "number");
        if (n.num < 0.0) fail("elapsed-time bounds must be non-negative");
        return f_elapsed(op, n.num);
      }
      case Tok::Ident: {
        Token id = lex_.take();
        if (!at_relop()) return f_atom(id.text);
        CmpOp op = parse_relop(/*with_eq=*/true);
        const Token& rhs = lex_.peek();
        if (rhs.type == Tok::Number) {
          Token n = lex_.take();
          return f_attr_cmp(id.text, op, n.num);
        }
        if (rhs.type == Tok::String) {
          if (op != CmpOp::Eq && op != CmpOp::Ne)
            fail("string constants admit only = and !=");
          Token s = lex_.take();
          return f_attr_cmp_str(id.text, op, s.text);
        }
        if (rhs.type == Tok::Ident) {
          Token v = lex_.take();
          if (!is_bound(v.text))
            throw ParseError("unbound variable '" + v.text + "'", v.pos);
          return f_attr_cmp_var(id.text, op, v.text);
        }
        fail("expected number, string or bound variable");
      }
      default: break;
    }
    fail("expected a formula");
  }

  bool is_bound(const std::string& name) const {
    for (const auto& b : bound_)
      if (b == name) return true;
    return false;
  }

  void check_fresh(const std::string& name) {
    if (is_bound(name)) fail("binder '" + name + "' shadows an enclosing binder");
  }

  Lexer lex_;
  std::vector<std::string> bound_;
};

}  // namespace detail

/// Parse a DSL formula without any logic-membership check.
inline Formula parse_formula_any(std::string_view text) {
  return detail::Parser(text).parse();
}

/// Parse a DSL formula and require every connective to be legal at `logic`.
/// Throws ParseError on syntax errors and FormulaError on membership
/// violations ("chop not in LTL").
inline Formula parse_formula(std::string_view text, Logic logic) {
  Formula f = parse_formula_any(text);
  auto violations = validate_for_logic(f, logic);
  if (!violations.empty()) throw FormulaError(violations.front().message());
  return f;
}

}  // namespace tlids
