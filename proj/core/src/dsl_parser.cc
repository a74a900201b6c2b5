// Copyright 2026 The semprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semprobe/dsl_parser.h"

#include <cctype>
#include <optional>
#include <string>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

enum class Tok {
  kIdent,
  kNumber,
  kString,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kComma,
  kSemi,
  kColon,
  kArrow,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kEnd
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  size_t column = 0;  // 1-based
};

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  absl::StatusOr<std::vector<Token>> Run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (pos_ >= text_.size() || text_[pos_] == '#') {
        out.push_back(Token{Tok::kEnd, "", pos_ + 1});
        return out;
      }
      absl::StatusOr<Token> t = Next();
      if (!t.ok()) return t.status();
      out.push_back(*std::move(t));
    }
  }

 private:
  absl::Status Error(size_t at, std::string_view what) const {
    return absl::InvalidArgumentError(
        absl::StrCat("col ", at + 1, ": ", std::string(what)));
  }

  absl::StatusOr<Token> Next() {
    const size_t start = pos_;
    const char c = text_[pos_];
    if (IsIdentStart(c)) {
      // '-' joins an identifier only when a letter follows, so "a-b" is one
      // name while "a - 1" and "a-1" are subtractions. Subscripts such as
      // [0] and [*] are kept inside the name.
      while (pos_ < text_.size()) {
        const char d = text_[pos_];
        if (IsIdentChar(d)) {
          ++pos_;
        } else if (d == '-' && pos_ + 1 < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[pos_ + 1]))) {
          ++pos_;
        } else if (d == '[') {
          size_t close = text_.find(']', pos_);
          if (close == std::string_view::npos) {
            return Error(pos_, "unterminated subscript");
          }
          pos_ = close + 1;
        } else {
          break;
        }
      }
      return Token{Tok::kIdent, std::string(text_.substr(start, pos_ - start)),
                   start + 1};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      return Token{Tok::kNumber, std::string(text_.substr(start, pos_ - start)),
                   start + 1};
    }
    if (c == '\'' || c == '"' || c == '`') {
      // `label' is accepted alongside 'label' and "label".
      const char close = c == '"' ? '"' : '\'';
      size_t end = text_.find(close, pos_ + 1);
      if (end == std::string_view::npos) {
        return Error(start, "unterminated string literal");
      }
      pos_ = end + 1;
      return Token{Tok::kString,
                   std::string(text_.substr(start + 1, end - start - 1)),
                   start + 1};
    }
    ++pos_;
    switch (c) {
      case '(':
        return Token{Tok::kLParen, "(", start + 1};
      case ')':
        return Token{Tok::kRParen, ")", start + 1};
      case '{':
        return Token{Tok::kLBrace, "{", start + 1};
      case '}':
        return Token{Tok::kRBrace, "}", start + 1};
      case ',':
        return Token{Tok::kComma, ",", start + 1};
      case ';':
        return Token{Tok::kSemi, ";", start + 1};
      case ':':
        return Token{Tok::kColon, ":", start + 1};
      case '+':
        return Token{Tok::kPlus, "+", start + 1};
      case '*':
        return Token{Tok::kStar, "*", start + 1};
      case '/':
        return Token{Tok::kSlash, "/", start + 1};
      case '-':
        if (pos_ < text_.size() && text_[pos_] == '>') {
          ++pos_;
          return Token{Tok::kArrow, "->", start + 1};
        }
        return Token{Tok::kMinus, "-", start + 1};
      default:
        return Error(start, absl::StrCat("unexpected character '",
                                         std::string(1, c), "'"));
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
};

bool IsRelKeyword(const std::string& s) {
  return s == "LT" || s == "LE" || s == "GE" || s == "GT";
}

RelOp RelFromKeyword(const std::string& s) {
  if (s == "LT") return RelOp::kLt;
  if (s == "LE") return RelOp::kLe;
  if (s == "GE") return RelOp::kGe;
  if (s == "GT") return RelOp::kGt;
  return RelOp::kEq;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  absl::StatusOr<ConstraintRule> Rule() {
    ConstraintRule rule;
    absl::StatusOr<Scope> scope = ParseScope();
    if (!scope.ok()) return scope.status();
    rule.scope = *std::move(scope);
    if (absl::Status s = Expect(Tok::kColon, "':'"); !s.ok()) return s;
    if (Peek().kind == Tok::kIdent && Peek().text == "IMPLIES") {
      ++pos_;
      if (absl::Status s = Expect(Tok::kLParen, "'('"); !s.ok()) return s;
      std::vector<Atom> atoms;
      bool saw_semi = false;
      while (true) {
        absl::StatusOr<Atom> atom = ParseAtom();
        if (!atom.ok()) return atom.status();
        atoms.push_back(*std::move(atom));
        if (Peek().kind == Tok::kComma && !saw_semi) {
          ++pos_;
          continue;
        }
        if (Peek().kind == Tok::kSemi && !saw_semi) {
          ++pos_;
          saw_semi = true;
          continue;
        }
        break;
      }
      if (absl::Status s = Expect(Tok::kRParen, "')'"); !s.ok()) return s;
      if (atoms.size() < 2) {
        return Error(Peek(), "IMPLIES needs at least one precondition");
      }
      rule.consequent = std::move(atoms.back());
      atoms.pop_back();
      rule.preconditions = std::move(atoms);
    } else {
      absl::StatusOr<Atom> atom = ParseAtom();
      if (!atom.ok()) return atom.status();
      rule.consequent = *std::move(atom);
    }
    if (Peek().kind != Tok::kEnd) {
      return Error(Peek(), absl::StrCat("trailing input '", Peek().text, "'"));
    }
    rule.family = rule.consequent.kind == AtomKind::kRel
                      ? Family::kRangeAlignment
                      : Family::kValueDependency;
    return rule;
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return toks_[i < toks_.size() ? i : toks_.size() - 1];
  }

  absl::Status Error(const Token& at, std::string_view what) const {
    return absl::InvalidArgumentError(
        absl::StrCat("col ", at.column, ": ", std::string(what)));
  }

  absl::Status Expect(Tok kind, std::string_view what) {
    if (Peek().kind != kind) {
      return Error(Peek(), absl::StrCat("expected ", std::string(what)));
    }
    ++pos_;
    return absl::OkStatus();
  }

  absl::StatusOr<std::string> Ident(std::string_view what) {
    if (Peek().kind != Tok::kIdent) {
      return Error(Peek(), absl::StrCat("expected ", std::string(what)));
    }
    return toks_[pos_++].text;
  }

  absl::StatusOr<FieldPath> Path() {
    const Token& at = Peek();
    absl::StatusOr<std::string> name = Ident("field path");
    if (!name.ok()) return name.status();
    absl::StatusOr<FieldPath> path = FieldPath::Parse(*name);
    if (!path.ok()) return Error(at, std::string(path.status().message()));
    return path;
  }

  absl::StatusOr<Scope> ParseScope() {
    absl::StatusOr<std::string> kw = Ident("INTRA or INTER");
    if (!kw.ok()) return kw.status();
    if (*kw != "INTRA" && *kw != "INTER") {
      return Error(toks_[pos_ - 1], "expected INTRA or INTER");
    }
    if (absl::Status s = Expect(Tok::kLParen, "'('"); !s.ok()) return s;
    absl::StatusOr<std::string> a = Ident("IE name");
    if (!a.ok()) return a.status();
    if (*kw == "INTRA") {
      if (absl::Status s = Expect(Tok::kRParen, "')'"); !s.ok()) return s;
      return Scope::Intra(*a);
    }
    if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
    absl::StatusOr<std::string> b = Ident("IE name");
    if (!b.ok()) return b.status();
    if (absl::Status s = Expect(Tok::kRParen, "')'"); !s.ok()) return s;
    return Scope::Inter(*a, *b);
  }

  // number, quoted label, TRUE/FALSE; bare names only when `bare_labels`.
  std::optional<Scalar> TryLiteral(bool bare_labels) {
    const Token& t = Peek();
    bool negative = false;
    size_t look = 0;
    if (t.kind == Tok::kMinus && Peek(1).kind == Tok::kNumber) {
      negative = true;
      look = 1;
    }
    const Token& v = Peek(look);
    if (v.kind == Tok::kNumber) {
      int64_t n = 0;
      if (!absl::SimpleAtoi(v.text, &n)) return std::nullopt;
      pos_ += look + 1;
      return Scalar(negative ? -n : n);
    }
    if (negative) return std::nullopt;
    if (t.kind == Tok::kString) {
      ++pos_;
      return Scalar(std::string(t.text));
    }
    if (t.kind == Tok::kIdent && (t.text == "TRUE" || t.text == "true")) {
      ++pos_;
      return Scalar(true);
    }
    if (t.kind == Tok::kIdent && (t.text == "FALSE" || t.text == "false")) {
      ++pos_;
      return Scalar(false);
    }
    if (bare_labels && t.kind == Tok::kIdent) {
      ++pos_;
      return Scalar(std::string(t.text));
    }
    return std::nullopt;
  }

  absl::StatusOr<Scalar> Literal() {
    const Token& at = Peek();
    std::optional<Scalar> lit = TryLiteral(/*bare_labels=*/true);
    if (!lit) return Error(at, "expected literal");
    return *std::move(lit);
  }

  absl::StatusOr<Rational> Number() {
    const Token& at = Peek();
    if (at.kind != Tok::kNumber) return Error(at, "expected number");
    ++pos_;
    int64_t n = 0;
    if (!absl::SimpleAtoi(at.text, &n)) return Error(at, "number out of range");
    if (Peek().kind == Tok::kSlash) {
      ++pos_;
      const Token& dt = Peek();
      int64_t d = 0;
      if (dt.kind != Tok::kNumber || !absl::SimpleAtoi(dt.text, &d) || d == 0) {
        return Error(dt, "expected non-zero denominator");
      }
      ++pos_;
      return Rational(n, d);
    }
    return Rational(n);
  }

  // term {('+'|'-') term}; term := ['-'] (number ['*' path] | path).
  absl::StatusOr<LinExpr> Expr() {
    LinExpr e = LinExpr::Constant(0);
    bool first = true;
    while (true) {
      Rational sign = 1;
      if (!first) {
        if (Peek().kind == Tok::kPlus) {
          ++pos_;
        } else if (Peek().kind == Tok::kMinus) {
          ++pos_;
          sign = -1;
        } else {
          break;
        }
      }
      if (Peek().kind == Tok::kMinus) {
        ++pos_;
        sign = -sign;
      }
      const Token& at = Peek();
      Rational factor = 1;
      std::optional<FieldPath> field;
      if (at.kind == Tok::kNumber) {
        absl::StatusOr<Rational> n = Number();
        if (!n.ok()) return n.status();
        factor = *n;
        if (Peek().kind == Tok::kStar) {
          ++pos_;
          absl::StatusOr<FieldPath> p = Path();
          if (!p.ok()) return p.status();
          field = *std::move(p);
        }
      } else if (at.kind == Tok::kIdent) {
        absl::StatusOr<FieldPath> p = Path();
        if (!p.ok()) return p.status();
        field = *std::move(p);
      } else {
        return Error(at, "expected number or field");
      }
      factor = factor * sign;
      if (!field) {
        e.offset += factor;
      } else if (!e.field || *e.field == *field) {
        e.field = *field;
        e.coeff += factor;
      } else {
        return Error(at, "an operand may reference at most one field");
      }
      first = false;
    }
    if (e.field && e.coeff == Rational(0)) {
      e.field.reset();
    }
    return e;
  }

  absl::StatusOr<Atom> ParseAtom() {
    const Token& at = Peek();
    absl::StatusOr<std::string> kw = Ident("atom");
    if (!kw.ok()) return kw.status();
    if (absl::Status s = Expect(Tok::kLParen, "'('"); !s.ok()) return s;
    absl::StatusOr<Atom> atom = AtomBody(*kw, at);
    if (!atom.ok()) return atom.status();
    if (absl::Status s = Expect(Tok::kRParen, "')'"); !s.ok()) return s;
    return atom;
  }

  absl::StatusOr<Atom> AtomBody(const std::string& kw, const Token& at) {
    if (kw == "EQ" || kw == "NE") {
      // Literal form when the arguments are exactly (path, literal).
      if (Peek().kind == Tok::kIdent && Peek(1).kind == Tok::kComma) {
        const size_t save = pos_;
        absl::StatusOr<FieldPath> f = Path();
        if (!f.ok()) return f.status();
        ++pos_;  // ','
        std::optional<Scalar> lit = TryLiteral(/*bare_labels=*/false);
        if (lit && Peek().kind == Tok::kRParen) {
          return kw == "EQ" ? Atom::Eq(*f, *lit) : Atom::Ne(*f, *lit);
        }
        pos_ = save;
      }
      if (kw == "NE") {
        return Error(at, "NE compares a field with a literal");
      }
      return RelBody(RelOp::kEq);
    }
    if (IsRelKeyword(kw)) return RelBody(RelFromKeyword(kw));
    if (kw == "IN") {
      absl::StatusOr<FieldPath> f = Path();
      if (!f.ok()) return f.status();
      if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
      if (absl::Status s = Expect(Tok::kLBrace, "'{'"); !s.ok()) return s;
      std::vector<Scalar> set;
      while (Peek().kind != Tok::kRBrace) {
        absl::StatusOr<Scalar> lit = Literal();
        if (!lit.ok()) return lit.status();
        set.push_back(*std::move(lit));
        if (Peek().kind == Tok::kComma)
          ++pos_;
        else
          break;
      }
      if (absl::Status s = Expect(Tok::kRBrace, "'}'"); !s.ok()) return s;
      if (set.empty()) return Error(at, "IN needs a non-empty set");
      return Atom::In(*f, std::move(set));
    }
    if (kw == "MAP") {
      absl::StatusOr<FieldPath> from = Path();
      if (!from.ok()) return from.status();
      if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
      absl::StatusOr<FieldPath> to = Path();
      if (!to.ok()) return to.status();
      if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
      if (absl::Status s = Expect(Tok::kLBrace, "'{'"); !s.ok()) return s;
      std::vector<std::pair<Scalar, Scalar>> table;
      while (Peek().kind != Tok::kRBrace) {
        absl::StatusOr<Scalar> k = Literal();
        if (!k.ok()) return k.status();
        if (Peek().kind == Tok::kArrow || Peek().kind == Tok::kColon) {
          ++pos_;
        } else {
          return Error(Peek(), "expected '->' or ':'");
        }
        absl::StatusOr<Scalar> v = Literal();
        if (!v.ok()) return v.status();
        table.emplace_back(*std::move(k), *std::move(v));
        if (Peek().kind == Tok::kComma || Peek().kind == Tok::kSemi)
          ++pos_;
        else
          break;
      }
      if (absl::Status s = Expect(Tok::kRBrace, "'}'"); !s.ok()) return s;
      if (table.empty()) return Error(at, "MAP needs a non-empty table");
      for (size_t i = 0; i < table.size(); ++i) {
        for (size_t j = i + 1; j < table.size(); ++j) {
          if (table[i].first == table[j].first) {
            return Error(at, "MAP keys must be distinct");
          }
        }
      }
      return Atom::Map(*from, *to, std::move(table));
    }
    if (kw == "MOD") {
      absl::StatusOr<FieldPath> f = Path();
      if (!f.ok()) return f.status();
      if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
      const Token& mt = Peek();
      absl::StatusOr<Rational> m = Number();
      if (!m.ok()) return m.status();
      if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
      const Token& rt = Peek();
      absl::StatusOr<Rational> r = Number();
      if (!r.ok()) return r.status();
      if (!m->is_integer() || m->num() < 1) {
        return Error(mt, "MOD modulus must be an integer >= 1");
      }
      if (!r->is_integer() || r->num() < 0 || r->num() >= m->num()) {
        return Error(rt, "MOD residue must lie in [0, modulus)");
      }
      return Atom::Mod(*f, m->num(), r->num());
    }
    if (kw == "MATCH") {
      absl::StatusOr<FieldPath> a = Path();
      if (!a.ok()) return a.status();
      if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
      absl::StatusOr<FieldPath> b = Path();
      if (!b.ok()) return b.status();
      return Atom::Match(*a, *b);
    }
    return Error(at, absl::StrCat("unknown atom '", kw, "'"));
  }

  absl::StatusOr<Atom> RelBody(RelOp op) {
    absl::StatusOr<LinExpr> lhs = Expr();
    if (!lhs.ok()) return lhs.status();
    if (absl::Status s = Expect(Tok::kComma, "','"); !s.ok()) return s;
    absl::StatusOr<LinExpr> rhs = Expr();
    if (!rhs.ok()) return rhs.status();
    return Atom::Rel(op, *std::move(lhs), *std::move(rhs));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<ConstraintRule> ParseRule(std::string_view text) {
  absl::StatusOr<std::vector<Token>> tokens = Lexer(text).Run();
  if (!tokens.ok()) return tokens.status();
  return Parser(*std::move(tokens)).Rule();
}

absl::StatusOr<std::vector<ConstraintRule>> ParseRuleFile(
    std::string_view text) {
  std::vector<ConstraintRule> rules;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] != '#') {
      absl::StatusOr<ConstraintRule> rule = ParseRule(line);
      if (!rule.ok()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": ", std::string(rule.status().message())));
      }
      rules.push_back(*std::move(rule));
    }
    start = end + 1;
  }
  return rules;
}

}  // namespace semprobe
