/*
 * Copyright 2026 The insightgraph Authors.
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

#include "ig/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include "ig/csv.hpp"
#include "ig/error.hpp"

namespace ig {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::logical_and: return "&&";
    case BinaryOp::logical_or: return "||";
  }
  return "?";
}

std::string_view to_string(Function fn) {
  switch (fn) {
    case Function::count: return "count";
    case Function::sum: return "sum";
    case Function::mean: return "mean";
    case Function::min: return "min";
    case Function::max: return "max";
    case Function::rank: return "rank";
    case Function::year: return "year";
    case Function::is_valid: return "isValid";
  }
  return "?";
}

bool is_aggregate(Function fn) {
  return fn == Function::count || fn == Function::sum || fn == Function::mean || fn == Function::min ||
         fn == Function::max;
}

namespace {

std::optional<Function> function_from_name(std::string_view name) {
  for (auto fn : {Function::count, Function::sum, Function::mean, Function::min, Function::max, Function::rank,
                  Function::year, Function::is_valid}) {
    if (to_string(fn) == name) return fn;
  }
  return std::nullopt;
}

std::size_t arity(Function fn) { return (fn == Function::count || fn == Function::rank) ? 0 : 1; }

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::logical_or: return 1;
    case BinaryOp::logical_and: return 2;
    case BinaryOp::eq:
    case BinaryOp::ne:
    case BinaryOp::lt:
    case BinaryOp::le:
    case BinaryOp::gt:
    case BinaryOp::ge: return 3;
    case BinaryOp::add:
    case BinaryOp::sub: return 4;
    case BinaryOp::mul:
    case BinaryOp::div: return 5;
  }
  return 0;
}

bool is_comparison(BinaryOp op) { return precedence(op) == 3; }
bool is_arithmetic(BinaryOp op) { return precedence(op) >= 4; }

enum class Tok { end, number, string, ident, quoted_ident, op, lparen, rparen, comma };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token tok;
    tok.offset = pos_;
    if (pos_ >= text_.size()) return tok;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      return lex_number(tok);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) ++end;
      tok.kind = Tok::ident;
      tok.text = std::string(text_.substr(pos_, end - pos_));
      pos_ = end;
      return tok;
    }
    if (c == '`') {
      const auto close = text_.find('`', pos_ + 1);
      if (close == std::string_view::npos) throw ParseError("unterminated backtick-quoted name", pos_);
      if (close == pos_ + 1) throw ParseError("empty backtick-quoted name", pos_);
      tok.kind = Tok::quoted_ident;
      tok.text = std::string(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return tok;
    }
    if (c == '"' || c == '\'') return lex_string(tok, c);
    if (c == '(') return single(tok, Tok::lparen);
    if (c == ')') return single(tok, Tok::rparen);
    if (c == ',') return single(tok, Tok::comma);
    static constexpr std::string_view two[] = {"==", "!=", "<=", ">=", "&&", "||"};
    for (auto op : two) {
      if (text_.substr(pos_, 2) == op) {
        tok.kind = Tok::op;
        tok.text = std::string(op);
        pos_ += 2;
        return tok;
      }
    }
    if (std::string_view("+-*/<>!").find(c) != std::string_view::npos) {
      tok.kind = Tok::op;
      tok.text = std::string(1, c);
      ++pos_;
      return tok;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

 private:
  Token single(Token tok, Tok kind) {
    tok.kind = kind;
    tok.text = std::string(1, text_[pos_++]);
    return tok;
  }

  Token lex_number(Token tok) {
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t save = end++;
      if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
      if (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
        digits();
      } else {
        end = save;
      }
    }
    tok.kind = Tok::number;
    tok.text = std::string(text_.substr(pos_, end - pos_));
    if (!parse_number(tok.text)) throw ParseError("invalid number '" + tok.text + "'", pos_);
    pos_ = end;
    return tok;
  }

  Token lex_string(Token tok, char quote) {
    std::size_t i = pos_ + 1;
    std::string out;
    for (;;) {
      if (i >= text_.size()) throw ParseError("unterminated string literal", pos_);
      const char c = text_[i];
      if (c == quote) break;
      if (c == '\\') {
        if (i + 1 >= text_.size()) throw ParseError("unterminated string literal", pos_);
        out.push_back(text_[i + 1]);
        i += 2;
        continue;
      }
      out.push_back(c);
      ++i;
    }
    tok.kind = Tok::string;
    tok.text = std::move(out);
    pos_ = i + 1;
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<BinaryOp> binary_from_token(const Token& tok) {
  if (tok.kind != Tok::op) return std::nullopt;
  for (auto op : {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div, BinaryOp::eq, BinaryOp::ne,
                  BinaryOp::lt, BinaryOp::le, BinaryOp::gt, BinaryOp::ge, BinaryOp::logical_and,
                  BinaryOp::logical_or}) {
    if (to_string(op) == tok.text) return op;
  }
  return std::nullopt;
}

// Precedence climbing over the token stream.
class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  Expr parse() {
    Expr e = parse_binary(1);
    if (current_.kind != Tok::end) throw ParseError("unexpected '" + current_.text + "'", current_.offset);
    return e;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  Expr parse_binary(int min_prec) {
    Expr lhs = parse_unary();
    for (;;) {
      auto op = binary_from_token(current_);
      if (!op || precedence(*op) < min_prec) return lhs;
      advance();
      Expr rhs = parse_binary(precedence(*op) + 1);
      lhs = Expr::make_binary(*op, std::move(lhs), std::move(rhs));
    }
  }

  Expr parse_unary() {
    if (current_.kind == Tok::op && (current_.text == "!" || current_.text == "-")) {
      const bool negate = current_.text == "-";
      advance();
      // A minus written directly before a number literal is part of the literal.
      if (negate && current_.kind == Tok::number) {
        Expr lit = Expr::make_literal(-*parse_number(current_.text));
        advance();
        return lit;
      }
      return Expr::make_unary(negate ? UnaryOp::negate : UnaryOp::logical_not, parse_unary());
    }
    return parse_primary();
  }

  Expr parse_primary() {
    const Token tok = current_;
    switch (tok.kind) {
      case Tok::number:
        advance();
        return Expr::make_literal(*parse_number(tok.text));
      case Tok::string:
        advance();
        return Expr::make_literal(Value(tok.text));
      case Tok::quoted_ident:
        advance();
        return Expr::make_column(tok.text);
      case Tok::ident: {
        advance();
        if (current_.kind == Tok::lparen) return parse_call(tok);
        if (tok.text == "true") return Expr::make_literal(true);
        if (tok.text == "false") return Expr::make_literal(false);
        if (tok.text == "null") return Expr::make_literal(Value::null());
        return Expr::make_column(tok.text);
      }
      case Tok::lparen: {
        advance();
        Expr inner = parse_binary(1);
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::end: throw ParseError("unexpected end of expression", tok.offset);
      default: throw ParseError("unexpected '" + tok.text + "'", tok.offset);
    }
  }

  Expr parse_call(const Token& name) {
    auto fn = function_from_name(name.text);
    if (!fn) throw ParseError("unknown function '" + name.text + "'", name.offset);
    advance();  // (
    std::vector<Expr> args;
    if (current_.kind != Tok::rparen) {
      for (;;) {
        args.push_back(parse_binary(1));
        if (current_.kind != Tok::comma) break;
        advance();
      }
    }
    expect(Tok::rparen, "')'");
    if (args.size() != arity(*fn)) {
      throw ParseError(name.text + "() expects " + std::to_string(arity(*fn)) + " argument(s), got " +
                           std::to_string(args.size()),
                       name.offset);
    }
    return Expr::make_call(*fn, std::move(args));
  }

  void expect(Tok kind, std::string_view what) {
    if (current_.kind != kind) {
      throw ParseError("expected " + std::string(what) +
                           (current_.kind == Tok::end ? std::string(" at end of expression")
                                                      : " before '" + current_.text + "'"),
                       current_.offset);
    }
    advance();
  }

  Lexer lexer_;
  Token current_;
};

bool is_plain_identifier(const std::string& name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  if (name == "true" || name == "false" || name == "null") return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string print(const Expr& e);

std::string print_operand(const Expr& child, int parent_prec, bool right) {
  if (child.kind == Expr::Kind::binary) {
    const int p = precedence(child.binary_op);
    if (p < parent_prec || (right && p == parent_prec)) return "(" + print(child) + ")";
  }
  return print(child);
}

std::string print(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::literal:
      if (e.literal.is_string()) return quote_string(e.literal.as_string());
      if (e.literal.is_null()) return "null";
      if (e.literal.is_date()) return quote_string(e.literal.as_date().iso());
      return e.literal.to_string();
    case Expr::Kind::column: return is_plain_identifier(e.column) ? e.column : "`" + e.column + "`";
    case Expr::Kind::unary: {
      const std::string op = e.unary_op == UnaryOp::negate ? "-" : "!";
      const Expr& operand = e.args.front();
      if (operand.kind == Expr::Kind::binary) return op + "(" + print(operand) + ")";
      // "-2" would re-parse as a literal; keep the unary node explicit.
      if (e.unary_op == UnaryOp::negate && operand.kind == Expr::Kind::literal && operand.literal.is_number() &&
          !std::signbit(operand.literal.as_number())) {
        return op + "(" + print(operand) + ")";
      }
      return op + print(operand);
    }
    case Expr::Kind::binary: {
      const int p = precedence(e.binary_op);
      return print_operand(e.args[0], p, false) + " " + std::string(to_string(e.binary_op)) + " " +
             print_operand(e.args[1], p, true);
    }
    case Expr::Kind::call: {
      std::string out = std::string(to_string(e.function)) + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print(e.args[i]);
      }
      return out + ")";
    }
  }
  return "";
}

template <typename Pred>
bool any_node(const Expr& e, Pred pred) {
  if (pred(e)) return true;
  return std::any_of(e.args.begin(), e.args.end(), [&](const Expr& a) { return any_node(a, pred); });
}

}  // namespace

Expr Expr::make_literal(Value v) {
  Expr e;
  e.kind = Kind::literal;
  e.literal = std::move(v);
  return e;
}

Expr Expr::make_column(std::string name) {
  Expr e;
  e.kind = Kind::column;
  e.column = std::move(name);
  return e;
}

Expr Expr::make_unary(UnaryOp op, Expr operand) {
  Expr e;
  e.kind = Kind::unary;
  e.unary_op = op;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::make_binary(BinaryOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::binary;
  e.binary_op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::make_call(Function fn, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::call;
  e.function = fn;
  e.args = std::move(args);
  return e;
}

Expr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& expr) { return print(expr); }

bool contains_wildcard(const Expr& expr) {
  return any_node(expr, [](const Expr& e) { return e.kind == Expr::Kind::column && is_wildcard(e.column); });
}

bool uses_rank(const Expr& expr) {
  return any_node(expr, [](const Expr& e) { return e.kind == Expr::Kind::call && e.function == Function::rank; });
}

bool uses_aggregate(const Expr& expr) {
  return any_node(expr, [](const Expr& e) { return e.kind == Expr::Kind::call && is_aggregate(e.function); });
}

std::vector<std::string> referenced_columns(const Expr& expr) {
  std::vector<std::string> out;
  any_node(expr, [&](const Expr& e) {
    if (e.kind == Expr::Kind::column && std::find(out.begin(), out.end(), e.column) == out.end()) {
      out.push_back(e.column);
    }
    return false;
  });
  return out;
}

bool match_with_wildcards(const Expr& tmpl, const Expr& concrete) {
  if (tmpl.kind == Expr::Kind::column && is_wildcard(tmpl.column)) return concrete.kind == Expr::Kind::column;
  if (tmpl.kind != concrete.kind || tmpl.args.size() != concrete.args.size()) return false;
  switch (tmpl.kind) {
    case Expr::Kind::literal:
      if (tmpl.literal != concrete.literal) return false;
      break;
    case Expr::Kind::column:
      if (tmpl.column != concrete.column) return false;
      break;
    case Expr::Kind::unary:
      if (tmpl.unary_op != concrete.unary_op) return false;
      break;
    case Expr::Kind::binary:
      if (tmpl.binary_op != concrete.binary_op) return false;
      break;
    case Expr::Kind::call:
      if (tmpl.function != concrete.function) return false;
      break;
  }
  for (std::size_t i = 0; i < tmpl.args.size(); ++i) {
    if (!match_with_wildcards(tmpl.args[i], concrete.args[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Binding

namespace {

std::string_view to_string(StaticType t) {
  switch (t) {
    case StaticType::null: return "null";
    case StaticType::number: return "number";
    case StaticType::string: return "string";
    case StaticType::boolean: return "boolean";
    case StaticType::date: return "date";
  }
  return "?";
}

StaticType static_type_of(const Attribute& attr) {
  switch (attr.type) {
    case AttributeType::quantitative: return StaticType::number;
    case AttributeType::temporal: return StaticType::date;
    case AttributeType::nominal:
    case AttributeType::ordinal: return StaticType::string;
  }
  return StaticType::string;
}

StaticType static_type_of(const Value& v) {
  switch (v.tag()) {
    case Value::Tag::null: return StaticType::null;
    case Value::Tag::number: return StaticType::number;
    case Value::Tag::string: return StaticType::string;
    case Value::Tag::boolean: return StaticType::boolean;
    case Value::Tag::date: return StaticType::date;
  }
  return StaticType::null;
}

class Binder {
 public:
  Binder(const Schema& schema, const BindOptions& options, std::vector<AggregateSlot>& slots)
      : schema_(schema), options_(options), slots_(slots) {}

  BoundExpr bind(const Expr& e) {
    BoundExpr b;
    b.kind = e.kind;
    switch (e.kind) {
      case Expr::Kind::literal:
        b.literal = e.literal;
        b.type = static_type_of(e.literal);
        return b;
      case Expr::Kind::column: {
        const Attribute& attr = resolve(e.column);
        b.column = index_of(e.column);
        b.type = static_type_of(attr);
        if (attr.type == AttributeType::ordinal) b.order = attr.order;
        return b;
      }
      case Expr::Kind::unary: return bind_unary(e);
      case Expr::Kind::binary: return bind_binary(e);
      case Expr::Kind::call: return bind_call(e);
    }
    return b;
  }

 private:
  const Attribute& resolve(const std::string& name) {
    if (is_wildcard(name)) throw SchemaError("wildcard attribute in an executable expression");
    return schema_[index_of(name)];
  }

  std::size_t index_of(const std::string& name) {
    for (std::size_t i = 0; i < schema_.size(); ++i) {
      if (schema_[i].name == name) return i;
    }
    throw SchemaError("unknown attribute '" + name + "'");
  }

  [[noreturn]] void mismatch(std::string_view what, StaticType got) {
    throw SchemaError(std::string(what) + ", got " + std::string(to_string(got)));
  }

  BoundExpr bind_unary(const Expr& e) {
    BoundExpr b;
    b.kind = e.kind;
    b.unary_op = e.unary_op;
    b.args.push_back(bind(e.args[0]));
    const StaticType t = b.args[0].type;
    if (e.unary_op == UnaryOp::negate) {
      if (t != StaticType::number && t != StaticType::null) mismatch("unary '-' needs a quantitative operand", t);
      b.type = StaticType::number;
    } else {
      if (t != StaticType::boolean && t != StaticType::null) mismatch("'!' needs a boolean operand", t);
      b.type = StaticType::boolean;
    }
    return b;
  }

  // A string literal compared against a date becomes a date literal.
  static void coerce_date_literal(BoundExpr& maybe_literal, const BoundExpr& other) {
    if (other.type != StaticType::date || maybe_literal.kind != Expr::Kind::literal ||
        maybe_literal.type != StaticType::string) {
      return;
    }
    if (auto d = parse_date(maybe_literal.literal.as_string())) {
      maybe_literal.literal = Value(*d);
      maybe_literal.type = StaticType::date;
    }
  }

  // Resolves ordinal comparison: a literal compared to an ordinal column is
  // replaced by its category rank and the column compares by rank too.
  static void resolve_ordinal(BoundExpr& b) {
    BoundExpr& lhs = b.args[0];
    BoundExpr& rhs = b.args[1];
    const bool l_ord = lhs.kind == Expr::Kind::column && !lhs.order.empty();
    const bool r_ord = rhs.kind == Expr::Kind::column && !rhs.order.empty();
    if (!l_ord && !r_ord) return;
    if (l_ord && r_ord) {
      if (lhs.order != rhs.order) throw SchemaError("cannot order ordinal attributes with different category lists");
      b.order = lhs.order;
      return;
    }
    BoundExpr& col = l_ord ? lhs : rhs;
    BoundExpr& other = l_ord ? rhs : lhs;
    if (other.kind == Expr::Kind::literal && other.type == StaticType::string) {
      const auto it = std::find(col.order.begin(), col.order.end(), other.literal.as_string());
      if (it == col.order.end()) {
        throw SchemaError("'" + other.literal.as_string() + "' is not a declared ordinal category");
      }
      b.order = col.order;
    }
    // Ordinal versus an arbitrary string expression falls back to lexical order.
  }

  BoundExpr bind_binary(const Expr& e) {
    BoundExpr b;
    b.kind = e.kind;
    b.binary_op = e.binary_op;
    b.args.push_back(bind(e.args[0]));
    b.args.push_back(bind(e.args[1]));
    coerce_date_literal(b.args[0], b.args[1]);
    coerce_date_literal(b.args[1], b.args[0]);
    const StaticType l = b.args[0].type;
    const StaticType r = b.args[1].type;
    const std::string op(to_string(e.binary_op));
    if (is_arithmetic(e.binary_op)) {
      for (auto t : {l, r}) {
        if (t != StaticType::number && t != StaticType::null) mismatch("'" + op + "' needs quantitative operands", t);
      }
      b.type = StaticType::number;
    } else if (is_comparison(e.binary_op)) {
      if (l != StaticType::null && r != StaticType::null && l != r) {
        throw SchemaError("'" + op + "' compares " + std::string(to_string(l)) + " with " + std::string(to_string(r)));
      }
      const bool ordering = e.binary_op != BinaryOp::eq && e.binary_op != BinaryOp::ne;
      if (ordering && (l == StaticType::boolean || r == StaticType::boolean)) {
        throw SchemaError("'" + op + "' cannot order booleans");
      }
      if (l == StaticType::string && r == StaticType::string) resolve_ordinal(b);
      b.type = StaticType::boolean;
    } else {
      for (auto t : {l, r}) {
        if (t != StaticType::boolean && t != StaticType::null) mismatch("'" + op + "' needs boolean operands", t);
      }
      b.type = StaticType::boolean;
    }
    return b;
  }

  BoundExpr bind_call(const Expr& e) {
    BoundExpr b;
    b.kind = e.kind;
    b.function = e.function;
    const std::string name(to_string(e.function));
    if (e.function == Function::rank) {
      if (!options_.allow_rank) throw SchemaError("rank() is only valid in a filter that follows an orderby step");
      b.type = StaticType::number;
      return b;
    }
    if (is_aggregate(e.function)) {
      if (!options_.allow_aggregates) throw SchemaError(name + "() is not allowed here");
      AggregateSlot slot;
      slot.function = e.function;
      if (e.function == Function::count) {
        b.type = StaticType::number;
      } else {
        if (e.args[0].kind != Expr::Kind::column) throw SchemaError(name + "() takes an attribute name");
        const Attribute& attr = resolve(e.args[0].column);
        slot.column = index_of(e.args[0].column);
        if (e.function == Function::sum || e.function == Function::mean) {
          if (attr.type != AttributeType::quantitative) {
            throw SchemaError(name + "() requires a quantitative attribute, '" + attr.name + "' is " +
                              std::string(ig::to_string(attr.type)));
          }
          b.type = StaticType::number;
        } else {
          if (attr.type == AttributeType::nominal) {
            throw SchemaError(name + "() requires a quantitative, ordinal or temporal attribute, '" + attr.name +
                              "' is nominal");
          }
          b.type = static_type_of(attr);
          if (attr.type == AttributeType::ordinal) slot.order = attr.order;
        }
      }
      b.aggregate_slot = slots_.size();
      slots_.push_back(std::move(slot));
      return b;
    }
    b.args.push_back(bind(e.args[0]));
    if (e.function == Function::year) {
      if (b.args[0].type != StaticType::date && b.args[0].type != StaticType::null) {
        mismatch("year() needs a temporal operand", b.args[0].type);
      }
      b.type = StaticType::number;
    } else {
      b.type = StaticType::boolean;
    }
    return b;
  }

  const Schema& schema_;
  const BindOptions& options_;
  std::vector<AggregateSlot>& slots_;
};

std::strong_ordering compare_with_order(const Value& a, const Value& b, const std::vector<std::string>& order) {
  if (order.empty() || !a.is_string() || !b.is_string()) return compare(a, b);
  auto rank = [&](const Value& v) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), v.as_string()) - order.begin());
  };
  return rank(a) <=> rank(b);
}

Value finite_or_null(double v) { return std::isfinite(v) ? Value(v) : Value::null(); }

}  // namespace

BoundExpression bind_expression(const Expr& expr, const Schema& schema, const BindOptions& options) {
  BoundExpression out;
  Binder binder(schema, options, out.aggregates);
  out.root = binder.bind(expr);
  return out;
}

Value eval_expression(const BoundExpr& e, const std::vector<std::vector<Value>>& columns, std::size_t row,
                      const EvalContext& context) {
  switch (e.kind) {
    case Expr::Kind::literal: return e.literal;
    case Expr::Kind::column: return columns[e.column][row];
    case Expr::Kind::unary: {
      Value v = eval_expression(e.args[0], columns, row, context);
      if (v.is_null()) return v;
      if (e.unary_op == UnaryOp::negate) return Value(-v.as_number());
      return Value(!v.as_bool());
    }
    case Expr::Kind::binary: {
      if (e.binary_op == BinaryOp::logical_and || e.binary_op == BinaryOp::logical_or) {
        const bool is_and = e.binary_op == BinaryOp::logical_and;
        Value l = eval_expression(e.args[0], columns, row, context);
        if (!l.is_null() && l.as_bool() != is_and) return l;
        Value r = eval_expression(e.args[1], columns, row, context);
        if (!r.is_null() && r.as_bool() != is_and) return r;
        if (l.is_null() || r.is_null()) return Value::null();
        return Value(is_and);
      }
      Value l = eval_expression(e.args[0], columns, row, context);
      Value r = eval_expression(e.args[1], columns, row, context);
      if (l.is_null() || r.is_null()) return Value::null();
      switch (e.binary_op) {
        case BinaryOp::add: return finite_or_null(l.as_number() + r.as_number());
        case BinaryOp::sub: return finite_or_null(l.as_number() - r.as_number());
        case BinaryOp::mul: return finite_or_null(l.as_number() * r.as_number());
        case BinaryOp::div:
          if (r.as_number() == 0.0) return Value::null();
          return finite_or_null(l.as_number() / r.as_number());
        default: break;
      }
      const auto cmp = compare_with_order(l, r, e.order);
      switch (e.binary_op) {
        case BinaryOp::eq: return Value(cmp == 0);
        case BinaryOp::ne: return Value(cmp != 0);
        case BinaryOp::lt: return Value(cmp < 0);
        case BinaryOp::le: return Value(cmp <= 0);
        case BinaryOp::gt: return Value(cmp > 0);
        case BinaryOp::ge: return Value(cmp >= 0);
        default: break;
      }
      return Value::null();
    }
    case Expr::Kind::call: {
      if (e.function == Function::rank) return Value(static_cast<double>(context.rank));
      if (is_aggregate(e.function)) {
        return e.aggregate_slot < context.aggregates.size() ? context.aggregates[e.aggregate_slot] : Value::null();
      }
      Value v = eval_expression(e.args[0], columns, row, context);
      if (e.function == Function::is_valid) return Value(!v.is_null());
      if (v.is_null()) return v;
      return Value(static_cast<double>(v.as_date().year()));
    }
  }
  return Value::null();
}

Value eval_expression(const BoundExpr& expr, const Table& table, std::size_t row) {
  return eval_expression(expr, table.columns(), row, {});
}

Value compute_aggregate(const AggregateSlot& slot, const std::vector<std::vector<Value>>& columns,
                        std::span<const std::size_t> rows) {
  if (slot.function == Function::count) return Value(static_cast<double>(rows.size()));
  const auto& col = columns[slot.column];
  switch (slot.function) {
    case Function::sum:
    case Function::mean: {
      double total = 0.0;
      std::size_t n = 0;
      for (auto r : rows) {
        if (col[r].is_null()) continue;
        total += col[r].as_number();
        ++n;
      }
      if (slot.function == Function::sum) return finite_or_null(total);
      return n == 0 ? Value::null() : finite_or_null(total / static_cast<double>(n));
    }
    case Function::min:
    case Function::max: {
      const Value* best = nullptr;
      for (auto r : rows) {
        if (col[r].is_null()) continue;
        if (!best) {
          best = &col[r];
          continue;
        }
        const auto cmp = compare_with_order(col[r], *best, slot.order);
        if ((slot.function == Function::min && cmp < 0) || (slot.function == Function::max && cmp > 0)) best = &col[r];
      }
      return best ? *best : Value::null();
    }
    default: break;
  }
  return Value::null();
}

}  // namespace ig
