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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ig/table.hpp"

namespace ig {

enum class UnaryOp { negate, logical_not };
enum class BinaryOp { add, sub, mul, div, eq, ne, lt, le, gt, ge, logical_and, logical_or };
enum class Function { count, sum, mean, min, max, rank, year, is_valid };

std::string_view to_string(BinaryOp op);
std::string_view to_string(Function fn);
bool is_aggregate(Function fn);

/// Parsed expression tree. Plain value type: copies are deep.
struct Expr {
  enum class Kind { literal, column, unary, binary, call };

  Kind kind = Kind::literal;
  Value literal;
  std::string column;
  UnaryOp unary_op = UnaryOp::negate;
  BinaryOp binary_op = BinaryOp::add;
  Function function = Function::count;
  std::vector<Expr> args;

  static Expr make_literal(Value v);
  static Expr make_column(std::string name);
  static Expr make_unary(UnaryOp op, Expr operand);
  static Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr make_call(Function fn, std::vector<Expr> args = {});

  bool operator==(const Expr& other) const = default;
};

/// Precedence, tightest first: unary ! and -, then * /, then + -, then
/// comparisons, then &&, then ||. Column names are bare identifiers or
/// backtick-quoted (`Inside/Outside`); `*` in backticks is the wildcard column.
/// Throws ParseError carrying the byte offset of the offending token.
Expr parse_expression(std::string_view text);

/// Canonical text; parse_expression(to_string(e)) == e.
std::string to_string(const Expr& expr);

bool contains_wildcard(const Expr& expr);
bool uses_rank(const Expr& expr);
bool uses_aggregate(const Expr& expr);
/// Every column name referenced, in first-appearance order, without duplicates.
std::vector<std::string> referenced_columns(const Expr& expr);

/// Structural equality where a wildcard column in the template matches any
/// column reference in the concrete expression.
bool match_with_wildcards(const Expr& tmpl, const Expr& concrete);

/// Static type assigned during binding.
enum class StaticType { null, number, string, boolean, date };

struct BindOptions {
  bool allow_rank = false;
  bool allow_aggregates = false;
};

/// Expression resolved against a schema: column positions, static types and
/// comparison modes are fixed, so evaluation never fails on types.
struct BoundExpr {
  Expr::Kind kind = Expr::Kind::literal;
  StaticType type = StaticType::null;
  Value literal;
  std::size_t column = 0;
  UnaryOp unary_op = UnaryOp::negate;
  BinaryOp binary_op = BinaryOp::add;
  Function function = Function::count;
  // Ordinal category order used by comparisons and min/max; empty for natural order.
  std::vector<std::string> order;
  // Index into EvalContext::aggregates for aggregate calls.
  std::size_t aggregate_slot = 0;
  std::vector<BoundExpr> args;
};

/// One aggregate call found while binding, in slot order.
struct AggregateSlot {
  Function function = Function::count;
  std::size_t column = 0;  // unused for count()
  std::vector<std::string> order;
};

struct BoundExpression {
  BoundExpr root;
  std::vector<AggregateSlot> aggregates;
};

/// Type-checks against the schema. Throws SchemaError on unknown attributes,
/// wildcards, type mismatches, or rank()/aggregates where not permitted.
BoundExpression bind_expression(const Expr& expr, const Schema& schema, const BindOptions& options = {});

/// Ordered-group context: the 1-based rank of the row within its partition and
/// the partition's aggregate values (indexed by slot).
struct EvalContext {
  std::size_t rank = 0;
  std::span<const Value> aggregates;
};

/// Pure evaluation. Nulls propagate through arithmetic and comparisons; && and
/// || follow three-valued logic; division by zero yields null.
Value eval_expression(const BoundExpr& expr, const std::vector<std::vector<Value>>& columns, std::size_t row,
                      const EvalContext& context = {});

/// Convenience: evaluates over one row of a table (no rank, no aggregates).
Value eval_expression(const BoundExpr& expr, const Table& table, std::size_t row);

/// Aggregate over the given rows of one column. count() ignores `column`;
/// sum of no values is 0, mean/min/max of no values is null.
Value compute_aggregate(const AggregateSlot& slot, const std::vector<std::vector<Value>>& columns,
                        std::span<const std::size_t> rows);

}  // namespace ig
