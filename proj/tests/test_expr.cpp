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

#include <doctest.h>

#include <random>

#include "ig/error.hpp"
#include "ig/expr.hpp"
#include "ig/table.hpp"

using namespace ig;

namespace {

Expr col(const std::string& n) { return Expr::make_column(n); }
Expr lit(Value v) { return Expr::make_literal(std::move(v)); }
Expr bin(BinaryOp op, Expr a, Expr b) { return Expr::make_binary(op, std::move(a), std::move(b)); }

// Random trees over every node kind, used for the print/parse round trip.
Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
  static const char* names[] = {"a", "b_2", "Inside/Outside", "true", "with space", "*"};
  static const char* strings[] = {"", "x", "say \"hi\"", "back\\slash", "it's"};
  switch (pick(rng)) {
    case 0: return col(names[rng() % 6]);
    case 1: {
      switch (rng() % 5) {
        case 0: return lit(static_cast<double>(static_cast<int>(rng() % 2001) - 1000) / 8.0);
        case 1: return lit(strings[rng() % 5]);
        case 2: return lit(rng() % 2 == 0);
        case 3: return lit(Value::null());
        default: return lit(static_cast<double>(rng() % 100));
      }
    }
    case 2: return Expr::make_call(rng() % 2 ? Function::count : Function::rank);
    case 3: return Expr::make_unary(rng() % 2 ? UnaryOp::negate : UnaryOp::logical_not, random_expr(rng, depth - 1));
    case 4: {
      static const Function one_arg[] = {Function::sum, Function::mean, Function::min, Function::max,
                                         Function::year, Function::is_valid};
      return Expr::make_call(one_arg[rng() % 6], {random_expr(rng, depth - 1)});
    }
    default: {
      const auto op = static_cast<BinaryOp>(rng() % 12);
      return bin(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    }
  }
}

Table sample() {
  const Schema s{{"x", AttributeType::quantitative, {}},
                 {"y", AttributeType::quantitative, {}},
                 {"name", AttributeType::nominal, {}},
                 {"size", AttributeType::ordinal, {"S", "M", "L"}},
                 {"day", AttributeType::temporal, {}}};
  return Table::from_rows("t", s,
                          {{1, 2, "a", "L", Date::from_ymd(2015, 4, 27)},
                           {3, Value::null(), "b", "S", Date::from_ymd(2016, 1, 1)},
                           {0, 0, Value::null(), "M", Value::null()}});
}

Value eval(const std::string& text, std::size_t row) {
  const Table t = sample();
  return eval_expression(bind_expression(parse_expression(text), t.schema()).root, t, row);
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(parse_expression("1 + 2 * 3") == bin(BinaryOp::add, lit(1), bin(BinaryOp::mul, lit(2), lit(3))));
  CHECK(parse_expression("a - b - c") == bin(BinaryOp::sub, bin(BinaryOp::sub, col("a"), col("b")), col("c")));
  CHECK(parse_expression("a || b && c") ==
        bin(BinaryOp::logical_or, col("a"), bin(BinaryOp::logical_and, col("b"), col("c"))));
  CHECK(parse_expression("a < 1 && !b") ==
        bin(BinaryOp::logical_and, bin(BinaryOp::lt, col("a"), lit(1)),
            Expr::make_unary(UnaryOp::logical_not, col("b"))));
  CHECK(parse_expression("-x * 2") ==
        bin(BinaryOp::mul, Expr::make_unary(UnaryOp::negate, col("x")), lit(2)));
  CHECK(parse_expression("-2") == lit(-2));
  CHECK(parse_expression("`Inside/Outside` == 'I'") ==
        bin(BinaryOp::eq, col("Inside/Outside"), lit("I")));
  CHECK(parse_expression("rank() <= 3") == bin(BinaryOp::le, Expr::make_call(Function::rank), lit(3)));
  CHECK(parse_expression("isValid(x)") == Expr::make_call(Function::is_valid, {col("x")}));
}

TEST_CASE("printing re-parses to the same tree") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = random_expr(rng, 4);
    const std::string text = to_string(e);
    INFO(text);
    CHECK(parse_expression(text) == e);
  }
}

TEST_CASE("parse errors carry the offending offset") {
  auto offset_of = [](std::string_view text) -> std::size_t {
    try {
      parse_expression(text);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return ParseError::npos;
  };
  CHECK(offset_of("a + ") == 4);
  CHECK(offset_of("a # b") == 2);
  CHECK(offset_of("a b") == 2);
  CHECK(offset_of("foo(1)") == 0);
  CHECK(offset_of("sum()") == 0);
  CHECK(offset_of("(a + 1") == 6);
  CHECK(offset_of("'open") == 0);
  CHECK(offset_of("``") == 0);
  CHECK(offset_of("x + `y") == 4);
}

TEST_CASE("wildcards and column helpers") {
  const Expr e = parse_expression("`*` > 2 && y < `*`");
  CHECK(contains_wildcard(e));
  CHECK_FALSE(contains_wildcard(parse_expression("a > 2")));
  CHECK(referenced_columns(parse_expression("a + b * a - c")) == std::vector<std::string>{"a", "b", "c"});
  CHECK(uses_rank(parse_expression("rank() < 2 || a")));
  CHECK(uses_aggregate(parse_expression("1 + mean(a)")));
  CHECK_FALSE(uses_aggregate(parse_expression("year(d)")));
  CHECK(match_with_wildcards(parse_expression("`*` > 2"), parse_expression("rain > 2")));
  CHECK_FALSE(match_with_wildcards(parse_expression("`*` > 2"), parse_expression("rain > 3")));
  CHECK_FALSE(match_with_wildcards(parse_expression("`*` > 2"), parse_expression("1 > 2")));
  CHECK_FALSE(match_with_wildcards(parse_expression("a > 2"), parse_expression("b > 2")));
}

TEST_CASE("binding rejects bad references and types") {
  const Schema s = sample().schema();
  CHECK_THROWS_AS(bind_expression(parse_expression("nope > 1"), s), SchemaError);
  CHECK_THROWS_AS(bind_expression(parse_expression("`*` > 1"), s), SchemaError);
  CHECK_THROWS_AS(bind_expression(parse_expression("x + name"), s), SchemaError);
  CHECK_THROWS_AS(bind_expression(parse_expression("x && true"), s), SchemaError);
  CHECK_THROWS_AS(bind_expression(parse_expression("year(x)"), s), SchemaError);
  CHECK_THROWS_AS(bind_expression(parse_expression("size == 'XL'"), s), SchemaError);
  CHECK_THROWS_AS(bind_expression(parse_expression("rank() < 2"), s), SchemaError);
  CHECK_THROWS_AS(bind_expression(parse_expression("sum(x)"), s), SchemaError);
  CHECK_NOTHROW(bind_expression(parse_expression("rank() < 2"), s, {.allow_rank = true}));
  CHECK_NOTHROW(bind_expression(parse_expression("sum(x)"), s, {.allow_aggregates = true}));
  CHECK(bind_expression(parse_expression("x > 1"), s).root.type == StaticType::boolean);
  CHECK(bind_expression(parse_expression("year(day)"), s).root.type == StaticType::number);
}

TEST_CASE("evaluation follows null propagation and three-valued logic") {
  CHECK(eval("x + y * 2", 0) == Value(5));
  CHECK(eval("x + y", 1).is_null());
  CHECK(eval("x / y", 2).is_null());
  CHECK(eval("-x", 1) == Value(-3));
  CHECK(eval("y > 0", 1).is_null());
  CHECK(eval("y > 0 && false", 1) == Value(false));
  CHECK(eval("y > 0 || true", 1) == Value(true));
  CHECK(eval("y > 0 && true", 1).is_null());
  CHECK(eval("!(y > 0)", 1).is_null());
  CHECK(eval("isValid(y)", 1) == Value(false));
  CHECK(eval("isValid(y)", 0) == Value(true));
  CHECK(eval("year(day)", 0) == Value(2015));
  CHECK(eval("year(day)", 2).is_null());
  CHECK(eval("name == 'a'", 0) == Value(true));
  CHECK(eval("name != 'a'", 2).is_null());
}

TEST_CASE("ordinal comparisons use the declared order") {
  CHECK(eval("size > 'M'", 0) == Value(true));
  CHECK(eval("size > 'M'", 1) == Value(false));
  CHECK(eval("size >= 'M'", 2) == Value(true));
}

TEST_CASE("aggregates over row subsets") {
  const Table t = sample();
  const std::vector<std::size_t> all{0, 1, 2};
  const std::vector<std::size_t> none{};
  const AggregateSlot sum{Function::sum, 1, {}};
  const AggregateSlot mean{Function::mean, 1, {}};
  const AggregateSlot count{Function::count, 0, {}};
  const AggregateSlot max_size{Function::max, 3, {"S", "M", "L"}};
  CHECK(compute_aggregate(sum, t.columns(), all) == Value(2));
  CHECK(compute_aggregate(mean, t.columns(), all) == Value(1));
  CHECK(compute_aggregate(count, t.columns(), all) == Value(3));
  CHECK(compute_aggregate(sum, t.columns(), none) == Value(0));
  CHECK(compute_aggregate(mean, t.columns(), none).is_null());
  CHECK(compute_aggregate(max_size, t.columns(), all) == Value("L"));
  const std::vector<std::size_t> only_null{1};
  CHECK(compute_aggregate(sum, t.columns(), only_null) == Value(0));
  CHECK(compute_aggregate(mean, t.columns(), only_null).is_null());
}
