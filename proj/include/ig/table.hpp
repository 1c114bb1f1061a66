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

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ig/value.hpp"

namespace ig {

using Schema = std::vector<Attribute>;

/// One row keyed by attribute name.
using Record = std::map<std::string, Value, std::less<>>;

/// Immutable typed relation, stored column-major.
///
/// Construction enforces the cell invariants: quantitative cells hold finite
/// numbers, temporal cells hold dates, nominal and ordinal cells hold strings
/// (ordinal values must appear in the declared order list when one exists),
/// and any cell may be null.
class Table {
 public:
  Table() = default;
  Table(std::string name, Schema schema, std::vector<std::vector<Value>> columns);

  static Table from_rows(std::string name, Schema schema, const std::vector<std::vector<Value>>& rows);

  const std::string& name() const { return name_; }
  const Schema& schema() const { return schema_; }
  std::size_t row_count() const { return rows_; }
  std::size_t column_count() const { return schema_.size(); }

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws SchemaError naming the attribute when absent.
  std::size_t column_index(std::string_view name) const;
  const Attribute& attribute(std::string_view name) const;

  const std::vector<std::vector<Value>>& columns() const { return columns_; }
  const std::vector<Value>& column(std::size_t index) const { return columns_.at(index); }
  const std::vector<Value>& column(std::string_view name) const { return columns_[column_index(name)]; }
  const Value& at(std::size_t row, std::size_t col) const { return columns_[col][row]; }
  const Value& at(std::size_t row, std::string_view col) const { return columns_[column_index(col)][row]; }

  std::vector<Value> row(std::size_t index) const;
  Record record(std::size_t index) const;

  Table renamed(std::string name) const;

  /// Equality over name, schema and every cell.
  bool operator==(const Table& other) const = default;

 private:
  std::string name_;
  Schema schema_;
  std::vector<std::vector<Value>> columns_;
  std::size_t rows_ = 0;
};

/// Same schema and cells; the table name is ignored.
bool same_contents(const Table& a, const Table& b);

/// rows x columns
std::size_t cell_count(const Table& table);

/// Throws SchemaError on empty, duplicate or reserved ("*") attribute names.
void check_schema_names(const Schema& schema);

/// Validates one cell against its attribute; throws SchemaError.
void check_cell(const Attribute& attribute, const Value& value);

/// Position of `value` in the attribute's ordinal order list, when declared.
std::optional<std::size_t> ordinal_rank(const Attribute& attribute, const std::string& value);

/// Orders two non-null cells of one attribute; ordinal attributes with a
/// declared order compare by category position.
std::strong_ordering compare_in_attribute(const Attribute& attribute, const Value& a, const Value& b);

}  // namespace ig
