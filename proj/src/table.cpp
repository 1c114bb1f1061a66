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

#include "ig/table.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ig/error.hpp"

namespace ig {

void check_schema_names(const Schema& schema) {
  std::unordered_set<std::string> seen;
  for (const auto& attr : schema) {
    if (attr.name.empty()) throw SchemaError("attribute names must be non-empty");
    if (is_wildcard(attr.name)) throw SchemaError("'*' is reserved and cannot name an attribute");
    if (!seen.insert(attr.name).second) throw SchemaError("duplicate attribute name '" + attr.name + "'");
  }
}

std::optional<std::size_t> ordinal_rank(const Attribute& attribute, const std::string& value) {
  const auto it = std::find(attribute.order.begin(), attribute.order.end(), value);
  if (it == attribute.order.end()) return std::nullopt;
  return static_cast<std::size_t>(it - attribute.order.begin());
}

std::strong_ordering compare_in_attribute(const Attribute& attribute, const Value& a, const Value& b) {
  if (attribute.type == AttributeType::ordinal && !attribute.order.empty() && a.is_string() && b.is_string()) {
    return *ordinal_rank(attribute, a.as_string()) <=> *ordinal_rank(attribute, b.as_string());
  }
  return compare(a, b);
}

void check_cell(const Attribute& attribute, const Value& value) {
  if (value.is_null()) return;
  auto fail = [&](std::string_view why) {
    throw SchemaError("attribute '" + attribute.name + "' (" + std::string(to_string(attribute.type)) +
                      "): " + std::string(why) + ", got " + std::string(to_string(value.tag())) + " '" +
                      value.to_string() + "'");
  };
  switch (attribute.type) {
    case AttributeType::quantitative:
      if (!value.is_number()) fail("expected a number");
      if (!std::isfinite(value.as_number())) fail("expected a finite number");
      break;
    case AttributeType::temporal:
      if (!value.is_date()) fail("expected a date");
      break;
    case AttributeType::nominal:
      if (!value.is_string()) fail("expected a string");
      break;
    case AttributeType::ordinal:
      if (!value.is_string()) fail("expected a string");
      if (!attribute.order.empty() && !ordinal_rank(attribute, value.as_string())) {
        fail("value is not in the declared category order");
      }
      break;
  }
}

Table::Table(std::string name, Schema schema, std::vector<std::vector<Value>> columns)
    : name_(std::move(name)), schema_(std::move(schema)), columns_(std::move(columns)) {
  check_schema_names(schema_);
  if (columns_.size() != schema_.size()) {
    throw SchemaError("table '" + name_ + "' has " + std::to_string(columns_.size()) + " columns for " +
                      std::to_string(schema_.size()) + " attributes");
  }
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].size() != rows_) {
      throw SchemaError("table '" + name_ + "': column '" + schema_[c].name + "' has " +
                        std::to_string(columns_[c].size()) + " cells, expected " + std::to_string(rows_));
    }
    for (const auto& cell : columns_[c]) check_cell(schema_[c], cell);
  }
}

Table Table::from_rows(std::string name, Schema schema, const std::vector<std::vector<Value>>& rows) {
  std::vector<std::vector<Value>> columns(schema.size());
  for (auto& col : columns) col.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      throw SchemaError("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                        " values, expected " + std::to_string(schema.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) columns[c].push_back(rows[r][c]);
  }
  Table t(std::move(name), std::move(schema), std::move(columns));
  // A zero-column table still has a row count.
  if (t.schema_.empty()) t.rows_ = rows.size();
  return t;
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column_index(std::string_view name) const {
  if (auto i = find_column(name)) return *i;
  throw SchemaError("unknown attribute '" + std::string(name) + "' in table '" + name_ + "'");
}

const Attribute& Table::attribute(std::string_view name) const { return schema_[column_index(name)]; }

std::vector<Value> Table::row(std::size_t index) const {
  std::vector<Value> out;
  out.reserve(columns_.size());
  for (const auto& col : columns_) out.push_back(col.at(index));
  return out;
}

Record Table::record(std::size_t index) const {
  Record out;
  for (std::size_t c = 0; c < columns_.size(); ++c) out.emplace(schema_[c].name, columns_[c].at(index));
  return out;
}

Table Table::renamed(std::string name) const {
  Table copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

bool same_contents(const Table& a, const Table& b) {
  if (a.schema() != b.schema() || a.row_count() != b.row_count()) return false;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    if (a.column(c) != b.column(c)) return false;
  }
  return true;
}

std::size_t cell_count(const Table& table) { return table.row_count() * table.column_count(); }

}  // namespace ig
