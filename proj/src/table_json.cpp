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

#include "ig/table_json.hpp"

#include <cmath>

#include "json_util.hpp"

namespace ig {

Json value_to_json(const Value& value) {
  switch (value.tag()) {
    case Value::Tag::null: return nullptr;
    case Value::Tag::number: return value.as_number();
    case Value::Tag::string: return value.as_string();
    case Value::Tag::boolean: return value.as_bool();
    case Value::Tag::date: return value.as_date().iso();
  }
  return nullptr;
}

Value value_from_json(const Json& json, const Attribute& attribute) {
  if (json.is_null()) return Value::null();
  auto fail = [&] {
    throw ParseError("value " + json.dump() + " does not fit attribute '" + attribute.name + "' (" +
                     std::string(to_string(attribute.type)) + ")");
  };
  switch (attribute.type) {
    case AttributeType::quantitative:
      if (!json.is_number()) fail();
      return Value(json.get<double>());
    case AttributeType::temporal: {
      if (!json.is_string()) fail();
      auto d = parse_date(json.get<std::string>());
      if (!d) fail();
      return Value(*d);
    }
    case AttributeType::nominal:
    case AttributeType::ordinal:
      if (json.is_string()) return Value(json.get<std::string>());
      if (json.is_boolean()) return Value(json.get<bool>() ? "true" : "false");
      fail();
  }
  return Value::null();
}

Json attribute_to_json(const Attribute& attribute) {
  Json j = {{"name", attribute.name}, {"type", std::string(to_string(attribute.type))}};
  if (!attribute.order.empty()) j["order"] = attribute.order;
  return j;
}

Attribute attribute_from_json(const Json& json) {
  Attribute a;
  a.name = detail::require_string(json, "name", "attribute");
  a.type = parse_attribute_type(detail::require_string(json, "type", "attribute '" + a.name + "'"));
  if (const Json* order = detail::optional_field(json, "order")) a.order = detail::as_string_list(*order, "order");
  return a;
}

Json schema_to_json(const Schema& schema) {
  Json arr = Json::array();
  for (const auto& a : schema) arr.push_back(attribute_to_json(a));
  return arr;
}

Schema schema_from_json(const Json& json) {
  if (!json.is_array()) throw ParseError("schema must be an array");
  Schema schema;
  for (const auto& a : json) schema.push_back(attribute_from_json(a));
  check_schema_names(schema);
  return schema;
}

Json table_to_json(const Table& table) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    Json row = Json::object();
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      row[table.schema()[c].name] = value_to_json(table.at(r, c));
    }
    rows.push_back(std::move(row));
  }
  return Json{{"name", table.name()}, {"schema", schema_to_json(table.schema())}, {"rows", std::move(rows)}};
}

Table table_from_json(const Json& json) {
  const std::string name = detail::require_string(json, "name", "table");
  Schema schema = schema_from_json(detail::require(json, "schema", "table '" + name + "'"));
  const Json& rows = detail::require(json, "rows", "table '" + name + "'");
  if (!rows.is_array()) throw ParseError("table '" + name + "': rows must be an array");
  std::vector<std::vector<Value>> columns(schema.size());
  std::size_t index = 0;
  for (const auto& row : rows) {
    if (!row.is_object()) throw ParseError("table '" + name + "': row " + std::to_string(index) + " is not an object");
    if (row.size() != schema.size()) {
      throw ParseError("table '" + name + "': row " + std::to_string(index) + " has " + std::to_string(row.size()) +
                       " keys, expected " + std::to_string(schema.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      auto it = row.find(schema[c].name);
      if (it == row.end()) {
        throw ParseError("table '" + name + "': row " + std::to_string(index) + " lacks '" + schema[c].name + "'");
      }
      columns[c].push_back(value_from_json(*it, schema[c]));
    }
    ++index;
  }
  if (schema.empty()) return Table::from_rows(name, {}, std::vector<std::vector<Value>>(rows.size()));
  return Table(name, std::move(schema), std::move(columns));
}

}  // namespace ig
