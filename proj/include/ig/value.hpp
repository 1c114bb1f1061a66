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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ig {

/// Placeholder token for unspecified positions in objectives and templates.
inline constexpr std::string_view kWildcard = "*";

inline bool is_wildcard(std::string_view text) { return text == kWildcard; }

/// Calendar date stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  static Date from_ymd(int year, unsigned month, unsigned day);

  int year() const;
  unsigned month() const;
  unsigned day() const;
  /// YYYY-MM-DD
  std::string iso() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

/// Accepts YYYY-MM-DD and MM/DD/YYYY (one- or two-digit month and day).
std::optional<Date> parse_date(std::string_view text);

enum class AttributeType { nominal, ordinal, quantitative, temporal };

std::string_view to_string(AttributeType type);
/// Throws ParseError for anything other than the four lowercase names.
AttributeType parse_attribute_type(std::string_view text);

struct Attribute {
  std::string name;
  AttributeType type = AttributeType::nominal;
  // Category order for ordinal attributes; empty means "compare as nominal".
  std::vector<std::string> order;

  bool operator==(const Attribute&) const = default;
};

/// Tagged cell value. Equality is structural (null == null); ordering between
/// values goes through compare().
class Value {
 public:
  enum class Tag { null, number, string, boolean, date };

  Value() = default;
  Value(double v) : data_(v) {}
  Value(int v) : data_(static_cast<double>(v)) {}
  Value(long v) : data_(static_cast<double>(v)) {}
  Value(long long v) : data_(static_cast<double>(v)) {}
  Value(unsigned long v) : data_(static_cast<double>(v)) {}
  Value(unsigned long long v) : data_(static_cast<double>(v)) {}
  Value(bool v) : data_(v) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(std::string_view v) : data_(std::string(v)) {}
  Value(const char* v) : data_(std::string(v)) {}
  Value(Date v) : data_(v) {}

  static Value null() { return {}; }

  Tag tag() const { return static_cast<Tag>(data_.index()); }
  bool is_null() const { return data_.index() == 0; }
  bool is_number() const { return tag() == Tag::number; }
  bool is_string() const { return tag() == Tag::string; }
  bool is_bool() const { return tag() == Tag::boolean; }
  bool is_date() const { return tag() == Tag::date; }

  double as_number() const;
  const std::string& as_string() const;
  bool as_bool() const;
  Date as_date() const;

  /// Text used for CSV cells and diagnostics; null renders as the empty string.
  std::string to_string() const;

  bool operator==(const Value& other) const = default;

 private:
  std::variant<std::monostate, double, std::string, bool, Date> data_;
};

std::string_view to_string(Value::Tag tag);

/// Shortest decimal text that round-trips the double.
std::string format_number(double value);

/// Total order over two non-null values with the same tag. Throws SchemaError
/// for mixed tags or null operands.
std::strong_ordering compare(const Value& lhs, const Value& rhs);

std::size_t hash_value(const Value& value);

struct ValueHash {
  std::size_t operator()(const Value& v) const { return hash_value(v); }
};

}  // namespace ig
