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

#include "ig/value.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <functional>

#include "ig/error.hpp"

namespace ig {

namespace chr = std::chrono;

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) {
    throw ParseError("invalid calendar date " + std::to_string(year) + "-" +
                     std::to_string(month) + "-" + std::to_string(day));
  }
  return Date{static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count())};
}

namespace {

chr::year_month_day to_ymd(const Date& d) { return chr::year_month_day{chr::sys_days{chr::days{d.days}}}; }

// Parses an unsigned decimal field of [min_len, max_len] digits.
std::optional<int> parse_field(std::string_view text, std::size_t min_len, std::size_t max_len) {
  if (text.size() < min_len || text.size() > max_len) return std::nullopt;
  int out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return out;
}

std::optional<Date> checked_date(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count())};
}

}  // namespace

int Date::year() const { return static_cast<int>(to_ymd(*this).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(*this).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(*this).day()); }

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    auto y = parse_field(text.substr(0, 4), 4, 4);
    auto m = parse_field(text.substr(5, 2), 2, 2);
    auto d = parse_field(text.substr(8, 2), 2, 2);
    if (y && m && d) return checked_date(*y, *m, *d);
    return std::nullopt;
  }
  const auto first = text.find('/');
  if (first == std::string_view::npos) return std::nullopt;
  const auto second = text.find('/', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  auto m = parse_field(text.substr(0, first), 1, 2);
  auto d = parse_field(text.substr(first + 1, second - first - 1), 1, 2);
  auto y = parse_field(text.substr(second + 1), 4, 4);
  if (y && m && d) return checked_date(*y, *m, *d);
  return std::nullopt;
}

std::string_view to_string(AttributeType type) {
  switch (type) {
    case AttributeType::nominal: return "nominal";
    case AttributeType::ordinal: return "ordinal";
    case AttributeType::quantitative: return "quantitative";
    case AttributeType::temporal: return "temporal";
  }
  return "nominal";
}

AttributeType parse_attribute_type(std::string_view text) {
  if (text == "nominal") return AttributeType::nominal;
  if (text == "ordinal") return AttributeType::ordinal;
  if (text == "quantitative") return AttributeType::quantitative;
  if (text == "temporal") return AttributeType::temporal;
  throw ParseError("unknown attribute type '" + std::string(text) + "'");
}

std::string_view to_string(Value::Tag tag) {
  switch (tag) {
    case Value::Tag::null: return "null";
    case Value::Tag::number: return "number";
    case Value::Tag::string: return "string";
    case Value::Tag::boolean: return "boolean";
    case Value::Tag::date: return "date";
  }
  return "null";
}

namespace {

[[noreturn]] void wrong_tag(Value::Tag want, Value::Tag got) {
  throw SchemaError("expected " + std::string(to_string(want)) + " value, got " +
                    std::string(to_string(got)));
}

}  // namespace

double Value::as_number() const {
  if (!is_number()) wrong_tag(Tag::number, tag());
  return std::get<double>(data_);
}

const std::string& Value::as_string() const {
  if (!is_string()) wrong_tag(Tag::string, tag());
  return std::get<std::string>(data_);
}

bool Value::as_bool() const {
  if (!is_bool()) wrong_tag(Tag::boolean, tag());
  return std::get<bool>(data_);
}

Date Value::as_date() const {
  if (!is_date()) wrong_tag(Tag::date, tag());
  return std::get<Date>(data_);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string Value::to_string() const {
  switch (tag()) {
    case Tag::null: return "";
    case Tag::number: return format_number(std::get<double>(data_));
    case Tag::string: return std::get<std::string>(data_);
    case Tag::boolean: return std::get<bool>(data_) ? "true" : "false";
    case Tag::date: return std::get<Date>(data_).iso();
  }
  return "";
}

std::strong_ordering compare(const Value& lhs, const Value& rhs) {
  if (lhs.is_null() || rhs.is_null()) throw SchemaError("cannot order null values");
  if (lhs.tag() != rhs.tag()) {
    throw SchemaError("cannot compare " + std::string(to_string(lhs.tag())) + " with " +
                      std::string(to_string(rhs.tag())));
  }
  switch (lhs.tag()) {
    case Value::Tag::number: {
      const double a = lhs.as_number();
      const double b = rhs.as_number();
      if (a < b) return std::strong_ordering::less;
      if (b < a) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    case Value::Tag::string: return lhs.as_string().compare(rhs.as_string()) <=> 0;
    case Value::Tag::boolean: return lhs.as_bool() <=> rhs.as_bool();
    case Value::Tag::date: return lhs.as_date() <=> rhs.as_date();
    case Value::Tag::null: break;
  }
  return std::strong_ordering::equal;
}

std::size_t hash_value(const Value& value) {
  const auto tag = static_cast<std::size_t>(value.tag());
  std::size_t h = 0;
  switch (value.tag()) {
    case Value::Tag::null: break;
    case Value::Tag::number: {
      const double d = value.as_number();
      h = std::hash<double>{}(d == 0.0 ? 0.0 : d);
      break;
    }
    case Value::Tag::string: h = std::hash<std::string>{}(value.as_string()); break;
    case Value::Tag::boolean: h = value.as_bool() ? 1 : 2; break;
    case Value::Tag::date: h = std::hash<std::int32_t>{}(value.as_date().days); break;
  }
  return h ^ (tag * 0x9e3779b97f4a7c15ULL);
}

}  // namespace ig
