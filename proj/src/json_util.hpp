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

#include <string>
#include <string_view>
#include <vector>

#include "ig/error.hpp"
#include "ig/json.hpp"

namespace ig::detail {

inline const Json& require(const Json& obj, std::string_view key, std::string_view context) {
  if (!obj.is_object()) throw ParseError(std::string(context) + ": expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(context) + ": missing field '" + std::string(key) + "'");
  return *it;
}

inline std::string require_string(const Json& obj, std::string_view key, std::string_view context) {
  const Json& v = require(obj, key, context);
  if (!v.is_string()) throw ParseError(std::string(context) + ": field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

inline std::string as_string(const Json& v, std::string_view context) {
  if (!v.is_string()) throw ParseError(std::string(context) + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<std::string> as_string_list(const Json& v, std::string_view context) {
  if (!v.is_array()) throw ParseError(std::string(context) + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(as_string(e, context));
  return out;
}

inline const Json* optional_field(const Json& obj, std::string_view key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

inline Json parse_json_text(std::string_view text, std::string_view context) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(context) + ": " + e.what(), e.byte);
  }
}

}  // namespace ig::detail
