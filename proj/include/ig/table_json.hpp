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

#include "ig/json.hpp"
#include "ig/table.hpp"

namespace ig {

Json value_to_json(const Value& value);
/// Interprets a JSON scalar according to the attribute type. Temporal values
/// are ISO-8601 strings. Throws ParseError on a shape mismatch.
Value value_from_json(const Json& json, const Attribute& attribute);

Json attribute_to_json(const Attribute& attribute);
Attribute attribute_from_json(const Json& json);

Json schema_to_json(const Schema& schema);
Schema schema_from_json(const Json& json);

/// `{ "name": str, "schema": [{"name", "type"}], "rows": [ {attr: value|null} ] }`
Json table_to_json(const Table& table);
Table table_from_json(const Json& json);

}  // namespace ig
