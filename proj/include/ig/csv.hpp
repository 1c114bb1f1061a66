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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ig/table.hpp"

namespace ig {

/// Raw RFC-4180 content. An unquoted empty field is std::nullopt; a quoted
/// empty field ("") is an empty string.
struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<std::string>>> rows;
};

/// Throws ParseError on unterminated quotes or ragged rows (the message names
/// the zero-based data row).
CsvDocument parse_csv(std::string_view text);

/// Per column: all numeric (ignoring nulls/empties) is quantitative, all
/// ISO-8601 or MM/DD/YYYY dates is temporal, anything else nominal. Columns with
/// no non-empty sample are nominal. Throws SchemaError on duplicate names.
Schema infer_schema(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::optional<std::string>>>& sample_rows);

/// Builds a typed table from CSV text. With a schema, header names must match
/// the schema names as a set and columns take the schema's order.
Table read_csv(std::string_view text, std::string table_name, const std::optional<Schema>& schema = std::nullopt);

/// Loads a file; the table is named after the file stem. Throws IoError when the
/// file cannot be read.
Table load_csv(const std::filesystem::path& path, const std::optional<Schema>& schema = std::nullopt);

std::string write_csv(const Table& table);
void save_csv(const Table& table, const std::filesystem::path& path);

/// Strict full-token numeric parse; rejects non-finite results.
std::optional<double> parse_number(std::string_view text);

}  // namespace ig
