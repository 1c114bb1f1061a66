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

#include "ig/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ig/error.hpp"

namespace ig {

namespace {

using Field = std::optional<std::string>;

// Splits text into records of fields. Quoted empty fields become "", unquoted
// empty fields become nullopt.
std::vector<std::vector<Field>> split_records(std::string_view text) {
  std::vector<std::vector<Field>> records;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  if (text.empty()) return records;

  std::vector<Field> record;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  auto finish_field = [&] {
    if (quoted || !field.empty()) {
      record.emplace_back(std::move(field));
    } else {
      record.emplace_back(std::nullopt);
    }
    field.clear();
    quoted = false;
  };
  auto finish_record = [&] {
    finish_field();
    records.push_back(std::move(record));
    record.clear();
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '"' && field.empty() && !quoted) {
      const std::size_t open = i;
      quoted = true;
      ++i;
      for (;;) {
        if (i >= text.size()) throw ParseError("unterminated quoted field", open);
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        field.push_back(text[i++]);
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        throw ParseError("unexpected character after closing quote", i);
      }
      continue;
    }
    if (c == ',') {
      finish_field();
      ++i;
    } else if (c == '\n' || c == '\r') {
      finish_record();
      i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
      if (i >= text.size()) return records;
    } else {
      if (quoted) throw ParseError("unexpected character after closing quote", i);
      field.push_back(c);
      ++i;
    }
  }
  finish_record();
  return records;
}

bool looks_numeric(const std::string& s) { return parse_number(s).has_value(); }
bool looks_date(const std::string& s) { return parse_date(s).has_value(); }

Value convert(const Attribute& attr, const Field& field) {
  if (!field || (field->empty() && attr.type != AttributeType::nominal && attr.type != AttributeType::ordinal)) {
    return Value::null();
  }
  switch (attr.type) {
    case AttributeType::quantitative: {
      auto n = parse_number(*field);
      return n ? Value(*n) : Value::null();
    }
    case AttributeType::temporal: {
      auto d = parse_date(*field);
      return d ? Value(*d) : Value::null();
    }
    case AttributeType::nominal:
    case AttributeType::ordinal: return Value(*field);
  }
  return Value::null();
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(out)) return std::nullopt;
  return out;
}

CsvDocument parse_csv(std::string_view text) {
  auto records = split_records(text);
  CsvDocument doc;
  if (records.empty()) throw ParseError("CSV input has no header line");
  for (auto& name : records.front()) doc.header.push_back(name.value_or(""));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != doc.header.size()) {
      throw ParseError("ragged row " + std::to_string(r - 1) + ": " + std::to_string(records[r].size()) +
                       " fields, header has " + std::to_string(doc.header.size()));
    }
    doc.rows.push_back(std::move(records[r]));
  }
  return doc;
}

Schema infer_schema(const std::vector<std::string>& header, const std::vector<std::vector<Field>>& sample_rows) {
  Schema schema;
  for (std::size_t c = 0; c < header.size(); ++c) {
    bool any = false;
    bool numeric = true;
    bool date = true;
    for (const auto& row : sample_rows) {
      if (c >= row.size() || !row[c] || row[c]->empty()) continue;
      any = true;
      numeric = numeric && looks_numeric(*row[c]);
      date = date && looks_date(*row[c]);
      if (!numeric && !date) break;
    }
    AttributeType type = AttributeType::nominal;
    if (any && numeric) type = AttributeType::quantitative;
    else if (any && date) type = AttributeType::temporal;
    schema.push_back(Attribute{header[c], type, {}});
  }
  check_schema_names(schema);
  return schema;
}

Table read_csv(std::string_view text, std::string table_name, const std::optional<Schema>& schema) {
  CsvDocument doc = parse_csv(text);
  Schema resolved;
  std::vector<std::size_t> source_index;
  if (schema) {
    check_schema_names(*schema);
    std::set<std::string> header_names(doc.header.begin(), doc.header.end());
    std::set<std::string> schema_names;
    for (const auto& a : *schema) schema_names.insert(a.name);
    if (header_names.size() != doc.header.size()) throw SchemaError("duplicate names in CSV header");
    if (header_names != schema_names) {
      std::string offending;
      for (const auto& n : header_names) {
        if (!schema_names.count(n)) offending += (offending.empty() ? "" : ", ") + ("header-only '" + n + "'");
      }
      for (const auto& n : schema_names) {
        if (!header_names.count(n)) offending += (offending.empty() ? "" : ", ") + ("schema-only '" + n + "'");
      }
      throw SchemaError("CSV header does not match schema: " + offending);
    }
    resolved = *schema;
    for (const auto& a : resolved) {
      source_index.push_back(
          static_cast<std::size_t>(std::find(doc.header.begin(), doc.header.end(), a.name) - doc.header.begin()));
    }
  } else {
    resolved = infer_schema(doc.header, doc.rows);
    for (std::size_t i = 0; i < resolved.size(); ++i) source_index.push_back(i);
  }

  std::vector<std::vector<Value>> columns(resolved.size());
  for (std::size_t c = 0; c < resolved.size(); ++c) {
    columns[c].reserve(doc.rows.size());
    for (const auto& row : doc.rows) columns[c].push_back(convert(resolved[c], row[source_index[c]]));
  }
  if (resolved.empty()) return Table::from_rows(std::move(table_name), {}, std::vector<std::vector<Value>>(doc.rows.size()));
  return Table(std::move(table_name), std::move(resolved), std::move(columns));
}

Table load_csv(const std::filesystem::path& path, const std::optional<Schema>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_csv(buf.str(), path.stem().string(), schema);
}

std::string write_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    if (c) out += ',';
    out += quote_if_needed(table.schema()[c].name);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      if (c) out += ',';
      const Value& v = table.at(r, c);
      if (v.is_string() && v.as_string().empty()) {
        out += "\"\"";
      } else {
        out += quote_if_needed(v.to_string());
      }
    }
    out += '\n';
  }
  return out;
}

void save_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write CSV file '" + path.string() + "'");
  out << write_csv(table);
}

}  // namespace ig
