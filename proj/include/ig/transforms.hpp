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

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ig/datasets.hpp"
#include "ig/expr.hpp"
#include "ig/json.hpp"
#include "ig/table.hpp"

namespace ig {

struct GroupBy {
  std::vector<std::string> keys;
  bool operator==(const GroupBy&) const = default;
};

/// `out_name = expr` where expr is a single count()/sum/mean/min/max call.
struct AggregateSpec {
  std::string out_name;
  Expr expr;
  bool operator==(const AggregateSpec&) const = default;
};

struct Rollup {
  std::vector<AggregateSpec> aggregates;
  bool operator==(const Rollup&) const = default;
};

enum class SortDirection { asc, desc };

struct SortKey {
  std::string attribute;
  SortDirection direction = SortDirection::asc;
  bool operator==(const SortKey&) const = default;
};

struct OrderBy {
  std::vector<SortKey> keys;
  bool operator==(const OrderBy&) const = default;
};

struct Filter {
  Expr predicate;
  bool operator==(const Filter&) const = default;
};

struct Derive {
  std::string out_name;
  Expr expr;
  bool operator==(const Derive&) const = default;
};

/// Either `bin_count` equal-width bins over [min, max] or fixed `step` width
/// starting at min. Adds `<out_name>_start` and `<out_name>_end`.
struct Bin {
  std::string attribute;
  std::optional<std::size_t> bin_count;
  std::optional<double> step;
  std::string out_name;
  bool operator==(const Bin&) const = default;
};

struct JoinKey {
  std::string left;
  std::string right;
  bool operator==(const JoinKey&) const = default;
};

/// Inner equi-join against another listed source.
struct Join {
  std::string right_source;
  std::vector<JoinKey> on;
  bool operator==(const Join&) const = default;
};

/// Whole-step placeholder; only meaningful in objective templates.
struct WildcardStep {
  bool operator==(const WildcardStep&) const = default;
};

using TransformStep = std::variant<WildcardStep, GroupBy, Rollup, OrderBy, Filter, Derive, Bin, Join>;

struct TransformSpec {
  std::vector<std::string> sources;
  std::vector<TransformStep> steps;
  bool operator==(const TransformSpec&) const = default;
};

/// A source table attribute: (source name, attribute name).
using SourceAttribute = std::pair<std::string, std::string>;

struct PipelineResult {
  Table table;
  std::set<SourceAttribute> referenced;
};

bool contains_wildcard(const TransformStep& step);
bool contains_wildcard(const TransformSpec& spec);

/// Runs the steps left to right over `datasets`. Throws NotExecutableError when
/// `spec` has wildcards and SchemaError for unresolved sources, unknown
/// attributes, type errors or aggregate misuse.
Table execute_pipeline(const TransformSpec& spec, const Datasets& datasets);

/// Same as execute_pipeline, also reporting every source attribute touched.
PipelineResult execute_pipeline_traced(const TransformSpec& spec, const Datasets& datasets);

/// Source attributes mentioned by any step (group keys, aggregate arguments,
/// expression columns, join keys, bin attributes). Columns created inside the
/// pipeline are not source attributes.
std::set<SourceAttribute> referenced_attributes(const TransformSpec& spec, const Datasets& datasets);

/// Positional structural match; wildcard names and whole-step wildcards in the
/// template match anything at that position. Step lists must have equal length.
bool match_with_wildcards(const TransformSpec& tmpl, const TransformSpec& concrete);

Json transform_spec_to_json(const TransformSpec& spec);
TransformSpec transform_spec_from_json(const Json& json);

}  // namespace ig
