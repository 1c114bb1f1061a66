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
#include <string>
#include <string_view>
#include <vector>

#include "ig/datasets.hpp"
#include "ig/json.hpp"
#include "ig/knowledge.hpp"

namespace ig {

/// Nodes on the longest source chain ending at `node`; a root has depth 1.
std::size_t depth(const KnowledgeGraph& graph, std::string_view node);

struct BreadthCells {
  std::size_t input = 0;
  std::size_t output = 0;
  std::size_t dataset = 0;
  /// (input + output) / dataset; not clamped. Zero when dataset is zero.
  double ratio() const;
  bool operator==(const BreadthCells&) const = default;
};

/// Transform nodes: one cell per row of each referenced source attribute in,
/// result table cells out. Relationship-only nodes: usable rows times
/// (inputs + output) in, report scalars out. Nodes with both: the
/// transform's input cells in, report scalars out. The denominator sums the
/// cells of every source table.
BreadthCells breadth_cells(const KnowledgeGraph& graph, std::string_view node, const Datasets& datasets);
double breadth(const KnowledgeGraph& graph, std::string_view node, const Datasets& datasets);

struct MetricReport {
  std::string node;
  std::size_t depth = 1;
  std::optional<double> breadth;
  std::optional<BreadthCells> cells;
};

MetricReport metric_report(const KnowledgeGraph& graph, std::string_view node, const Datasets& datasets);
Json metric_report_to_json(const MetricReport& report);

struct GraphStats {
  std::size_t concepts = 0;
  std::size_t instances = 0;
  std::size_t domain_nodes = 0;
  std::size_t analytic_nodes = 0;
  std::size_t insights = 0;    // fully specified insight nodes
  std::size_t objectives = 0;  // insight nodes holding a wildcard
  std::size_t tasks = 0;
  std::size_t source_target_edges = 0;
  std::size_t related_edges = 0;
  std::size_t max_depth = 0;
  std::vector<std::string> roots;  // registration order
  bool operator==(const GraphStats&) const = default;
};

GraphStats graph_stats(const KnowledgeGraph& graph);
Json graph_stats_to_json(const GraphStats& stats);

struct Violation {
  std::string rule;
  std::vector<std::string> nodes;
  std::string message;
};

/// Audits every graph invariant; empty when the graph is well formed.
std::vector<Violation> validate(const KnowledgeGraph& graph);
Json violations_to_json(const std::vector<Violation>& violations);

}  // namespace ig
