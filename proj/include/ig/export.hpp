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
#include <vector>

#include "ig/knowledge.hpp"

namespace ig {

enum class DotEdgeStyle { solid, dashed, dotted };

/// Solid: source -> target. Dashed: related (undirected). Dotted: an input
/// feeding a structure (concept -> instance -> domain node -> insight,
/// analytic node -> insight, objective/insight -> task).
struct DotEdge {
  std::string from;
  std::string to;
  DotEdgeStyle style = DotEdgeStyle::solid;
  bool operator==(const DotEdge&) const = default;
};

std::vector<DotEdge> dot_edges(const KnowledgeGraph& graph);

/// Graphviz digraph of concepts, instances and nodes, labeled name + kind.
std::string graph_to_dot(const KnowledgeGraph& graph);

/// Double-quoted DOT ID with backslashes and quotes escaped; other bytes,
/// newlines included, pass through.
std::string dot_quote(const std::string& id);
/// Double-quoted label where a newline becomes the \n line break.
std::string dot_label(const std::string& text);

}  // namespace ig
