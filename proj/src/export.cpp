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

#include "ig/export.hpp"

#include <set>
#include <sstream>

#include "ig/error.hpp"
#include "ig/insight.hpp"

namespace ig {

namespace {

std::string_view style_name(DotEdgeStyle s) {
  switch (s) {
    case DotEdgeStyle::solid: return "solid";
    case DotEdgeStyle::dashed: return "dashed";
    case DotEdgeStyle::dotted: return "dotted";
  }
  return "solid";
}

std::string node_kind_label(const KnowledgeGraph& graph, const Node& n) {
  if (const auto* in = std::get_if<InsightNode>(&n)) {
    bool full = false;
    try {
      full = is_fully_specified(graph, *in);
    } catch (const Error&) {
    }
    return full ? "insight" : "objective";
  }
  return std::string(to_string(kind_of(n)));
}

}  // namespace

std::string dot_quote(const std::string& id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string dot_label(const std::string& text) {
  // Labels are escString: a newline becomes the \n line break.
  std::string out = "\"";
  for (char c : text) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::vector<DotEdge> dot_edges(const KnowledgeGraph& graph) {
  std::vector<DotEdge> out;
  for (const auto& c : graph.concepts()) {
    for (const auto& p : c.parents) out.push_back({p, c.name, DotEdgeStyle::dotted});
  }
  for (const auto& i : graph.instances()) out.push_back({i.concept_name, i.name, DotEdgeStyle::dotted});
  for (const auto& n : graph.nodes()) {
    const auto& core = core_of(n);
    if (const auto* d = std::get_if<DomainNode>(&n)) out.push_back({d->instance, core.name, DotEdgeStyle::dotted});
    if (const auto* in = std::get_if<InsightNode>(&n)) {
      for (const auto& m : in->domain.names) out.push_back({m, core.name, DotEdgeStyle::dotted});
      for (const auto& m : in->analytic.names) out.push_back({m, core.name, DotEdgeStyle::dotted});
    }
    if (const auto* t = std::get_if<TaskNode>(&n)) {
      out.push_back({t->objective, core.name, DotEdgeStyle::dotted});
      for (const auto& i : t->insights) out.push_back({i, core.name, DotEdgeStyle::dotted});
    }
  }
  for (const auto& n : graph.nodes()) {
    const auto& core = core_of(n);
    for (const auto& t : core.targets) out.push_back({core.name, t, DotEdgeStyle::solid});
  }
  std::set<std::pair<std::string, std::string>> related;
  for (const auto& n : graph.nodes()) {
    const auto& core = core_of(n);
    for (const auto& r : core.related) {
      if (related.count({r, core.name})) continue;
      related.insert({core.name, r});
      out.push_back({core.name, r, DotEdgeStyle::dashed});
    }
  }
  return out;
}

std::string graph_to_dot(const KnowledgeGraph& graph) {
  std::ostringstream out;
  out << "digraph knowledge {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  // TODO: concepts, instances and nodes have separate namespaces, so a name
  // reused across them collapses into one DOT vertex; prefix IDs on collision.
  for (const auto& c : graph.concepts()) {
    out << "  " << dot_quote(c.name) << " [label=" << dot_label(c.name + "\n(concept)") << ", shape=ellipse];\n";
  }
  for (const auto& i : graph.instances()) {
    out << "  " << dot_quote(i.name) << " [label=" << dot_label(i.name + "\n(instance)") << ", shape=note];\n";
  }
  for (const auto& n : graph.nodes()) {
    const auto& name = core_of(n).name;
    const auto kind = node_kind_label(graph, n);
    const char* shape = kind == "task" ? "box3d" : kind == "objective" ? "hexagon" : "box";
    out << "  " << dot_quote(name) << " [label=" << dot_label(name + "\n(" + kind + ")") << ", shape=" << shape
        << "];\n";
  }
  for (const auto& e : dot_edges(graph)) {
    out << "  " << dot_quote(e.from) << " -> " << dot_quote(e.to);
    if (e.style == DotEdgeStyle::dashed) {
      out << " [style=dashed, dir=none]";
    } else if (e.style != DotEdgeStyle::solid) {
      out << " [style=" << style_name(e.style) << "]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ig
