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

#include "ig/metrics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "ig/error.hpp"
#include "ig/insight.hpp"

namespace ig {

namespace {

// Longest source chains for every node. Back edges of a (corrupted) cyclic
// graph are ignored so audits still terminate.
std::map<std::string, std::size_t, std::less<>> all_depths(const KnowledgeGraph& graph) {
  std::map<std::string, std::size_t, std::less<>> memo;
  std::set<std::string> active;
  std::function<std::size_t(const std::string&)> visit = [&](const std::string& name) -> std::size_t {
    if (auto it = memo.find(name); it != memo.end()) return it->second;
    if (active.count(name)) return 0;
    active.insert(name);
    std::size_t best = 0;
    for (const auto& s : graph.core(name).sources) {
      if (graph.contains_node(s)) best = std::max(best, visit(s));
    }
    active.erase(name);
    return memo[name] = best + 1;
  };
  for (const auto& n : graph.nodes()) visit(core_of(n).name);
  return memo;
}

}  // namespace

std::size_t depth(const KnowledgeGraph& graph, std::string_view node) {
  graph.node(node);
  return all_depths(graph).find(node)->second;
}

double BreadthCells::ratio() const {
  if (dataset == 0) return 0.0;
  return static_cast<double>(input + output) / static_cast<double>(dataset);
}

BreadthCells breadth_cells(const KnowledgeGraph& graph, std::string_view node, const Datasets& datasets) {
  const auto& a = graph.node_as<AnalyticNode>(node);
  const auto result = graph.results(node, datasets);
  BreadthCells cells;
  if (a.transform) {
    for (const auto& [source, attribute] : referenced_attributes(*a.transform, datasets)) {
      cells.input += datasets.at(source).row_count();
    }
    std::set<std::string> sources(a.transform->sources.begin(), a.transform->sources.end());
    for (const auto& s : sources) cells.dataset += cell_count(datasets.at(s));
  } else {
    const auto& report = std::get<EvaluationReport>(result);
    const std::size_t used = a.relationship->inputs.size() + (a.relationship->output ? 1 : 0);
    cells.input = report.rows * used;
    cells.dataset = cell_count(datasets.at(*a.data_source));
  }
  if (const auto* table = std::get_if<Table>(&result)) {
    cells.output = cell_count(*table);
  } else {
    cells.output = std::get<EvaluationReport>(result).scalar_count();
  }
  return cells;
}

double breadth(const KnowledgeGraph& graph, std::string_view node, const Datasets& datasets) {
  return breadth_cells(graph, node, datasets).ratio();
}

MetricReport metric_report(const KnowledgeGraph& graph, std::string_view node, const Datasets& datasets) {
  MetricReport r;
  r.node = std::string(node);
  r.depth = depth(graph, node);
  if (std::holds_alternative<AnalyticNode>(graph.node(node))) {
    r.cells = breadth_cells(graph, node, datasets);
    if (r.cells->dataset > 0) r.breadth = r.cells->ratio();
  }
  return r;
}

Json metric_report_to_json(const MetricReport& r) {
  Json out = {{"nodeName", r.node}, {"depth", r.depth}};
  if (r.breadth) out["breadth"] = *r.breadth;
  if (r.cells) {
    out["inputCells"] = r.cells->input;
    out["outputCells"] = r.cells->output;
    out["datasetCells"] = r.cells->dataset;
  }
  return out;
}

GraphStats graph_stats(const KnowledgeGraph& graph) {
  GraphStats s;
  s.concepts = graph.concepts().size();
  s.instances = graph.instances().size();
  const auto depths = all_depths(graph);
  for (const auto& n : graph.nodes()) {
    const auto& core = core_of(n);
    switch (kind_of(n)) {
      case NodeKind::domain: ++s.domain_nodes; break;
      case NodeKind::analytic: ++s.analytic_nodes; break;
      case NodeKind::insight: {
        const auto& in = std::get<InsightNode>(n);
        bool full = false;
        try {
          full = is_fully_specified(graph, in);
        } catch (const GraphError&) {
          // dangling member: counted as an objective, reported by validate()
        }
        ++(full ? s.insights : s.objectives);
        break;
      }
      case NodeKind::task: ++s.tasks; break;
    }
    s.source_target_edges += core.targets.size();
    s.related_edges += core.related.size();
    if (core.sources.empty()) s.roots.push_back(core.name);
    s.max_depth = std::max(s.max_depth, depths.at(core.name));
  }
  s.related_edges /= 2;
  return s;
}

Json graph_stats_to_json(const GraphStats& s) {
  return {{"concepts", s.concepts},
          {"instances", s.instances},
          {"domainNodes", s.domain_nodes},
          {"analyticNodes", s.analytic_nodes},
          {"insights", s.insights},
          {"objectives", s.objectives},
          {"tasks", s.tasks},
          {"sourceTargetEdges", s.source_target_edges},
          {"relatedEdges", s.related_edges},
          {"maxDepth", s.max_depth},
          {"roots", s.roots}};
}

std::vector<Violation> validate(const KnowledgeGraph& graph) {
  std::vector<Violation> out;
  auto report = [&](std::string rule, std::vector<std::string> nodes, std::string message) {
    out.push_back(Violation{std::move(rule), std::move(nodes), std::move(message)});
  };

  // Concepts and instances.
  std::set<std::string> concept_names;
  for (const auto& c : graph.concepts()) {
    if (!concept_names.insert(c.name).second) report("concept.unique", {c.name}, "duplicate concept name");
    for (const auto& p : c.parents) {
      if (!graph.find_concept(p)) report("concept.parent", {c.name}, "unresolved parent concept '" + p + "'");
      if (p == c.name) report("concept.acyclic", {c.name}, "concept is its own parent");
    }
  }
  {
    std::map<std::string, int> state;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& name) {
      if (state[name] == 1) return true;
      if (state[name] == 2) return false;
      state[name] = 1;
      const Concept* c = graph.find_concept(name);
      bool found = false;
      if (c) {
        for (const auto& p : c->parents) found = found || (p != name && cyclic(p));
      }
      state[name] = 2;
      return found;
    };
    for (const auto& c : graph.concepts()) {
      state.clear();
      if (cyclic(c.name)) {
        report("concept.acyclic", {c.name}, "concept hierarchy cycle through '" + c.name + "'");
      }
    }
  }
  for (const auto& i : graph.instances()) {
    if (!graph.find_concept(i.concept_name)) {
      report("instance.concept", {i.name}, "unresolved concept '" + i.concept_name + "'");
    }
    for (const auto& [key, value] : i.metadata.values) {
      const bool declared = std::any_of(i.metadata.attributes.begin(), i.metadata.attributes.end(),
                                        [&](const Attribute& a) { return a.name == key; });
      if (!declared) report("instance.metadata", {i.name}, "metadata value '" + key + "' has no attribute");
    }
  }

  // Node names and edges.
  std::set<std::string> names;
  for (const auto& n : graph.nodes()) {
    const auto& core = core_of(n);
    if (!names.insert(core.name).second) report("node.unique", {core.name}, "duplicate node name");
  }
  auto check_list = [&](const NodeCore& core, const std::vector<std::string>& list, std::string_view label,
                        auto&& mirror, std::string_view mirror_label) {
    std::set<std::string> seen;
    for (const auto& other : list) {
      if (other == core.name) report("edge.self", {core.name}, "self-edge in " + std::string(label));
      if (!seen.insert(other).second) {
        report("edge.duplicate", {core.name, other}, "'" + other + "' repeated in " + std::string(label));
      }
      const Node* o = graph.find_node(other);
      if (!o) {
        report("edge.resolves", {core.name, other}, "unresolved node '" + other + "' in " + std::string(label));
        continue;
      }
      const auto& back = mirror(core_of(*o));
      if (std::find(back.begin(), back.end(), core.name) == back.end()) {
        report("edge.symmetry", {core.name, other},
               "'" + other + "' is in " + std::string(label) + " of '" + core.name + "' but '" + core.name +
                   "' is not in " + std::string(mirror_label) + " of '" + other + "'");
      }
    }
  };
  for (const auto& n : graph.nodes()) {
    const auto& core = core_of(n);
    check_list(core, core.sources, "sources", [](const NodeCore& c) -> const auto& { return c.targets; }, "targets");
    check_list(core, core.targets, "targets", [](const NodeCore& c) -> const auto& { return c.sources; }, "sources");
    check_list(core, core.related, "related", [](const NodeCore& c) -> const auto& { return c.related; }, "related");
  }

  // Source/target cycles (three-colour DFS over targets).
  {
    std::map<std::string, int> color;
    std::vector<std::string> stack;
    std::set<std::string> reported;
    std::function<void(const std::string&)> dfs = [&](const std::string& name) {
      color[name] = 1;
      stack.push_back(name);
      for (const auto& t : graph.core(name).targets) {
        if (!graph.contains_node(t) || t == name) continue;
        if (color[t] == 1) {
          auto start = std::find(stack.begin(), stack.end(), t);
          std::vector<std::string> cycle(start, stack.end());
          if (reported.insert(t).second) report("edge.acyclic", cycle, "source/target cycle through '" + t + "'");
        } else if (color[t] == 0) {
          dfs(t);
        }
      }
      stack.pop_back();
      color[name] = 2;
    };
    for (const auto& n : graph.nodes()) {
      if (color[core_of(n).name] == 0) dfs(core_of(n).name);
    }
  }

  // Per-kind content.
  auto member_kind = [&](const std::string& owner, const std::string& member, NodeKind kind, const char* rule) {
    const Node* m = graph.find_node(member);
    if (!m) {
      report(rule, {owner, member}, "unresolved member '" + member + "'");
      return false;
    }
    if (kind_of(*m) != kind) {
      report(rule, {owner, member}, "'" + member + "' is not a " + std::string(to_string(kind)) + " node");
      return false;
    }
    return true;
  };
  for (const auto& n : graph.nodes()) {
    const auto& name = core_of(n).name;
    if (const auto* d = std::get_if<DomainNode>(&n)) {
      if (!graph.find_instance(d->instance)) report("domain.instance", {name}, "unresolved instance '" + d->instance + "'");
    } else if (const auto* a = std::get_if<AnalyticNode>(&n)) {
      if (!a->transform && !a->relationship) report("analytic.content", {name}, "neither transform nor relationship");
      if (a->timestamp < 0) report("analytic.timestamp", {name}, "negative timestamp");
    } else if (const auto* in = std::get_if<InsightNode>(&n)) {
      for (const auto* list : {&in->domain, &in->analytic}) {
        if (!list->wildcard && list->names.empty()) report("insight.members", {name}, "empty member list");
      }
      bool resolved = true;
      for (const auto& m : in->domain.names) resolved = member_kind(name, m, NodeKind::domain, "insight.members") && resolved;
      for (const auto& m : in->analytic.names) {
        resolved = member_kind(name, m, NodeKind::analytic, "insight.members") && resolved;
      }
      (void)resolved;
    } else if (const auto* t = std::get_if<TaskNode>(&n)) {
      member_kind(name, t->objective, NodeKind::insight, "task.objective");
      for (const auto& i : t->insights) {
        if (!member_kind(name, i, NodeKind::insight, "task.insights")) continue;
        try {
          if (!is_fully_specified(graph, i)) {
            report("task.insights", {name, i}, "insight '" + i + "' is not fully specified");
          }
        } catch (const GraphError&) {
          // the insight's own dangling member is reported above
        }
      }
    }
  }
  return out;
}

Json violations_to_json(const std::vector<Violation>& violations) {
  Json out = Json::array();
  for (const auto& v : violations) out.push_back({{"rule", v.rule}, {"nodes", v.nodes}, {"message", v.message}});
  return out;
}

}  // namespace ig
