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

#include "ig/insight.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ig/error.hpp"

namespace ig {

namespace {

bool has_wildcard_specs(const AnalyticNode& n) {
  return (n.transform && contains_wildcard(*n.transform)) || (n.relationship && contains_wildcard(*n.relationship)) ||
         (n.data_source && is_wildcard(*n.data_source));
}

const InsightNode& insight_node(const KnowledgeGraph& graph, std::string_view name) {
  return graph.node_as<InsightNode>(name);
}

// Kuhn's augmenting-path bipartite matching; true when every left vertex is matched.
bool perfect_left_matching(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t right_count) {
  std::vector<std::optional<std::size_t>> owner(right_count);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t left, std::vector<bool>& seen) {
    for (auto r : adjacency[left]) {
      if (seen[r]) continue;
      seen[r] = true;
      if (!owner[r] || augment(*owner[r], seen)) {
        owner[r] = left;
        return true;
      }
    }
    return false;
  };
  for (std::size_t l = 0; l < adjacency.size(); ++l) {
    std::vector<bool> seen(right_count, false);
    if (!augment(l, seen)) return false;
  }
  return true;
}

}  // namespace

const InsightNode& create_insight(KnowledgeGraph& graph, std::string name, MemberList domain, MemberList analytic,
                                  std::optional<std::string> description) {
  InsightNode n;
  n.core.name = std::move(name);
  n.core.description = std::move(description);
  n.domain = std::move(domain);
  n.analytic = std::move(analytic);
  return std::get<InsightNode>(graph.add_node(std::move(n)));
}

bool is_fully_specified(const KnowledgeGraph& graph, const InsightNode& node) {
  if (node.domain.wildcard || node.analytic.wildcard) return false;
  return std::none_of(node.analytic.names.begin(), node.analytic.names.end(), [&](const std::string& a) {
    return has_wildcard_specs(graph.node_as<AnalyticNode>(a));
  });
}

bool is_fully_specified(const KnowledgeGraph& graph, std::string_view insight) {
  return is_fully_specified(graph, insight_node(graph, insight));
}

bool analytic_matches(const AnalyticNode& tmpl, const AnalyticNode& concrete) {
  if (tmpl.core.name == concrete.core.name) return true;
  if (tmpl.transform.has_value() != concrete.transform.has_value()) return false;
  if (tmpl.relationship.has_value() != concrete.relationship.has_value()) return false;
  if (tmpl.transform && !match_with_wildcards(*tmpl.transform, *concrete.transform)) return false;
  if (tmpl.relationship && !match_with_wildcards(*tmpl.relationship, *concrete.relationship)) return false;
  if (tmpl.data_source && !is_wildcard(*tmpl.data_source) && tmpl.data_source != concrete.data_source) return false;
  return true;
}

bool satisfies(const KnowledgeGraph& graph, std::string_view insight, std::string_view objective) {
  const auto& in = insight_node(graph, insight);
  const auto& obj = insight_node(graph, objective);
  if (!is_fully_specified(graph, in)) {
    throw GraphError("'" + std::string(insight) + "' is not fully specified, so it cannot satisfy an objective");
  }
  if (!obj.domain.wildcard) {
    for (const auto& d : obj.domain.names) {
      if (std::find(in.domain.names.begin(), in.domain.names.end(), d) == in.domain.names.end()) return false;
    }
  }
  if (obj.analytic.wildcard) return true;
  std::vector<std::vector<std::size_t>> adjacency(obj.analytic.names.size());
  for (std::size_t o = 0; o < obj.analytic.names.size(); ++o) {
    const auto& tmpl = graph.node_as<AnalyticNode>(obj.analytic.names[o]);
    for (std::size_t i = 0; i < in.analytic.names.size(); ++i) {
      if (analytic_matches(tmpl, graph.node_as<AnalyticNode>(in.analytic.names[i]))) adjacency[o].push_back(i);
    }
  }
  return perfect_left_matching(adjacency, in.analytic.names.size());
}

std::vector<std::string> matching_insights(const KnowledgeGraph& graph, std::string_view objective) {
  insight_node(graph, objective);
  std::vector<std::string> out;
  for (const auto& n : graph.nodes()) {
    const auto* in = std::get_if<InsightNode>(&n);
    if (in && is_fully_specified(graph, *in) && satisfies(graph, in->core.name, objective)) out.push_back(in->core.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const TaskNode& create_task(KnowledgeGraph& graph, std::string name, std::string objective,
                            std::vector<std::string> insights, std::optional<std::string> description) {
  for (const auto& i : insights) {
    if (graph.contains_node(i) && std::holds_alternative<InsightNode>(graph.node(i)) && !is_fully_specified(graph, i)) {
      throw GraphError("task '" + name + "': insight '" + i + "' is not fully specified");
    }
  }
  TaskNode t;
  t.core.name = std::move(name);
  t.core.description = std::move(description);
  t.objective = std::move(objective);
  t.insights = std::move(insights);
  return std::get<TaskNode>(graph.add_node(std::move(t)));
}

void attach_insight(KnowledgeGraph& graph, std::string_view task, std::string insight) {
  const auto& t = graph.node_as<TaskNode>(task);
  if (!is_fully_specified(graph, insight)) {
    throw GraphError("task '" + std::string(task) + "': insight '" + insight + "' is not fully specified");
  }
  if (std::find(t.insights.begin(), t.insights.end(), insight) != t.insights.end()) {
    throw GraphError("task '" + std::string(task) + "' already lists insight '" + insight + "'");
  }
  graph.append_task_insight(task, std::move(insight));
}

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::open: return "open";
    case TaskStatus::satisfied: return "satisfied";
    case TaskStatus::closed_null: return "closedNull";
  }
  return "?";
}

TaskStatus task_status(const KnowledgeGraph& graph, std::string_view task) {
  const auto& t = graph.node_as<TaskNode>(task);
  if (t.insights.empty()) return TaskStatus::open;
  for (const auto& i : t.insights) {
    if (satisfies(graph, i, t.objective)) return TaskStatus::satisfied;
  }
  return TaskStatus::closed_null;
}

const InsightNode& complete(KnowledgeGraph& graph, std::string_view objective, const Bindings& bindings,
                            std::string new_name) {
  const InsightNode obj = insight_node(graph, objective);
  const std::string who = "completing '" + std::string(objective) + "'";
  InsightNode out;
  out.core.name = std::move(new_name);
  out.core.description = obj.core.description;

  if (obj.domain.wildcard) {
    if (!bindings.domain) throw GraphError(who + ": domain wildcard is not bound");
    out.domain = MemberList::of(*bindings.domain);
  } else {
    if (bindings.domain) throw GraphError(who + ": stray domain binding, the domain list has no wildcard");
    out.domain = obj.domain;
  }

  if (obj.analytic.wildcard) {
    if (!bindings.analytic) throw GraphError(who + ": analytic wildcard is not bound");
    if (!bindings.analytic_members.empty()) throw GraphError(who + ": stray member binding under a wildcard list");
    for (const auto& a : *bindings.analytic) {
      if (has_wildcard_specs(graph.node_as<AnalyticNode>(a))) throw GraphError(who + ": '" + a + "' still has wildcards");
    }
    out.analytic = MemberList::of(*bindings.analytic);
  } else {
    if (bindings.analytic) throw GraphError(who + ": stray analytic binding, the analytic list has no wildcard");
    std::set<std::string> used;
    out.analytic.wildcard = false;
    for (const auto& member : obj.analytic.names) {
      const auto& tmpl = graph.node_as<AnalyticNode>(member);
      if (!has_wildcard_specs(tmpl)) {
        out.analytic.names.push_back(member);
        continue;
      }
      auto it = bindings.analytic_members.find(member);
      if (it == bindings.analytic_members.end()) throw GraphError(who + ": template member '" + member + "' is not bound");
      const auto& concrete = graph.node_as<AnalyticNode>(it->second);
      if (has_wildcard_specs(concrete)) throw GraphError(who + ": replacement '" + it->second + "' still has wildcards");
      if (!analytic_matches(tmpl, concrete)) {
        throw GraphError(who + ": replacement '" + it->second + "' does not match template '" + member + "'");
      }
      used.insert(member);
      out.analytic.names.push_back(it->second);
    }
    for (const auto& [from, to] : bindings.analytic_members) {
      if (!used.count(from)) throw GraphError(who + ": stray binding for '" + from + "'");
    }
  }

  const std::string name = std::get<InsightNode>(graph.add_node(std::move(out))).core.name;
  graph.add_source(name, objective);
  return graph.node_as<InsightNode>(name);
}

}  // namespace ig
