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

#include "ig/knowledge.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <mutex>
#include <set>

#include "ig/error.hpp"
#include "ig/table_json.hpp"
#include "json_util.hpp"

namespace ig {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool has(const std::vector<std::string>& list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::domain: return "domain";
    case NodeKind::analytic: return "analytic";
    case NodeKind::insight: return "insight";
    case NodeKind::task: return "task";
  }
  return "?";
}

NodeKind kind_of(const Node& node) { return static_cast<NodeKind>(node.index()); }

const NodeCore& core_of(const Node& node) {
  return std::visit([](const auto& n) -> const NodeCore& { return n.core; }, node);
}

NodeCore& core_of(Node& node) {
  return std::visit([](auto& n) -> NodeCore& { return n.core; }, node);
}

void throw_wrong_kind(std::string_view name) {
  throw GraphError("node '" + std::string(name) + "' has the wrong kind for this operation");
}

struct KnowledgeGraph::Cache {
  std::mutex mutex;
  std::map<std::pair<std::string, std::uint64_t>, AnalyticResult> entries;
  std::atomic<std::size_t> hits{0};
};

KnowledgeGraph::KnowledgeGraph() : cache_(std::make_shared<Cache>()) {}

const Concept& KnowledgeGraph::create_concept(std::string name, std::vector<std::string> parents) {
  if (name.empty() || is_wildcard(name)) throw GraphError("invalid concept name '" + name + "'");
  if (concept_index_.count(name)) throw GraphError("duplicate concept '" + name + "'");
  std::set<std::string> seen;
  for (const auto& p : parents) {
    if (!concept_index_.count(p)) throw GraphError("concept '" + name + "': unresolved parent concept '" + p + "'");
    if (!seen.insert(p).second) throw GraphError("concept '" + name + "': parent '" + p + "' listed twice");
  }
  concept_index_.emplace(name, concepts_.size());
  concepts_.push_back(Concept{std::move(name), std::move(parents)});
  return concepts_.back();
}

const Instance& KnowledgeGraph::create_instance(std::string name, std::string concept_name,
                                                InstanceMetadata metadata) {
  if (name.empty() || is_wildcard(name)) throw GraphError("invalid instance name '" + name + "'");
  if (instance_index_.count(name)) throw GraphError("duplicate instance '" + name + "'");
  if (!concept_index_.count(concept_name)) {
    throw GraphError("instance '" + name + "': unresolved concept '" + concept_name + "'");
  }
  check_schema_names(metadata.attributes);
  for (const auto& [key, value] : metadata.values) {
    auto attr = std::find_if(metadata.attributes.begin(), metadata.attributes.end(),
                             [&](const Attribute& a) { return a.name == key; });
    if (attr == metadata.attributes.end()) {
      throw GraphError("instance '" + name + "': metadata value '" + key + "' has no matching attribute");
    }
    check_cell(*attr, value);
  }
  instance_index_.emplace(name, instances_.size());
  instances_.push_back(Instance{std::move(name), std::move(concept_name), std::move(metadata)});
  return instances_.back();
}

void KnowledgeGraph::check_new_node_name(const std::string& name) const {
  if (name.empty() || is_wildcard(name)) throw GraphError("invalid node name '" + name + "'");
  if (contains_node(name)) throw GraphError("duplicate node name '" + name + "'");
}

const DomainNode& KnowledgeGraph::create_domain_node(std::string name, std::string instance,
                                                     std::optional<std::string> description) {
  DomainNode n;
  n.core.name = std::move(name);
  n.core.description = std::move(description);
  n.instance = std::move(instance);
  return std::get<DomainNode>(add_node(std::move(n)));
}

const AnalyticNode& KnowledgeGraph::create_analytic_node(std::string name, std::int64_t timestamp,
                                                         std::optional<TransformSpec> transform,
                                                         std::optional<ModelSpec> relationship,
                                                         std::optional<std::string> description,
                                                         std::optional<std::string> data_source) {
  AnalyticNode n;
  n.core.name = std::move(name);
  n.core.description = std::move(description);
  n.timestamp = timestamp;
  n.transform = std::move(transform);
  n.relationship = std::move(relationship);
  n.data_source = std::move(data_source);
  return std::get<AnalyticNode>(add_node(std::move(n)));
}

const Node& KnowledgeGraph::add_node(Node node) {
  NodeCore& core = core_of(node);
  check_new_node_name(core.name);
  if (!core.sources.empty() || !core.targets.empty() || !core.related.empty()) {
    throw GraphError("node '" + core.name + "': edges are added with add_source/add_target/add_related");
  }
  const std::string& name = core.name;
  auto require_kind = [&](const std::string& member, NodeKind kind, std::string_view role) {
    const Node* m = find_node(member);
    if (!m) throw GraphError("node '" + name + "': unresolved " + std::string(role) + " '" + member + "'");
    if (kind_of(*m) != kind) {
      throw GraphError("node '" + name + "': " + std::string(role) + " '" + member + "' is not a " +
                       std::string(to_string(kind)) + " node");
    }
  };
  auto check_members = [&](const MemberList& list, NodeKind kind, std::string_view role) {
    if (list.wildcard) return;
    if (list.names.empty()) throw GraphError("node '" + name + "': empty " + std::string(role) + " list");
    std::set<std::string> seen;
    for (const auto& m : list.names) {
      require_kind(m, kind, role);
      if (!seen.insert(m).second) throw GraphError("node '" + name + "': " + std::string(role) + " '" + m + "' listed twice");
    }
  };
  std::visit(Overloaded{
                 [&](const DomainNode& n) {
                   if (!instance_index_.count(n.instance)) {
                     throw GraphError("domain node '" + name + "': unresolved instance '" + n.instance + "'");
                   }
                 },
                 [&](const AnalyticNode& n) {
                   if (!n.transform && !n.relationship) {
                     throw GraphError("analytic node '" + name + "' needs a transform, a relationship, or both");
                   }
                   if (n.timestamp < 0) throw GraphError("analytic node '" + name + "': negative timestamp");
                 },
                 [&](const InsightNode& n) {
                   check_members(n.domain, NodeKind::domain, "domain member");
                   check_members(n.analytic, NodeKind::analytic, "analytic member");
                 },
                 [&](const TaskNode& n) {
                   require_kind(n.objective, NodeKind::insight, "objective");
                   std::set<std::string> seen;
                   for (const auto& i : n.insights) {
                     require_kind(i, NodeKind::insight, "insight");
                     if (!seen.insert(i).second) throw GraphError("task '" + name + "': insight '" + i + "' listed twice");
                   }
                 },
             },
             node);
  index_.emplace(name, nodes_.size());
  nodes_.push_back(std::move(node));
  return nodes_.back();
}

const Node* KnowledgeGraph::find_node(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const Node& KnowledgeGraph::node(std::string_view name) const {
  if (const Node* n = find_node(name)) return *n;
  throw GraphError("unknown node '" + std::string(name) + "'");
}

Node& KnowledgeGraph::mutable_node(std::string_view name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw GraphError("unknown node '" + std::string(name) + "'");
  return nodes_[it->second];
}

Node& KnowledgeGraph::mutable_node_for_testing(std::string_view name) { return mutable_node(name); }

Concept& KnowledgeGraph::mutable_concept_for_testing(std::string_view name) {
  auto it = concept_index_.find(name);
  if (it == concept_index_.end()) throw GraphError("unknown concept '" + std::string(name) + "'");
  return concepts_[it->second];
}

const Concept* KnowledgeGraph::find_concept(std::string_view name) const {
  auto it = concept_index_.find(name);
  return it == concept_index_.end() ? nullptr : &concepts_[it->second];
}

const Instance* KnowledgeGraph::find_instance(std::string_view name) const {
  auto it = instance_index_.find(name);
  return it == instance_index_.end() ? nullptr : &instances_[it->second];
}

bool KnowledgeGraph::reaches(const std::string& from, const std::string& to) const {
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const auto current = std::move(queue.front());
    queue.pop_front();
    if (current == to) return true;
    for (const auto& t : core(current).targets) {
      if (seen.insert(t).second) queue.push_back(t);
    }
  }
  return false;
}

EdgeOutcome KnowledgeGraph::add_source(std::string_view node_name, std::string_view other_name) {
  Node& n = mutable_node(node_name);
  Node& o = mutable_node(other_name);
  if (&n == &o) throw GraphError("self-edge on '" + std::string(node_name) + "'");
  NodeCore& nc = core_of(n);
  NodeCore& oc = core_of(o);
  if (has(nc.sources, oc.name)) return EdgeOutcome::duplicate;
  // New edge other -> node closes a cycle when node already reaches other.
  if (reaches(nc.name, oc.name)) {
    throw GraphError("edge '" + oc.name + "' -> '" + nc.name + "' would create a source/target cycle");
  }
  nc.sources.push_back(oc.name);
  oc.targets.push_back(nc.name);
  return EdgeOutcome::added;
}

EdgeOutcome KnowledgeGraph::add_target(std::string_view node_name, std::string_view other_name) {
  return add_source(other_name, node_name);
}

EdgeOutcome KnowledgeGraph::add_related(std::string_view node_name, std::string_view other_name) {
  Node& n = mutable_node(node_name);
  Node& o = mutable_node(other_name);
  if (&n == &o) throw GraphError("self-edge on '" + std::string(node_name) + "'");
  NodeCore& nc = core_of(n);
  NodeCore& oc = core_of(o);
  if (has(nc.related, oc.name)) return EdgeOutcome::duplicate;
  nc.related.push_back(oc.name);
  oc.related.push_back(nc.name);
  return EdgeOutcome::added;
}

void KnowledgeGraph::append_task_insight(std::string_view task, std::string insight) {
  auto* t = std::get_if<TaskNode>(&mutable_node(task));
  if (!t) throw_wrong_kind(task);
  t->insights.push_back(std::move(insight));
}

AnalyticResult compute_results(const AnalyticNode& node, const Datasets& datasets) {
  if (!node.relationship) return execute_pipeline(*node.transform, datasets);
  Table training;
  if (node.transform) {
    training = execute_pipeline(*node.transform, datasets);
  } else {
    if (!node.data_source) {
      throw SchemaError("analytic node '" + node.core.name + "' has a relationship but no dataSource to train on");
    }
    training = datasets.at(*node.data_source);
  }
  const auto model = RelationshipModel(*node.relationship).train(training);
  return model.evaluate(training);
}

AnalyticResult KnowledgeGraph::results(std::string_view name, const Datasets& datasets) const {
  const auto* analytic = std::get_if<AnalyticNode>(&node(name));
  if (!analytic) throw GraphError("node '" + std::string(name) + "' is not an analytic node");
  auto key = std::make_pair(std::string(name), datasets.identity());
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->entries.find(key); it != cache_->entries.end()) {
      ++cache_->hits;
      return it->second;
    }
  }
  auto result = compute_results(*analytic, datasets);
  std::lock_guard lock(cache_->mutex);
  return cache_->entries.try_emplace(std::move(key), std::move(result)).first->second;
}

std::size_t KnowledgeGraph::cache_hits() const { return cache_->hits.load(); }

// ---------------------------------------------------------------------------
// JSON

namespace {

Json members_to_json(const MemberList& list) {
  if (list.wildcard) return std::string(kWildcard);
  return list.names;
}

MemberList members_from_json(const Json& j, std::string_view ctx) {
  if (j.is_string() && is_wildcard(j.get<std::string>())) return MemberList::any();
  return MemberList::of(detail::as_string_list(j, ctx));
}

void core_to_json(const NodeCore& core, Json& out) {
  out["name"] = core.name;
  if (core.description) out["description"] = *core.description;
}

NodeCore core_from_json(const Json& j, std::string_view ctx) {
  NodeCore core;
  core.name = detail::require_string(j, "name", ctx);
  if (const Json* d = detail::optional_field(j, "description")) core.description = detail::as_string(*d, ctx);
  return core;
}

Json metadata_to_json(const InstanceMetadata& m) {
  Json values = Json::object();
  for (const auto& [k, v] : m.values) values[k] = value_to_json(v);
  return {{"attributes", schema_to_json(m.attributes)}, {"values", values}};
}

InstanceMetadata metadata_from_json(const Json& j) {
  InstanceMetadata m;
  if (const Json* a = detail::optional_field(j, "attributes")) m.attributes = schema_from_json(*a);
  if (const Json* v = detail::optional_field(j, "values")) {
    if (!v->is_object()) throw ParseError("instance metadata values must be an object");
    for (const auto& [key, value] : v->items()) {
      auto attr = std::find_if(m.attributes.begin(), m.attributes.end(), [&](const Attribute& a) { return a.name == key; });
      if (attr == m.attributes.end()) throw GraphError("metadata value '" + key + "' has no matching attribute");
      m.values.emplace(key, value_from_json(value, *attr));
    }
  }
  return m;
}

}  // namespace

Json node_to_json(const Node& node) {
  Json out = {{"kind", to_string(kind_of(node))}};
  core_to_json(core_of(node), out);
  std::visit(Overloaded{
                 [&](const DomainNode& n) { out["instance"] = n.instance; },
                 [&](const AnalyticNode& n) {
                   out["timestamp"] = n.timestamp;
                   if (n.transform) out["transform"] = transform_spec_to_json(*n.transform);
                   if (n.relationship) out["relationship"] = model_spec_to_json(*n.relationship);
                   if (n.data_source) out["dataSource"] = *n.data_source;
                 },
                 [&](const InsightNode& n) {
                   out["domain"] = members_to_json(n.domain);
                   out["analytic"] = members_to_json(n.analytic);
                 },
                 [&](const TaskNode& n) {
                   out["objective"] = n.objective;
                   out["insights"] = n.insights;
                 },
             },
             node);
  return out;
}

Json graph_to_json(const KnowledgeGraph& graph) {
  Json concepts = Json::array();
  for (const auto& c : graph.concepts()) concepts.push_back({{"name", c.name}, {"parents", c.parents}});
  Json instances = Json::array();
  for (const auto& i : graph.instances()) {
    instances.push_back({{"name", i.name}, {"concept", i.concept_name}, {"metadata", metadata_to_json(i.metadata)}});
  }
  Json nodes = Json::array();
  Json edges = Json::array();
  std::set<std::pair<std::string, std::string>> related_seen;
  for (const auto& n : graph.nodes()) {
    nodes.push_back(node_to_json(n));
    const auto& core = core_of(n);
    for (const auto& t : core.targets) edges.push_back({{"from", core.name}, {"to", t}, {"type", "sourceTarget"}});
  }
  for (const auto& n : graph.nodes()) {
    const auto& core = core_of(n);
    for (const auto& r : core.related) {
      if (related_seen.count({r, core.name})) continue;
      related_seen.insert({core.name, r});
      edges.push_back({{"from", core.name}, {"to", r}, {"type", "related"}});
    }
  }
  return {{"concepts", concepts}, {"instances", instances}, {"nodes", nodes}, {"edges", edges}};
}

KnowledgeGraph graph_from_json(const Json& json) {
  if (!json.is_object()) throw ParseError("graph JSON must be an object");
  KnowledgeGraph g;
  auto array = [&](const char* key) -> Json {
    const Json* a = detail::optional_field(json, key);
    if (!a) return Json::array();
    if (!a->is_array()) throw ParseError(std::string("graph JSON: ") + key + " must be an array");
    return *a;
  };

  // Concepts may list parents declared later; create in dependency order.
  std::vector<Concept> pending;
  for (const auto& c : array("concepts")) {
    Concept concept_value{detail::require_string(c, "name", "concept"), {}};
    if (const Json* p = detail::optional_field(c, "parents")) concept_value.parents = detail::as_string_list(*p, "concept parents");
    pending.push_back(std::move(concept_value));
  }
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](const Concept& c) {
      return std::all_of(c.parents.begin(), c.parents.end(), [&](const std::string& p) { return g.find_concept(p) != nullptr; });
    });
    if (ready == pending.end()) {
      throw GraphError("concept '" + pending.front().name + "' has an unresolved or cyclic parent");
    }
    g.create_concept(ready->name, ready->parents);
    pending.erase(ready);
  }

  for (const auto& i : array("instances")) {
    const Json* m = detail::optional_field(i, "metadata");
    g.create_instance(detail::require_string(i, "name", "instance"), detail::require_string(i, "concept", "instance"),
                      m ? metadata_from_json(*m) : InstanceMetadata{});
  }

  // Keep document order, deferring a node until the members it cites exist.
  std::vector<Node> pending_nodes;
  for (const auto& n : array("nodes")) {
    const std::string kind = detail::require_string(n, "kind", "node");
    const std::string ctx = kind + " node";
    if (kind == "domain") {
      NodeCore core = core_from_json(n, ctx);
      pending_nodes.emplace_back(DomainNode{std::move(core), detail::require_string(n, "instance", ctx)});
    } else if (kind == "analytic") {
      AnalyticNode a;
      a.core = core_from_json(n, ctx);
      const Json& ts = detail::require(n, "timestamp", ctx);
      if (!ts.is_number_integer()) throw ParseError(ctx + ": timestamp must be an integer");
      a.timestamp = ts.get<std::int64_t>();
      if (const Json* t = detail::optional_field(n, "transform")) a.transform = transform_spec_from_json(*t);
      if (const Json* r = detail::optional_field(n, "relationship")) a.relationship = model_spec_from_json(*r);
      if (const Json* d = detail::optional_field(n, "dataSource")) a.data_source = detail::as_string(*d, ctx);
      pending_nodes.emplace_back(std::move(a));
    } else if (kind == "insight") {
      NodeCore core = core_from_json(n, ctx);
      pending_nodes.emplace_back(InsightNode{std::move(core), members_from_json(detail::require(n, "domain", ctx), ctx),
                                             members_from_json(detail::require(n, "analytic", ctx), ctx)});
    } else if (kind == "task") {
      TaskNode t{core_from_json(n, ctx), detail::require_string(n, "objective", ctx), {}};
      if (const Json* i = detail::optional_field(n, "insights")) t.insights = detail::as_string_list(*i, ctx);
      pending_nodes.emplace_back(std::move(t));
    } else {
      throw ParseError("unknown node kind '" + kind + "'");
    }
  }
  auto cited = [](const Node& n) {
    std::vector<std::string> out;
    if (const auto* in = std::get_if<InsightNode>(&n)) {
      out = in->domain.names;
      out.insert(out.end(), in->analytic.names.begin(), in->analytic.names.end());
    } else if (const auto* t = std::get_if<TaskNode>(&n)) {
      out = t->insights;
      out.push_back(t->objective);
    }
    return out;
  };
  while (!pending_nodes.empty()) {
    auto ready = std::find_if(pending_nodes.begin(), pending_nodes.end(), [&](const Node& n) {
      const auto names = cited(n);
      return std::all_of(names.begin(), names.end(), [&](const std::string& c) { return g.contains_node(c); });
    });
    // Nothing ready: add the first anyway so add_node reports what is missing.
    if (ready == pending_nodes.end()) ready = pending_nodes.begin();
    g.add_node(std::move(*ready));
    pending_nodes.erase(ready);
  }

  for (const auto& e : array("edges")) {
    const auto from = detail::require_string(e, "from", "edge");
    const auto to = detail::require_string(e, "to", "edge");
    const auto type = detail::require_string(e, "type", "edge");
    if (type == "sourceTarget") {
      g.add_source(to, from);
    } else if (type == "related") {
      g.add_related(from, to);
    } else {
      throw ParseError("unknown edge type '" + type + "'");
    }
  }
  return g;
}

Json analytic_result_to_json(const AnalyticResult& result) {
  return std::visit(Overloaded{
                        [](const Table& t) -> Json {
                          return {{"type", "table"}, {"rows", t.row_count()}, {"columns", t.column_count()},
                                  {"table", table_to_json(t)}};
                        },
                        [](const EvaluationReport& r) -> Json {
                          return {{"type", "evaluation"}, {"report", evaluation_report_to_json(r)}};
                        },
                    },
                    result);
}

}  // namespace ig
