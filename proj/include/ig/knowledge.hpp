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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ig/datasets.hpp"
#include "ig/json.hpp"
#include "ig/relationships.hpp"
#include "ig/table.hpp"
#include "ig/transforms.hpp"

namespace ig {

struct Concept {
  std::string name;
  std::vector<std::string> parents;
  bool operator==(const Concept&) const = default;
};

struct InstanceMetadata {
  Schema attributes;
  Record values;
  bool operator==(const InstanceMetadata&) const = default;
};

struct Instance {
  std::string name;
  std::string concept_name;
  InstanceMetadata metadata;
  bool operator==(const Instance&) const = default;
};

/// Fields shared by every node kind.
struct NodeCore {
  std::string name;
  std::optional<std::string> description;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  std::vector<std::string> related;
  bool operator==(const NodeCore&) const = default;
};

struct DomainNode {
  NodeCore core;
  std::string instance;
  bool operator==(const DomainNode&) const = default;
};

/// A transform, a relationship, or both (the model then trains on the
/// transform output). Relationship-only nodes name their training table in
/// `data_source`.
struct AnalyticNode {
  NodeCore core;
  std::int64_t timestamp = 0;  // ms since the Unix epoch
  std::optional<TransformSpec> transform;
  std::optional<ModelSpec> relationship;
  std::optional<std::string> data_source;
  bool operator==(const AnalyticNode&) const = default;
};

/// Either "*" or an explicit list of node names.
struct MemberList {
  bool wildcard = false;
  std::vector<std::string> names;

  static MemberList any() { return {true, {}}; }
  static MemberList of(std::vector<std::string> names) { return {false, std::move(names)}; }
  bool operator==(const MemberList&) const = default;
};

/// Insights and objectives share this kind; an objective is an insight with
/// a wildcard somewhere.
struct InsightNode {
  NodeCore core;
  MemberList domain;
  MemberList analytic;
  bool operator==(const InsightNode&) const = default;
};

struct TaskNode {
  NodeCore core;
  std::string objective;
  std::vector<std::string> insights;
  bool operator==(const TaskNode&) const = default;
};

using Node = std::variant<DomainNode, AnalyticNode, InsightNode, TaskNode>;

enum class NodeKind { domain, analytic, insight, task };
std::string_view to_string(NodeKind kind);

NodeKind kind_of(const Node& node);
const NodeCore& core_of(const Node& node);
NodeCore& core_of(Node& node);

enum class EdgeType { source_target, related };
enum class EdgeOutcome { added, duplicate };

using AnalyticResult = std::variant<Table, EvaluationReport>;

/// Name-indexed registry of concepts, instances and nodes. Mutations keep
/// edges symmetric and the source/target relation acyclic.
class KnowledgeGraph {
 public:
  KnowledgeGraph();

  const Concept& create_concept(std::string name, std::vector<std::string> parents = {});
  const Instance& create_instance(std::string name, std::string concept_name, InstanceMetadata metadata = {});
  const DomainNode& create_domain_node(std::string name, std::string instance,
                                       std::optional<std::string> description = std::nullopt);
  const AnalyticNode& create_analytic_node(std::string name, std::int64_t timestamp,
                                           std::optional<TransformSpec> transform,
                                           std::optional<ModelSpec> relationship,
                                           std::optional<std::string> description = std::nullopt,
                                           std::optional<std::string> data_source = std::nullopt);
  /// Registers an insight or task after checking name uniqueness and that every
  /// referenced node exists with the right kind. Content rules live in insight.hpp.
  const Node& add_node(Node node);

  /// `other` becomes a source of `node` (and `node` a target of `other`).
  EdgeOutcome add_source(std::string_view node, std::string_view other);
  EdgeOutcome add_target(std::string_view node, std::string_view other);
  EdgeOutcome add_related(std::string_view node, std::string_view other);

  bool contains_node(std::string_view name) const { return index_.find(name) != index_.end(); }
  const Node* find_node(std::string_view name) const;
  /// Throws GraphError for unknown names.
  const Node& node(std::string_view name) const;
  const NodeCore& core(std::string_view name) const { return core_of(node(name)); }
  template <class T>
  const T& node_as(std::string_view name) const;

  const Concept* find_concept(std::string_view name) const;
  const Instance* find_instance(std::string_view name) const;

  /// Registration order.
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::vector<Instance>& instances() const { return instances_; }

  /// Appends to a task's insight list (no content checks; see insight.hpp).
  void append_task_insight(std::string_view task, std::string insight);

  /// Table for transform-only nodes, in-sample evaluation otherwise. Memoized
  /// per (node, dataset identity).
  AnalyticResult results(std::string_view name, const Datasets& datasets) const;
  std::size_t cache_hits() const;

  /// Bypasses every invariant; lets tests build corrupted graphs for validate().
  Node& mutable_node_for_testing(std::string_view name);
  Concept& mutable_concept_for_testing(std::string_view name);

 private:
  void check_new_node_name(const std::string& name) const;
  Node& mutable_node(std::string_view name);
  bool reaches(const std::string& from, const std::string& to) const;

  std::vector<Concept> concepts_;
  std::vector<Instance> instances_;
  std::vector<Node> nodes_;
  std::map<std::string, std::size_t, std::less<>> concept_index_;
  std::map<std::string, std::size_t, std::less<>> instance_index_;
  std::map<std::string, std::size_t, std::less<>> index_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

[[noreturn]] void throw_wrong_kind(std::string_view name);

template <class T>
const T& KnowledgeGraph::node_as(std::string_view name) const {
  const T* p = std::get_if<T>(&node(name));
  if (!p) throw_wrong_kind(name);
  return *p;
}

/// Runs a node's analytic content without the cache.
AnalyticResult compute_results(const AnalyticNode& node, const Datasets& datasets);

/// {concepts, instances, nodes, edges}. Source/target edges are listed once
/// per pair as {from, to} with from a source of to; related edges once per pair.
Json graph_to_json(const KnowledgeGraph& graph);
/// Rebuilds through the checked create/add operations, so malformed input
/// fails with ParseError or GraphError.
KnowledgeGraph graph_from_json(const Json& json);

Json node_to_json(const Node& node);
Json analytic_result_to_json(const AnalyticResult& result);

}  // namespace ig
