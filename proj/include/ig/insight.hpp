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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ig/knowledge.hpp"

namespace ig {

const InsightNode& create_insight(KnowledgeGraph& graph, std::string name, MemberList domain, MemberList analytic,
                                  std::optional<std::string> description = std::nullopt);

/// No wildcard in either member list nor inside any analytic member's specs.
bool is_fully_specified(const KnowledgeGraph& graph, const InsightNode& node);
bool is_fully_specified(const KnowledgeGraph& graph, std::string_view insight);

/// Analytic members agree when they are the same node, or when the template's
/// specs match the concrete ones under match_with_wildcards.
bool analytic_matches(const AnalyticNode& tmpl, const AnalyticNode& concrete);

/// Domain: objective list is "*" or a subset of the insight's. Analytic:
/// objective list is "*" or each member pairs with a distinct matching
/// insight member. Throws GraphError if `insight` is not fully specified.
bool satisfies(const KnowledgeGraph& graph, std::string_view insight, std::string_view objective);

/// Every fully specified insight satisfying `objective`, sorted by name.
std::vector<std::string> matching_insights(const KnowledgeGraph& graph, std::string_view objective);

const TaskNode& create_task(KnowledgeGraph& graph, std::string name, std::string objective,
                            std::vector<std::string> insights = {},
                            std::optional<std::string> description = std::nullopt);
/// Adds a fully specified insight to an existing task.
void attach_insight(KnowledgeGraph& graph, std::string_view task, std::string insight);

enum class TaskStatus { open, satisfied, closed_null };
std::string_view to_string(TaskStatus status);

TaskStatus task_status(const KnowledgeGraph& graph, std::string_view task);

/// Replacements for an objective's wildcards. A list binding replaces a "*"
/// member list; `analytic_members` maps a template analytic member (one whose
/// specs hold wildcards) to the concrete node standing in for it.
struct Bindings {
  std::optional<std::vector<std::string>> domain;
  std::optional<std::vector<std::string>> analytic;
  std::map<std::string, std::string> analytic_members;
};

/// Registers a fully specified copy of `objective` named `new_name`, with the
/// objective linked as its source. Throws GraphError on uncovered wildcards,
/// stray bindings, unresolved or mismatched replacements.
const InsightNode& complete(KnowledgeGraph& graph, std::string_view objective, const Bindings& bindings,
                            std::string new_name);

}  // namespace ig
