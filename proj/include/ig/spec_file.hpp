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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ig/datasets.hpp"
#include "ig/json.hpp"
#include "ig/knowledge.hpp"

namespace ig {

/// A loaded graph plus the tables its analytic nodes run over.
struct Workspace {
  KnowledgeGraph graph;
  Datasets datasets;
  std::vector<std::string> warnings;
};

struct LoadOptions {
  /// Dataset name -> CSV path, replacing the path in the graph file.
  std::map<std::string, std::string> data_overrides;
  /// Replaces the seed of every isolation-forest model.
  std::optional<std::uint64_t> seed;
};

/// Spec document:
///   datasets            [{name, path | rows, schema?}]
///   concepts            [{name, parents?}]
///   instances           [{name, concept, metadata?}]
///   domainNodes         [{name, instance, description?}]
///   transforms          [{name, sources, transforms}]
///   relationshipModels  [{name, kind, inputs, output?, hyperparameters?}]
///   analyticNodes       [{name, timestamp, transform?, relationship?, dataSource?, description?}]
///   insights            [{name, domain, analytic, description?}]   lists or "*"
///   tasks               [{name, objective, insights?, description?}]
///   edges               [{from, to, type: sourceTarget | related}]
/// Names may be used before their declaration. Relative dataset paths resolve
/// against `base_dir`.
Workspace load_spec(const Json& spec, const std::filesystem::path& base_dir, const LoadOptions& options = {});
Workspace load_spec_file(const std::filesystem::path& path, const LoadOptions& options = {});

}  // namespace ig
