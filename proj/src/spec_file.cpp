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

#include "ig/spec_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ig/csv.hpp"
#include "ig/error.hpp"
#include "ig/insight.hpp"
#include "ig/table_json.hpp"
#include "json_util.hpp"

namespace ig {

namespace {

const Json& section(const Json& spec, const char* key) {
  static const Json empty = Json::array();
  const Json* s = detail::optional_field(spec, key);
  if (!s) return empty;
  if (!s->is_array()) throw ParseError(std::string("spec: '") + key + "' must be an array");
  return *s;
}

std::optional<std::string> optional_string(const Json& j, const char* key, std::string_view ctx) {
  const Json* v = detail::optional_field(j, key);
  if (!v) return std::nullopt;
  return detail::as_string(*v, ctx);
}

MemberList members(const Json& j, std::string_view ctx) {
  if (j.is_string() && is_wildcard(j.get<std::string>())) return MemberList::any();
  return MemberList::of(detail::as_string_list(j, ctx));
}

Table load_dataset(const Json& d, const std::filesystem::path& base_dir, const LoadOptions& options) {
  const std::string name = detail::require_string(d, "name", "dataset");
  const std::string ctx = "dataset '" + name + "'";
  std::optional<Schema> schema;
  if (const Json* s = detail::optional_field(d, "schema")) schema = schema_from_json(*s);
  if (auto it = options.data_overrides.find(name); it != options.data_overrides.end()) {
    return load_csv(it->second, schema).renamed(name);
  }
  if (const Json* p = detail::optional_field(d, "path")) {
    std::filesystem::path path = detail::as_string(*p, ctx);
    if (path.is_relative()) path = base_dir / path;
    return load_csv(path, schema).renamed(name);
  }
  if (const Json* rows = detail::optional_field(d, "rows")) {
    if (!schema) throw ParseError(ctx + ": inline rows need a schema");
    return table_from_json(Json{{"name", name}, {"schema", *detail::optional_field(d, "schema")}, {"rows", *rows}});
  }
  throw ParseError(ctx + ": needs a path or inline rows");
}

}  // namespace

Workspace load_spec(const Json& spec, const std::filesystem::path& base_dir, const LoadOptions& options) {
  if (!spec.is_object()) throw ParseError("spec must be a JSON object");
  Workspace ws;

  // Pass 1: collect and check names.
  std::set<std::string> dataset_names;
  for (const auto& d : section(spec, "datasets")) {
    const auto name = detail::require_string(d, "name", "dataset");
    if (!dataset_names.insert(name).second) throw GraphError("duplicate dataset '" + name + "'");
  }
  std::map<std::string, TransformSpec> transforms;
  for (const auto& t : section(spec, "transforms")) {
    const auto name = detail::require_string(t, "name", "transform");
    if (!transforms.emplace(name, transform_spec_from_json(t)).second) {
      throw GraphError("duplicate transform '" + name + "'");
    }
  }
  std::map<std::string, ModelSpec> models;
  for (const auto& m : section(spec, "relationshipModels")) {
    auto model = model_spec_from_json(m);
    if (options.seed && model.kind == RelationshipKind::isolation_forest) model.hyperparameters.seed = options.seed;
    const auto name = model.name;
    if (!models.emplace(name, std::move(model)).second) throw GraphError("duplicate relationship model '" + name + "'");
  }
  std::set<std::string> node_names;
  for (const char* key : {"domainNodes", "analyticNodes", "insights", "tasks"}) {
    for (const auto& n : section(spec, key)) {
      const auto name = detail::require_string(n, "name", key);
      if (!node_names.insert(name).second) throw GraphError("duplicate node name '" + name + "'");
    }
  }

  // Pass 2: build in dependency order.
  for (const auto& d : section(spec, "datasets")) {
    auto table = load_dataset(d, base_dir, options);
    std::string name = table.name();
    ws.datasets.add(std::move(name), std::move(table));
  }

  std::vector<Concept> pending;
  for (const auto& c : section(spec, "concepts")) {
    Concept value{detail::require_string(c, "name", "concept"), {}};
    if (const Json* p = detail::optional_field(c, "parents")) value.parents = detail::as_string_list(*p, "concept parents");
    pending.push_back(std::move(value));
  }
  std::set<std::string> declared;
  for (const auto& c : pending) {
    if (!declared.insert(c.name).second) throw GraphError("duplicate concept '" + c.name + "'");
  }
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](const Concept& c) {
      return std::all_of(c.parents.begin(), c.parents.end(),
                         [&](const std::string& p) { return ws.graph.find_concept(p) != nullptr; });
    });
    if (ready == pending.end()) {
      const auto& c = pending.front();
      for (const auto& p : c.parents) {
        if (!declared.count(p)) throw GraphError("concept '" + c.name + "': unresolved parent concept '" + p + "'");
      }
      throw GraphError("concept hierarchy cycle involving '" + c.name + "'");
    }
    ws.graph.create_concept(ready->name, ready->parents);
    pending.erase(ready);
  }

  for (const auto& i : section(spec, "instances")) {
    InstanceMetadata metadata;
    if (const Json* m = detail::optional_field(i, "metadata")) {
      if (const Json* a = detail::optional_field(*m, "attributes")) metadata.attributes = schema_from_json(*a);
      if (const Json* v = detail::optional_field(*m, "values")) {
        if (!v->is_object()) throw ParseError("instance metadata values must be an object");
        for (const auto& [key, value] : v->items()) {
          auto attr = std::find_if(metadata.attributes.begin(), metadata.attributes.end(),
                                   [&](const Attribute& a) { return a.name == key; });
          if (attr == metadata.attributes.end()) {
            throw GraphError("instance metadata value '" + key + "' has no matching attribute");
          }
          metadata.values.emplace(key, value_from_json(value, *attr));
        }
      }
    }
    ws.graph.create_instance(detail::require_string(i, "name", "instance"),
                             detail::require_string(i, "concept", "instance"), std::move(metadata));
  }

  for (const auto& d : section(spec, "domainNodes")) {
    ws.graph.create_domain_node(detail::require_string(d, "name", "domain node"),
                                detail::require_string(d, "instance", "domain node"),
                                optional_string(d, "description", "domain node"));
  }

  for (const auto& a : section(spec, "analyticNodes")) {
    const auto name = detail::require_string(a, "name", "analytic node");
    const std::string ctx = "analytic node '" + name + "'";
    const Json& ts = detail::require(a, "timestamp", ctx);
    if (!ts.is_number_integer()) throw ParseError(ctx + ": timestamp must be an integer");
    std::optional<TransformSpec> transform;
    if (auto t = optional_string(a, "transform", ctx)) {
      auto it = transforms.find(*t);
      if (it == transforms.end()) throw GraphError(ctx + ": unresolved transform '" + *t + "'");
      transform = it->second;
    }
    std::optional<ModelSpec> model;
    if (auto r = optional_string(a, "relationship", ctx)) {
      auto it = models.find(*r);
      if (it == models.end()) throw GraphError(ctx + ": unresolved relationship model '" + *r + "'");
      model = it->second;
    }
    auto source = optional_string(a, "dataSource", ctx);
    if (source && !is_wildcard(*source) && !dataset_names.count(*source)) {
      throw GraphError(ctx + ": unresolved dataSource '" + *source + "'");
    }
    ws.graph.create_analytic_node(name, ts.get<std::int64_t>(), std::move(transform), std::move(model),
                                  optional_string(a, "description", ctx), std::move(source));
  }

  for (const auto& i : section(spec, "insights")) {
    const auto name = detail::require_string(i, "name", "insight");
    const std::string ctx = "insight '" + name + "'";
    create_insight(ws.graph, name, members(detail::require(i, "domain", ctx), ctx),
                   members(detail::require(i, "analytic", ctx), ctx), optional_string(i, "description", ctx));
  }

  for (const auto& t : section(spec, "tasks")) {
    const auto name = detail::require_string(t, "name", "task");
    const std::string ctx = "task '" + name + "'";
    std::vector<std::string> insights;
    if (const Json* i = detail::optional_field(t, "insights")) insights = detail::as_string_list(*i, ctx);
    create_task(ws.graph, name, detail::require_string(t, "objective", ctx), std::move(insights),
                optional_string(t, "description", ctx));
  }

  for (const auto& e : section(spec, "edges")) {
    const auto from = detail::require_string(e, "from", "edge");
    const auto to = detail::require_string(e, "to", "edge");
    const auto type = detail::require_string(e, "type", "edge");
    EdgeOutcome outcome;
    if (type == "sourceTarget") {
      outcome = ws.graph.add_source(to, from);
    } else if (type == "related") {
      outcome = ws.graph.add_related(from, to);
    } else {
      throw ParseError("unknown edge type '" + type + "'");
    }
    if (outcome == EdgeOutcome::duplicate) {
      ws.warnings.push_back("duplicate " + type + " edge '" + from + "' -> '" + to + "' ignored");
    }
  }
  return ws;
}

Workspace load_spec_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read spec file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const Json spec = detail::parse_json_text(text.str(), "spec file '" + path.string() + "'");
  return load_spec(spec, path.parent_path(), options);
}

}  // namespace ig
