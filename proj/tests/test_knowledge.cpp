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

#include <doctest.h>

#include <algorithm>

#include "ig/error.hpp"
#include "ig/insight.hpp"
#include "ig/knowledge.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

using namespace ig;

namespace {

TransformSpec count_by(const std::string& key) {
  return TransformSpec{{"t"}, {GroupBy{{key}}, Rollup{{{"n", parse_expression("count()")}}}}};
}

Datasets table_t() {
  Datasets d;
  d.add("t", Table::from_rows("t", {{"k", AttributeType::nominal, {}}, {"v", AttributeType::quantitative, {}}},
                              {{"a", 1}, {"b", 2}, {"a", 3}}));
  return d;
}

KnowledgeGraph chain() {
  KnowledgeGraph g;
  g.create_analytic_node("a", 1, count_by("k"), std::nullopt);
  g.create_analytic_node("b", 2, count_by("k"), std::nullopt);
  g.create_analytic_node("c", 3, count_by("k"), std::nullopt);
  g.add_source("b", "a");
  g.add_target("b", "c");
  return g;
}

}  // namespace

TEST_CASE("concepts and instances check their references") {
  KnowledgeGraph g;
  g.create_concept("Place");
  g.create_concept("City", {"Place"});
  CHECK_THROWS_AS(g.create_concept("City"), GraphError);
  CHECK_THROWS_AS(g.create_concept("Town", {"Nowhere"}), GraphError);
  CHECK_THROWS_AS(g.create_concept("Town", {"Place", "Place"}), GraphError);
  CHECK_THROWS_AS(g.create_concept("*"), GraphError);
  InstanceMetadata meta{{{"pop", AttributeType::quantitative, {}}}, {{"pop", 600000}}};
  g.create_instance("Baltimore", "City", meta);
  CHECK_THROWS_AS(g.create_instance("Baltimore", "City"), GraphError);
  CHECK_THROWS_AS(g.create_instance("Paris", "Country"), GraphError);
  CHECK_THROWS_AS(g.create_instance("Paris", "City", InstanceMetadata{{}, {{"pop", 1}}}), GraphError);
  g.create_domain_node("baltimore", "Baltimore", "the city");
  CHECK_THROWS_AS(g.create_domain_node("other", "Nowhere"), GraphError);
  CHECK_THROWS_AS(g.create_domain_node("baltimore", "Baltimore"), GraphError);
  CHECK(g.find_instance("Baltimore")->metadata == meta);
  CHECK(g.node_as<DomainNode>("baltimore").instance == "Baltimore");
  CHECK_THROWS_AS(g.node_as<AnalyticNode>("baltimore"), GraphError);
  CHECK_THROWS_AS(g.node("nope"), GraphError);
}

TEST_CASE("analytic nodes need content and a valid timestamp") {
  KnowledgeGraph g;
  CHECK_THROWS_AS(g.create_analytic_node("x", 0, std::nullopt, std::nullopt), GraphError);
  CHECK_THROWS_AS(g.create_analytic_node("x", -1, count_by("k"), std::nullopt), GraphError);
  CHECK_NOTHROW(g.create_analytic_node("x", 0, count_by("k"), std::nullopt));
  CHECK_THROWS_AS(g.create_analytic_node("", 0, count_by("k"), std::nullopt), GraphError);
}

TEST_CASE("edges are symmetric, deduplicated and acyclic") {
  KnowledgeGraph g = chain();
  CHECK(g.core("a").targets == std::vector<std::string>{"b"});
  CHECK(g.core("b").sources == std::vector<std::string>{"a"});
  CHECK(g.core("c").sources == std::vector<std::string>{"b"});
  CHECK(g.add_source("b", "a") == EdgeOutcome::duplicate);
  CHECK(g.add_target("a", "b") == EdgeOutcome::duplicate);
  CHECK_THROWS_AS(g.add_source("a", "c"), GraphError);
  CHECK_THROWS_AS(g.add_source("a", "a"), GraphError);
  CHECK_THROWS_AS(g.add_related("a", "a"), GraphError);
  CHECK_THROWS_AS(g.add_source("a", "zzz"), GraphError);
  CHECK(g.add_related("a", "c") == EdgeOutcome::added);
  CHECK(g.add_related("c", "a") == EdgeOutcome::duplicate);
  CHECK(g.core("c").related == std::vector<std::string>{"a"});
  CHECK(igtest::invariant_problems(g).empty());
}

TEST_CASE("results are memoized per dataset identity") {
  const KnowledgeGraph g = chain();
  Datasets d = table_t();
  const auto first = g.results("a", d);
  CHECK(g.cache_hits() == 0);
  const auto second = g.results("a", d);
  CHECK(g.cache_hits() == 1);
  CHECK(std::get<Table>(first) == std::get<Table>(second));
  CHECK(igtest::to_rows(std::get<Table>(first)).rows == std::vector<std::vector<Value>>{{"a", 2}, {"b", 1}});
  d.add("t", Table::from_rows("t", {{"k", AttributeType::nominal, {}}, {"v", AttributeType::quantitative, {}}},
                              {{"z", 1}}));
  const auto third = g.results("a", d);
  CHECK(g.cache_hits() == 1);
  CHECK(igtest::to_rows(std::get<Table>(third)).rows == std::vector<std::vector<Value>>{{"z", 1}});
}

TEST_CASE("relationship nodes train on their data source") {
  KnowledgeGraph g;
  ModelSpec m{"fit", RelationshipKind::normal_distribution, {"v"}, std::nullopt, {}};
  g.create_analytic_node("fit", 1, std::nullopt, m, std::nullopt, "t");
  g.create_analytic_node("orphan", 1, std::nullopt, m);
  const auto r = std::get<EvaluationReport>(g.results("fit", table_t()));
  CHECK(r.rows == 3);
  CHECK(r.parameters.at(0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(g.results("orphan", table_t()), SchemaError);
}

TEST_CASE("add_node checks member references") {
  KnowledgeGraph g = chain();
  g.create_concept("C");
  g.create_instance("I", "C");
  g.create_domain_node("d", "I");
  CHECK_THROWS_AS(create_insight(g, "i1", MemberList::of({"nope"}), MemberList::of({"a"})), GraphError);
  CHECK_THROWS_AS(create_insight(g, "i1", MemberList::of({"a"}), MemberList::of({"a"})), GraphError);
  CHECK_THROWS_AS(create_insight(g, "i1", MemberList::of({}), MemberList::of({"a"})), GraphError);
  CHECK_THROWS_AS(create_insight(g, "i1", MemberList::of({"d"}), MemberList::of({"a", "a"})), GraphError);
  InsightNode bad;
  bad.core.name = "i2";
  bad.core.sources = {"a"};
  bad.domain = MemberList::of({"d"});
  bad.analytic = MemberList::of({"a"});
  CHECK_THROWS_AS(g.add_node(bad), GraphError);
  CHECK_NOTHROW(create_insight(g, "i1", MemberList::of({"d"}), MemberList::of({"a"})));
}

TEST_CASE("graph JSON round trips through the checked constructors") {
  igtest::Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    KnowledgeGraph g;
    igtest::GraphFuzzer fuzz(rng, 40);
    for (int i = 0; i < 300; ++i) fuzz.step(g);
    REQUIRE(igtest::invariant_problems(g).empty());
    const Json j = graph_to_json(g);
    const KnowledgeGraph back = graph_from_json(j);
    CHECK(graph_to_json(back) == j);
    // Edge lists are sets; the JSON lists each pair once, so only membership survives.
    auto canonical = [](std::vector<Node> nodes) {
      for (auto& n : nodes) {
        auto& c = core_of(n);
        std::sort(c.sources.begin(), c.sources.end());
        std::sort(c.targets.begin(), c.targets.end());
        std::sort(c.related.begin(), c.related.end());
      }
      return nodes;
    };
    CHECK(canonical(back.nodes()) == canonical(g.nodes()));
  }
}

TEST_CASE("graph JSON rejects malformed documents") {
  CHECK_THROWS_AS(graph_from_json(Json::array()), ParseError);
  CHECK_THROWS_AS(graph_from_json(Json{{"nodes", 3}}), ParseError);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"nodes":[{"kind":"widget","name":"w"}]})")), ParseError);
  Json j = graph_to_json(chain());
  j["edges"].push_back({{"from", "c"}, {"to", "a"}, {"type", "sourceTarget"}});
  CHECK_THROWS_AS(graph_from_json(j), GraphError);
  Json k = graph_to_json(chain());
  k["edges"].push_back({{"from", "c"}, {"to", "a"}, {"type", "sideways"}});
  CHECK_THROWS_AS(graph_from_json(k), ParseError);
}
