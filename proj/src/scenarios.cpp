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

#include "ig/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ig/csv.hpp"
#include "ig/error.hpp"
#include "ig/export.hpp"
#include "ig/insight.hpp"
#include "ig/metrics.hpp"
#include "ig/table_json.hpp"
#include "json_util.hpp"

#ifndef IG_DATA_DIR
#define IG_DATA_DIR "data"
#endif

namespace ig {

namespace {

// Fixed timestamps keep scenario output byte-identical across runs.
constexpr std::int64_t kApril28 = 1430179200000;
constexpr std::int64_t kApril29 = 1430265600000;
constexpr std::int64_t kNorth2006 = 1136073600000;
constexpr std::int64_t kAmar2005 = 1104537600000;
constexpr std::int64_t kTableau2019 = 1546300800000;

Attribute attr(std::string name, AttributeType type) { return Attribute{std::move(name), type, {}}; }

Expr ex(std::string_view text) { return parse_expression(text); }

Table load(const std::filesystem::path& dir, const char* file, std::string name, Schema schema) {
  return load_csv(dir / file, schema).renamed(std::move(name));
}

InstanceMetadata link_metadata(std::string url) {
  InstanceMetadata m;
  m.attributes.push_back(attr("link", AttributeType::nominal));
  m.values.emplace("link", Value(std::move(url)));
  return m;
}

void build_baltimore(Workspace& ws, const std::filesystem::path& dir) {
  ws.datasets.add("baltimoreCrime", load(dir, "baltimore_crime.csv", "baltimoreCrime",
                                         {attr("CrimeDate", AttributeType::temporal),
                                          attr("Inside/Outside", AttributeType::nominal),
                                          attr("Premise", AttributeType::nominal),
                                          attr("Description", AttributeType::nominal)}));
  auto& g = ws.graph;
  g.create_concept("Crime");
  g.create_concept("Protest");
  g.create_instance("WikipediaArticle-2015BaltimoreProtests", "Protest",
                    link_metadata("https://en.wikipedia.org/wiki/2015_Baltimore_protests"));
  g.create_domain_node("2015BaltimoreProtests", "WikipediaArticle-2015BaltimoreProtests");

  TransformSpec agg{{"baltimoreCrime"},
                    {GroupBy{{"CrimeDate"}}, Rollup{{{"count", ex("count()")}}},
                     OrderBy{{{"count", SortDirection::desc}}}, Filter{ex("rank() <= 3")}}};
  g.create_analytic_node("peakCrimes", kApril28, agg, std::nullopt, "top 3 days of reported crimes");

  ModelSpec dt{"predictCrimeType", RelationshipKind::decision_tree_classification, {"Inside/Outside", "Premise"},
               "Description", {}};
  g.create_analytic_node("predictCrimeTypeNode", kApril29, std::nullopt, dt, "location predicts crime type",
                         "baltimoreCrime");

  create_insight(g, "johnsInsight", MemberList::of({"2015BaltimoreProtests"}), MemberList::of({"peakCrimes"}),
                 "Peak Crime = Freddy Grey's Funeral");
  create_insight(g, "protestsObjective", MemberList::of({"2015BaltimoreProtests"}), MemberList::any(),
                 "How did Freddy Gray's funeral impact Baltimore crime?");
  create_insight(g, "aprilCrimeObjective", MemberList::any(), MemberList::of({"peakCrimes"}),
                 "What happened on April 27, 2015 that may have led to more crime?");
  create_task(g, "protestsTask", "protestsObjective", {"johnsInsight"});
}

void build_rents(Workspace& ws, const std::filesystem::path& dir) {
  ws.datasets.add("rents", load(dir, "rents.csv", "rents",
                                {attr("county", AttributeType::nominal), attr("state", AttributeType::nominal),
                                 attr("rent", AttributeType::quantitative)}));
  auto& g = ws.graph;
  g.create_analytic_node("minmax", kNorth2006,
                         TransformSpec{{"rents"}, {Rollup{{{"min_rent", ex("min(rent)")}, {"max_rent", ex("max(rent)")}}}}},
                         std::nullopt, "minimum and maximum rent");
  g.create_analytic_node("normalFit", kNorth2006, std::nullopt,
                         ModelSpec{"rentNormal", RelationshipKind::normal_distribution, {"rent"}, std::nullopt, {}},
                         "normal distribution over rents", "rents");
  g.create_analytic_node("histogram", kNorth2006,
                         TransformSpec{{"rents"},
                                       {Bin{"rent", 10, std::nullopt, "rent_bin"},
                                        GroupBy{{"rent_bin_start", "rent_bin_end"}}, Rollup{{{"count", ex("count()")}}}}},
                         std::nullopt, "shape of the rent distribution");
}

TransformSpec winners_transform() {
  return {{"movies", "oscars"}, {Join{"oscars", {{"title", "film"}}}, Filter{ex("year >= 2005")}}};
}

void build_movies(Workspace& ws, const std::filesystem::path& dir) {
  ws.datasets.add("movies", load(dir, "movies.csv", "movies",
                                 {attr("title", AttributeType::nominal), attr("year", AttributeType::quantitative),
                                  attr("length", AttributeType::quantitative),
                                  attr("rating", AttributeType::quantitative)}));
  ws.datasets.add("oscars", load(dir, "oscars.csv", "oscars",
                                 {attr("film", AttributeType::nominal), attr("ceremony", AttributeType::quantitative),
                                  attr("category", AttributeType::nominal)}));
  auto& g = ws.graph;
  g.create_concept("quality");
  g.create_instance("FilmLengthArticle", "quality", link_metadata("https://example.org/film-length-and-popularity"));
  g.create_domain_node("filmLengthNode", "FilmLengthArticle", "articles on film length and popularity");

  const ModelSpec regression{"lengthRating", RelationshipKind::linear_regression, {"length"}, "rating", {}};
  g.create_analytic_node("oscarWinners", kAmar2005, winners_transform(), std::nullopt,
                         "Best Picture winners of the last ten years");
  g.create_analytic_node("lengthVsRating", kAmar2005, winners_transform(), regression,
                         "length against rating among recent winners");

  const TransformSpec join_then_any{{"movies", "oscars"}, {Join{"oscars", {{"title", "film"}}}, WildcardStep{}}};
  ModelSpec any_input = regression;
  any_input.name = "anyRating";
  any_input.inputs = {std::string(kWildcard)};
  g.create_analytic_node("winnersTemplate", kAmar2005, join_then_any, std::nullopt);
  g.create_analytic_node("correlationTemplate", kAmar2005, join_then_any, any_input);

  create_insight(g, "moviesObjective", MemberList::of({"filmLengthNode"}), MemberList::any(),
                 "understanding trends in movie popularity over time");
  create_insight(g, "awardsObjective", MemberList::any(), MemberList::of({"winnersTemplate"}),
                 "identify recent Academy Award winners");
  create_insight(g, "correlationObjective", MemberList::any(), MemberList::of({"correlationTemplate"}),
                 "does length correlate with rating among winners?");
  create_task(g, "moviesTask", "moviesObjective");
  create_task(g, "awardsTask", "awardsObjective");
  create_task(g, "correlationTask", "correlationObjective");
  g.add_target("moviesTask", "awardsTask");
  g.add_target("moviesTask", "correlationTask");

  Bindings movies;
  movies.analytic = std::vector<std::string>{"oscarWinners", "lengthVsRating"};
  complete(g, "moviesObjective", movies, "moviesInsight");
  Bindings correlation;
  correlation.domain = std::vector<std::string>{"filmLengthNode"};
  correlation.analytic_members = {{"correlationTemplate", "lengthVsRating"}};
  complete(g, "correlationObjective", correlation, "correlationInsight");
  attach_insight(g, "moviesTask", "moviesInsight");
  attach_insight(g, "awardsTask", "moviesInsight");
  attach_insight(g, "correlationTask", "correlationInsight");
}

TransformSpec yearly_counts(const std::string& attribute) {
  const std::string column = is_wildcard(attribute) ? "`*`" : attribute;
  return {{"birdstrikes"},
          {Filter{ex("isValid(" + column + ")")}, Derive{"year", ex("year(incident_date)")},
           GroupBy{{"year", attribute}}, Rollup{{{"count", ex("count()")}}}, OrderBy{{{"year", SortDirection::asc}}}}};
}

void build_birdstrikes(Workspace& ws, const std::filesystem::path& dir) {
  ws.datasets.add("birdstrikes", load(dir, "birdstrikes.csv", "birdstrikes",
                                      {attr("incident_date", AttributeType::temporal),
                                       attr("precip", AttributeType::nominal), attr("sky", AttributeType::nominal)}));
  auto& g = ws.graph;
  g.create_concept("Weather");
  g.create_instance("FAA-WildlifeStrikes-T3", "Weather", link_metadata("https://wildlife.faa.gov/search"));
  g.create_domain_node("weatherConditions", "FAA-WildlifeStrikes-T3", "weather conditions during strikes");
  g.create_analytic_node("precipNode", kTableau2019, yearly_counts("precip"), std::nullopt,
                         "strikes per year by precipitation");
  g.create_analytic_node("skyNode", kTableau2019, yearly_counts("sky"), std::nullopt, "strikes per year by sky");
  g.create_analytic_node("weatherTemplate", kTableau2019, yearly_counts(std::string(kWildcard)), std::nullopt,
                         "strikes per year by some weather attribute");
  g.add_related("precipNode", "skyNode");
  create_insight(g, "precipInsight", MemberList::of({"weatherConditions"}), MemberList::of({"precipNode"}),
                 "strikes do not increase with time, except in rain");
  create_insight(g, "skyInsight", MemberList::of({"weatherConditions"}), MemberList::of({"skyNode"}),
                 "strikes increase every year under every sky condition");
  create_insight(g, "t3Objective", MemberList::of({"weatherConditions"}), MemberList::of({"weatherTemplate"}),
                 "relationships between weather conditions and strike counts over time");
  create_task(g, "T3", "t3Objective", {"precipInsight", "skyInsight"});
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return detail::parse_json_text(text.str(), path.string());
}

std::string fmt(double v) { return format_number(v); }

struct Checker {
  ScenarioReport& report;

  void check(std::string name, bool ok, std::string detail) {
    report.checks.push_back(ScenarioCheck{std::move(name), ok, std::move(detail)});
  }

  template <class A, class B>
  void equal(std::string name, const A& actual, const B& expected, const std::string& shown) {
    check(std::move(name), actual == expected, shown);
  }
};

void common_checks(Checker& c, const Workspace& ws, const Json& golden) {
  const auto& g = ws.graph;
  if (const Json* census = detail::optional_field(golden, "census")) {
    const Json actual = graph_stats_to_json(graph_stats(g));
    for (const auto& [key, expected] : census->items()) {
      const Json* got = detail::optional_field(actual, key);
      c.check("census." + key, got && *got == expected,
              "expected " + expected.dump() + ", got " + (got ? got->dump() : "nothing"));
    }
  }
  if (const Json* total = detail::optional_field(golden, "registeredObjects")) {
    const auto s = graph_stats(g);
    const auto n = s.concepts + s.instances + s.domain_nodes + s.analytic_nodes + s.insights + s.objectives + s.tasks;
    c.check("registeredObjects", n == total->get<std::size_t>(),
            "expected " + total->dump() + ", got " + std::to_string(n));
  }
  const auto violations = validate(g);
  c.check("validate", violations.empty(),
          violations.empty() ? "no violations" : violations.front().rule + ": " + violations.front().message);
  if (const Json* statuses = detail::optional_field(golden, "taskStatus")) {
    for (const auto& [task, expected] : statuses->items()) {
      const auto got = std::string(to_string(task_status(g, task)));
      c.check("taskStatus." + task, got == expected.get<std::string>(), "expected " + expected.dump() + ", got " + got);
    }
  }
  if (const Json* depths = detail::optional_field(golden, "depth")) {
    for (const auto& [node, expected] : depths->items()) {
      const auto got = depth(g, node);
      c.check("depth." + node, got == expected.get<std::size_t>(),
              "expected " + expected.dump() + ", got " + std::to_string(got));
    }
  }
  if (const Json* matches = detail::optional_field(golden, "match")) {
    for (const auto& [objective, expected] : matches->items()) {
      const Json got = matching_insights(g, objective);
      c.check("match." + objective, got == expected, "expected " + expected.dump() + ", got " + got.dump());
    }
  }
  if (const Json* edges = detail::optional_field(golden, "dotEdges")) {
    std::multiset<std::vector<std::string>> want;
    for (const auto& e : *edges) want.insert(e.get<std::vector<std::string>>());
    std::multiset<std::vector<std::string>> got;
    for (const auto& e : dot_edges(g)) {
      const char* style = e.style == DotEdgeStyle::solid ? "solid" : e.style == DotEdgeStyle::dashed ? "dashed" : "dotted";
      got.insert({e.from, e.to, style});
    }
    c.check("dotEdges", got == want,
            "expected " + std::to_string(want.size()) + " edges, got " + std::to_string(got.size()) +
                (got == want ? " (identical)" : " (different)"));
  }
}

void baltimore_checks(Checker& c, const Workspace& ws, const Json& golden) {
  const auto peaks = std::get<Table>(ws.graph.results("peakCrimes", ws.datasets));
  Json days = Json::array();
  Json counts = Json::array();
  for (std::size_t r = 0; r < peaks.row_count(); ++r) {
    days.push_back(value_to_json(peaks.at(r, "CrimeDate")));
    counts.push_back(value_to_json(peaks.at(r, "count")));
  }
  const Json& want = detail::require(golden, "peakCrimes", "golden");
  c.check("peakCrimes.days", days == want.at("CrimeDate"), "got " + days.dump());
  c.check("peakCrimes.counts", counts == want.at("count"), "got " + counts.dump());

  const auto report = std::get<EvaluationReport>(ws.graph.results("predictCrimeTypeNode", ws.datasets));
  const double floor = detail::require(golden, "predictCrimeTypeMinAccuracy", "golden").get<double>();
  c.check("predictCrimeType.accuracy", report.accuracy >= floor,
          "in-sample accuracy " + fmt(report.accuracy) + " (floor " + fmt(floor) + ")");
}

void rents_checks(Checker& c, const Workspace& ws, const Json& golden) {
  std::map<std::string, BreadthCells> cells;
  for (const char* node : {"minmax", "normalFit", "histogram"}) cells[node] = breadth_cells(ws.graph, node, ws.datasets);
  if (const Json* want = detail::optional_field(golden, "breadthCells")) {
    for (const auto& [node, expected] : want->items()) {
      const auto& got = cells.at(node);
      const Json actual = {got.input, got.output, got.dataset};
      c.check("breadthCells." + node, actual == expected, "expected " + expected.dump() + ", got " + actual.dump());
    }
  }
  const double mm = cells["minmax"].ratio();
  const double nf = cells["normalFit"].ratio();
  const double hi = cells["histogram"].ratio();
  c.check("breadth.minmax<histogram", mm < hi, fmt(mm) + " < " + fmt(hi));
  c.check("breadth.normalFit<histogram", nf < hi, fmt(nf) + " < " + fmt(hi));
}

void movies_checks(Checker& c, const Workspace& ws, const Json& golden) {
  const auto winners = std::get<Table>(ws.graph.results("oscarWinners", ws.datasets));
  const auto rows = detail::require(golden, "winnerRows", "golden").get<std::size_t>();
  c.check("oscarWinners.rows", winners.row_count() == rows,
          "expected " + std::to_string(rows) + ", got " + std::to_string(winners.row_count()));
  const auto model = RelationshipModel(*ws.graph.node_as<AnalyticNode>("lengthVsRating").relationship).train(winners);
  const double slope = model.coefficients().at(1);
  c.check("lengthVsRating.slope>0", slope > 0.0, "slope " + fmt(slope));
  const auto report = std::get<EvaluationReport>(ws.graph.results("lengthVsRating", ws.datasets));
  const double floor = detail::require(golden, "lengthVsRatingMinR2", "golden").get<double>();
  c.check("lengthVsRating.r2", report.r_squared >= floor, "R^2 " + fmt(report.r_squared) + " (floor " + fmt(floor) + ")");
}

void birdstrikes_checks(Checker& c, const Workspace& ws, const Json& golden) {
  const Json& want = detail::require(golden, "slopes", "golden");
  for (const auto& [attribute, node] : {std::pair{"precip", "precipNode"}, std::pair{"sky", "skyNode"}}) {
    const auto counts = std::get<Table>(ws.graph.results(node, ws.datasets));
    const auto slopes = yearly_slopes(counts, attribute);
    for (const auto& [condition, expected] : want.at(attribute).items()) {
      auto it = slopes.find(condition);
      const bool found = it != slopes.end();
      const double e = expected.get<double>();
      const bool sign_ok = found && (e > 0 ? it->second > 0 : it->second <= 0);
      const bool value_ok = found && std::abs(it->second - e) <= 1e-9;
      c.check(std::string("slope.") + attribute + "." + condition, sign_ok && value_ok,
              found ? "slope " + fmt(it->second) + ", expected " + fmt(e) : "condition missing");
    }
    c.check(std::string("slope.") + attribute + ".conditions", slopes.size() == want.at(attribute).size(),
            std::to_string(slopes.size()) + " conditions");
  }
}

}  // namespace

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::baltimore: return "baltimore";
    case ScenarioId::movies: return "movies";
    case ScenarioId::rents: return "rents";
    case ScenarioId::birdstrikes: return "birdstrikes";
  }
  return "?";
}

std::optional<ScenarioId> parse_scenario_id(std::string_view text) {
  for (auto id : all_scenarios()) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

const std::vector<ScenarioId>& all_scenarios() {
  static const std::vector<ScenarioId> ids{ScenarioId::baltimore, ScenarioId::movies, ScenarioId::rents,
                                           ScenarioId::birdstrikes};
  return ids;
}

std::filesystem::path default_data_dir() { return IG_DATA_DIR; }

Workspace build_scenario(ScenarioId id, const std::filesystem::path& data_dir, std::optional<std::uint64_t>) {
  // No bundled scenario uses a seeded model; the parameter keeps the CLI uniform.
  Workspace ws;
  const auto dir = data_dir / std::string(to_string(id));
  switch (id) {
    case ScenarioId::baltimore: build_baltimore(ws, dir); break;
    case ScenarioId::movies: build_movies(ws, dir); break;
    case ScenarioId::rents: build_rents(ws, dir); break;
    case ScenarioId::birdstrikes: build_birdstrikes(ws, dir); break;
  }
  return ws;
}

std::map<std::string, double> yearly_slopes(const Table& yearly_counts, const std::string& attribute) {
  std::set<std::string> conditions;
  for (const auto& v : yearly_counts.column(attribute)) {
    if (!v.is_null()) conditions.insert(v.as_string());
  }
  Datasets data;
  data.add("counts", yearly_counts.renamed("counts"));
  const ModelSpec trend{"trend", RelationshipKind::linear_regression, {"year"}, "count", {}};
  std::map<std::string, double> out;
  for (const auto& condition : conditions) {
    const TransformSpec subset{{"counts"}, {Filter{Expr::make_binary(BinaryOp::eq, Expr::make_column(attribute),
                                                                     Expr::make_literal(Value(condition)))}}};
    const auto rows = execute_pipeline(subset, data);
    out[condition] = RelationshipModel(trend).train(rows).coefficients().at(1);
  }
  return out;
}

bool ScenarioReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck& c) { return c.passed; });
}

ScenarioReport run_scenario(ScenarioId id, const std::filesystem::path& data_dir, std::optional<std::uint64_t> seed) {
  ScenarioReport report;
  report.id = id;
  Checker c{report};
  const auto ws = build_scenario(id, data_dir, seed);
  const Json golden = read_json_file(data_dir / std::string(to_string(id)) / "golden.json");
  common_checks(c, ws, golden);
  switch (id) {
    case ScenarioId::baltimore: baltimore_checks(c, ws, golden); break;
    case ScenarioId::movies: movies_checks(c, ws, golden); break;
    case ScenarioId::rents: rents_checks(c, ws, golden); break;
    case ScenarioId::birdstrikes: birdstrikes_checks(c, ws, golden); break;
  }
  return report;
}

}  // namespace ig
