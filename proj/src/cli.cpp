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

#include "ig/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ig/csv.hpp"
#include "ig/error.hpp"
#include "ig/export.hpp"
#include "ig/insight.hpp"
#include "ig/metrics.hpp"
#include "ig/scenarios.hpp"
#include "ig/spec_file.hpp"
#include "ig/table_json.hpp"

namespace ig {

namespace {

struct Source {
  std::string spec;
  std::string scenario;
  std::vector<std::string> data;
  std::optional<std::uint64_t> seed;
  std::string fixtures;
  std::string out_path;

  void add_to(CLI::App* cmd) {
    auto* spec_opt = cmd->add_option("--spec", spec, "graph spec (JSON)");
    auto* scenario_opt = cmd->add_option("--scenario", scenario, "use a bundled scenario instead of a spec");
    spec_opt->excludes(scenario_opt);
    cmd->add_option("--data", data, "override a dataset path, NAME=PATH (repeatable)");
    cmd->add_option("--seed", seed, "seed for isolation-forest models");
    cmd->add_option("--fixtures", fixtures, "directory holding the bundled scenario data");
    cmd->add_option("--out", out_path, "write output to a file instead of stdout");
  }

  std::filesystem::path data_dir() const { return fixtures.empty() ? default_data_dir() : std::filesystem::path(fixtures); }

  ScenarioId scenario_id() const {
    auto id = parse_scenario_id(scenario);
    if (!id) throw ParseError("unknown scenario '" + scenario + "'");
    return *id;
  }

  Workspace load(std::ostream& err) const {
    if (spec.empty() && scenario.empty()) throw ParseError("one of --spec or --scenario is required");
    Workspace ws;
    if (!scenario.empty()) {
      if (!data.empty()) throw ParseError("--data applies to --spec only");
      ws = build_scenario(scenario_id(), data_dir(), seed);
    } else {
      LoadOptions options;
      options.seed = seed;
      for (const auto& d : data) {
        auto eq = d.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("--data expects NAME=PATH, got '" + d + "'");
        options.data_overrides[d.substr(0, eq)] = d.substr(eq + 1);
      }
      ws = load_spec_file(spec, options);
    }
    for (const auto& w : ws.warnings) err << "warning: " << w << "\n";
    return ws;
  }

  void emit(std::ostream& out, const std::string& text) const {
    if (out_path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + out_path + "'");
    f << text;
  }
};

Json results_json(const Workspace& ws) {
  Json results = Json::object();
  for (const auto& n : ws.graph.nodes()) {
    const auto* a = std::get_if<AnalyticNode>(&n);
    if (!a || (a->transform && contains_wildcard(*a->transform)) || (a->relationship && contains_wildcard(*a->relationship))) {
      continue;
    }
    results[a->core.name] = analytic_result_to_json(ws.graph.results(a->core.name, ws.datasets));
  }
  return results;
}

Json tasks_json(const KnowledgeGraph& g) {
  Json tasks = Json::object();
  for (const auto& n : g.nodes()) {
    if (const auto* t = std::get_if<TaskNode>(&n)) tasks[t->core.name] = std::string(to_string(task_status(g, t->core.name)));
  }
  return tasks;
}

std::string scenario_text(const ScenarioReport& report) {
  std::string text;
  for (const auto& c : report.checks) {
    text += std::string(c.passed ? "PASS " : "FAIL ") + std::string(to_string(report.id)) + " " + c.name + ": " +
            c.detail + "\n";
  }
  text += std::string(to_string(report.id)) + (report.passed() ? ": all checks passed\n" : ": FAILED\n");
  return text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge graphs of analytic provenance", "ig"};
  app.require_subcommand(1);

  Source run_src;
  auto* run = app.add_subcommand("run", "compute every analytic node and report task status");
  run_src.add_to(run);

  Source scen_src;
  std::string scenario_name;
  auto* scenario = app.add_subcommand("scenario", "build a bundled scenario and check it against its golden file");
  scenario->add_option("id", scenario_name, "baltimore, movies, rents, birdstrikes or all")->required();
  scenario->add_option("--seed", scen_src.seed, "seed for isolation-forest models");
  scenario->add_option("--fixtures", scen_src.fixtures, "directory holding the bundled scenario data");
  scenario->add_option("--out", scen_src.out_path, "write output to a file instead of stdout");

  Source met_src;
  std::string metric_node;
  bool all_nodes = false;
  auto* metrics = app.add_subcommand("metrics", "depth and breadth of a node");
  metrics->add_option("node", metric_node, "node name");
  metrics->add_flag("--all", all_nodes, "report every computable node");
  met_src.add_to(metrics);

  Source exp_src;
  std::string format = "dot";
  std::string target;
  auto* exporter = app.add_subcommand("export", "export the graph or a node result");
  exporter->add_option("--format", format, "dot, json or csv")
      ->check(CLI::IsMember({"dot", "json", "csv"}));
  exporter->add_option("--target", target, "analytic node whose table is exported (csv)");
  exp_src.add_to(exporter);

  Source match_src;
  std::string objective;
  auto* match = app.add_subcommand("match", "fully specified insights satisfying an objective");
  match->add_option("objective", objective, "objective insight name")->required();
  match_src.add_to(match);

  Source val_src;
  auto* validator = app.add_subcommand("validate", "check graph invariants");
  val_src.add_to(validator);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) {
      const auto ws = run_src.load(err);
      Json doc = {{"stats", graph_stats_to_json(graph_stats(ws.graph))},
                  {"results", results_json(ws)},
                  {"tasks", tasks_json(ws.graph)},
                  {"violations", violations_to_json(validate(ws.graph))}};
      run_src.emit(out, doc.dump(2) + "\n");
      return 0;
    }
    if (scenario->parsed()) {
      std::vector<ScenarioId> ids;
      if (scenario_name == "all") {
        ids = all_scenarios();
      } else {
        scen_src.scenario = scenario_name;
        ids.push_back(scen_src.scenario_id());
      }
      std::string text;
      bool ok = true;
      for (auto id : ids) {
        const auto report = run_scenario(id, scen_src.data_dir(), scen_src.seed);
        text += scenario_text(report);
        ok = ok && report.passed();
      }
      scen_src.emit(out, text);
      return ok ? 0 : 1;
    }
    if (metrics->parsed()) {
      const auto ws = met_src.load(err);
      if (all_nodes == !metric_node.empty()) throw ParseError("metrics takes a node name or --all");
      Json doc;
      if (all_nodes) {
        doc = Json::array();
        for (const auto& n : ws.graph.nodes()) {
          const auto* a = std::get_if<AnalyticNode>(&n);
          if (!a) continue;
          try {
            doc.push_back(metric_report_to_json(metric_report(ws.graph, a->core.name, ws.datasets)));
          } catch (const NotExecutableError&) {
            // templates have no result to measure
          }
        }
      } else {
        doc = metric_report_to_json(metric_report(ws.graph, metric_node, ws.datasets));
      }
      met_src.emit(out, doc.dump(2) + "\n");
      return 0;
    }
    if (exporter->parsed()) {
      const auto ws = exp_src.load(err);
      if (format == "dot") {
        exp_src.emit(out, graph_to_dot(ws.graph));
      } else if (format == "json") {
        exp_src.emit(out, graph_to_json(ws.graph).dump(2) + "\n");
      } else {
        if (target.empty()) throw ParseError("--format csv needs --target");
        const auto result = ws.graph.results(target, ws.datasets);
        const auto* table = std::get_if<Table>(&result);
        if (!table) throw SchemaError("node '" + target + "' produces an evaluation report, not a table");
        exp_src.emit(out, write_csv(*table));
      }
      return 0;
    }
    if (match->parsed()) {
      const auto ws = match_src.load(err);
      match_src.emit(out, Json(matching_insights(ws.graph, objective)).dump(2) + "\n");
      return 0;
    }
    if (validator->parsed()) {
      const auto ws = val_src.load(err);
      const auto violations = validate(ws.graph);
      val_src.emit(out, violations_to_json(violations).dump(2) + "\n");
      return violations.empty() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ig
