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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ig/cli.hpp"
#include "ig/csv.hpp"
#include "ig/json.hpp"
#include "ig/scenarios.hpp"
#include "support/oracles.hpp"

using namespace ig;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ig");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string spec_path(const char* scenario) { return (default_data_dir() / scenario / "spec.json").string(); }

}  // namespace

TEST_CASE("run prints stats, results, tasks and violations") {
  const auto r = cli({"run", "--spec", spec_path("movies")});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["stats"]["concepts"].is_number());
  CHECK(doc["results"].is_object());
  REQUIRE(doc["tasks"].is_object());
  for (const auto& [name, status] : doc["tasks"].items()) {
    INFO(name);
    CHECK((status == "open" || status == "satisfied" || status == "closedNull"));
  }
  CHECK(doc["violations"].empty());
}

TEST_CASE("exit codes separate usage and input errors from semantic failures") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"run", "--spec", "/nonexistent/spec.json"}).code == 2);
  CHECK(cli({"run", "--spec", spec_path("rents"), "--scenario", "rents"}).code == 2);
  CHECK(cli({"scenario", "atlantis"}).code != 0);
  CHECK(cli({"metrics", "--spec", spec_path("rents"), "noSuchNode"}).code == 1);
  CHECK(cli({"metrics", "--spec", spec_path("rents")}).code == 2);
  CHECK(cli({"export", "--spec", spec_path("rents"), "--format", "csv"}).code == 2);
  CHECK(cli({"export", "--spec", spec_path("rents"), "--format", "csv", "--target", "normalFit"}).code == 1);

  const fs::path bad = fs::temp_directory_path() / "ig_cli_bad.json";
  std::ofstream(bad) << "{ not json";
  const auto r = cli({"validate", "--spec", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("scenario subcommand reports one line per check") {
  const auto r = cli({"scenario", "rents"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("csv export of a transform node") {
  const auto r = cli({"export", "--scenario", "rents", "--format", "csv", "--target", "minmax"});
  REQUIRE(r.code == 0);
  const Table t = read_csv(r.out, "minmax");
  CHECK(t.row_count() == 1);
  CHECK(t.column_count() == 2);
}

TEST_CASE("dot and json exports parse") {
  const auto dot = cli({"export", "--scenario", "baltimore", "--format", "dot"});
  REQUIRE(dot.code == 0);
  CHECK_NOTHROW(igtest::parse_dot(dot.out));
  const auto json = cli({"export", "--scenario", "baltimore", "--format", "json"});
  REQUIRE(json.code == 0);
  CHECK(Json::parse(json.out).contains("nodes"));
}

TEST_CASE("match and metrics") {
  const auto m = cli({"match", "--scenario", "movies", "awardsObjective"});
  REQUIRE(m.code == 0);
  CHECK(Json::parse(m.out) == Json::array({"moviesInsight"}));
  const auto all = cli({"metrics", "--scenario", "rents", "--all"});
  REQUIRE(all.code == 0);
  CHECK(Json::parse(all.out).size() == 3);
  const auto one = cli({"metrics", "--scenario", "rents", "minmax"});
  REQUIRE(one.code == 0);
  CHECK(Json::parse(one.out)["outputCells"] == 2);
}

TEST_CASE("--data replaces a dataset and --out writes a file") {
  const fs::path dir = fs::temp_directory_path() / "ig_cli_test";
  fs::create_directories(dir);
  std::ofstream(dir / "small.csv") << "county,state,rent\nA,MD,100\nB,MD,300\n";
  const fs::path out = dir / "out.csv";
  const auto r = cli({"export", "--spec", spec_path("rents"), "--data", "rents=" + (dir / "small.csv").string(),
                      "--format", "csv", "--target", "minmax", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  const Table t = read_csv(text.str(), "minmax");
  CHECK(t.at(0, "min_rent") == Value(100));
  CHECK(t.at(0, "max_rent") == Value(300));
  CHECK(cli({"run", "--spec", spec_path("rents"), "--data", "rents"}).code == 2);
  fs::remove_all(dir);
}
