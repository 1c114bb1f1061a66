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
#include <string_view>
#include <vector>

#include "ig/json.hpp"
#include "ig/spec_file.hpp"

namespace ig {

enum class ScenarioId { baltimore, movies, rents, birdstrikes };

std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> parse_scenario_id(std::string_view text);
const std::vector<ScenarioId>& all_scenarios();

/// Directory holding the bundled fixtures (one sub-directory per scenario).
std::filesystem::path default_data_dir();

/// Builds the scenario graph through the library API over the bundled CSVs.
Workspace build_scenario(ScenarioId id, const std::filesystem::path& data_dir,
                         std::optional<std::uint64_t> seed = std::nullopt);

/// Least-squares slope of `count` against `year` for each distinct value of
/// `attribute`, fitted with a linearRegression relationship per condition.
std::map<std::string, double> yearly_slopes(const Table& yearly_counts, const std::string& attribute);

struct ScenarioCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ScenarioReport {
  ScenarioId id = ScenarioId::baltimore;
  std::vector<ScenarioCheck> checks;
  bool passed() const;
};

/// Builds the scenario and compares it against `<data_dir>/<id>/golden.json`.
ScenarioReport run_scenario(ScenarioId id, const std::filesystem::path& data_dir,
                            std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace ig
