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

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ig/json.hpp"
#include "ig/table.hpp"

namespace ig {

enum class RelationshipKind {
  linear_regression,
  decision_tree_classification,
  knn_classification,
  naive_bayes_classification,
  kernel_density,
  normal_distribution,
  isolation_forest,
};

/// camelCase names: linearRegression, decisionTreeClassification, ...
std::string_view to_string(RelationshipKind kind);
RelationshipKind parse_relationship_kind(std::string_view text);

bool is_classifier(RelationshipKind kind);

/// Unset fields take the per-kind defaults.
struct Hyperparameters {
  std::optional<std::size_t> max_depth;   // tree, default 8
  std::optional<std::size_t> min_leaf;    // tree, default 1
  std::optional<std::size_t> k;           // knn, default 3
  std::optional<double> alpha;            // naive Bayes Laplace smoothing, default 1
  std::optional<double> bandwidth;        // kde, default Silverman
  std::optional<std::size_t> trees;       // isolation forest, default 100
  std::optional<std::size_t> subsample;   // isolation forest, default min(256, n)
  std::optional<std::uint64_t> seed;      // isolation forest, default 0
  bool operator==(const Hyperparameters&) const = default;
};

/// Declarative half of a model: what to fit, on which attributes.
struct ModelSpec {
  std::string name;
  RelationshipKind kind = RelationshipKind::linear_regression;
  std::vector<std::string> inputs;
  std::optional<std::string> output;
  Hyperparameters hyperparameters;
  bool operator==(const ModelSpec&) const = default;
};

bool contains_wildcard(const ModelSpec& spec);
/// Kind, inputs and output must agree position by position; "*" in the
/// template matches any attribute name. Names and hyperparameters are ignored.
bool match_with_wildcards(const ModelSpec& tmpl, const ModelSpec& concrete);

Json model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const Json& json);

struct EvaluationReport {
  RelationshipKind kind = RelationshipKind::linear_regression;
  std::size_t rows = 0;     // usable rows scored
  std::size_t dropped = 0;  // rows dropped for nulls in used attributes

  // classification
  double accuracy = 0.0;
  std::vector<std::string> classes;                 // sorted
  std::vector<std::vector<std::size_t>> confusion;  // [actual][predicted]

  // regression
  double rmse = 0.0;
  double r_squared = 0.0;

  // density
  double mean_log_likelihood = 0.0;
  std::vector<double> parameters;  // normal: mean, std; kde: bandwidth

  // outlier
  double score_min = 0.0;
  double score_mean = 0.0;
  double score_max = 0.0;

  /// Number of scalar cells the report carries: classification 1 + K^2,
  /// regression 2, density 1 + parameters, outlier 3.
  std::size_t scalar_count() const;

  bool operator==(const EvaluationReport&) const = default;
};

Json evaluation_report_to_json(const EvaluationReport& report);

/// One decision-tree test: categorical splits send `category` left, numeric
/// splits send values <= threshold left.
struct TreeSplit {
  std::size_t input = 0;  // index into the input attributes
  bool categorical = false;
  std::string category;
  double threshold = 0.0;
  bool operator==(const TreeSplit&) const = default;
};

/// A relationship model. Untrained values carry only the ModelSpec; train()
/// returns a new value holding immutable fitted state, so trained models can
/// be shared across threads.
class RelationshipModel {
 public:
  explicit RelationshipModel(ModelSpec spec);

  const ModelSpec& spec() const { return spec_; }
  bool trained() const { return fitted_ != nullptr; }

  /// Throws SchemaError for unknown or mistyped attributes, ModelError for
  /// degenerate training data.
  RelationshipModel train(const Table& rows) const;

  /// Resolved attributes (available after training).
  const std::vector<Attribute>& input_attributes() const;
  const std::optional<Attribute>& output_attribute() const;
  std::size_t training_rows() const;
  std::size_t dropped_rows() const;

  /// Classifiers return a training label, regression a number.
  Value predict(const Record& row) const;
  /// Density for kde/normal, anomaly score in (0,1) for isolation forests.
  double score(const Record& row) const;
  double score(double x) const;
  EvaluationReport evaluate(const Table& rows) const;

  /// Naive Bayes class posteriors, summing to 1.
  std::map<std::string, double> posteriors(const Record& row) const;
  /// Linear regression: intercept followed by one slope per input.
  std::vector<double> coefficients() const;
  /// Normal fit: (mean, sample std).
  std::pair<double, double> normal_parameters() const;
  /// KDE bandwidth in use.
  double bandwidth() const;
  /// Decision tree root test; empty when the root is a leaf.
  std::optional<TreeSplit> root_split() const;

  struct Fitted;

 private:
  const Fitted& fitted() const;

  ModelSpec spec_;
  std::shared_ptr<const Fitted> fitted_;
};

}  // namespace ig
