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

#include "ig/relationships.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "ig/error.hpp"
#include "json_util.hpp"

namespace ig {

namespace {

constexpr std::array<std::pair<RelationshipKind, std::string_view>, 7> kKindNames{{
    {RelationshipKind::linear_regression, "linearRegression"},
    {RelationshipKind::decision_tree_classification, "decisionTreeClassification"},
    {RelationshipKind::knn_classification, "knnClassification"},
    {RelationshipKind::naive_bayes_classification, "naiveBayesClassification"},
    {RelationshipKind::kernel_density, "kernelDensity"},
    {RelationshipKind::normal_distribution, "normalDistribution"},
    {RelationshipKind::isolation_forest, "isolationForest"},
}};

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.5772156649;

bool is_numeric(AttributeType t) { return t == AttributeType::quantitative || t == AttributeType::temporal; }

double numeric(const Value& v) { return v.is_date() ? static_cast<double>(v.as_date().days) : v.as_number(); }

double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * kPi));
}

// Average unsuccessful-search path length in a binary search tree of n keys.
double average_path(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n - 1);
  return 2.0 * (std::log(m) + kEulerGamma) - 2.0 * m / static_cast<double>(n);
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

using i128 = __int128;

// Sum of squared class counts over n, kept as an exact fraction.
struct Fraction {
  i128 num = 0;
  i128 den = 1;
  bool operator>(const Fraction& o) const { return num * o.den > o.num * den; }
};

Fraction split_score(const std::vector<std::size_t>& left, std::size_t nl, const std::vector<std::size_t>& right,
                     std::size_t nr) {
  i128 a = 0;
  i128 b = 0;
  for (auto c : left) a += static_cast<i128>(c) * c;
  for (auto c : right) b += static_cast<i128>(c) * c;
  return {a * static_cast<i128>(nr) + b * static_cast<i128>(nl), static_cast<i128>(nl) * static_cast<i128>(nr)};
}

}  // namespace

std::string_view to_string(RelationshipKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

RelationshipKind parse_relationship_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw ParseError("unknown relationship kind '" + std::string(text) + "'");
}

bool is_classifier(RelationshipKind kind) {
  return kind == RelationshipKind::decision_tree_classification || kind == RelationshipKind::knn_classification ||
         kind == RelationshipKind::naive_bayes_classification;
}

bool contains_wildcard(const ModelSpec& spec) {
  return std::any_of(spec.inputs.begin(), spec.inputs.end(), is_wildcard) ||
         (spec.output && is_wildcard(*spec.output));
}

bool match_with_wildcards(const ModelSpec& tmpl, const ModelSpec& concrete) {
  auto names = [](const std::string& t, const std::string& c) { return is_wildcard(t) || t == c; };
  if (tmpl.kind != concrete.kind) return false;
  if (!std::equal(tmpl.inputs.begin(), tmpl.inputs.end(), concrete.inputs.begin(), concrete.inputs.end(), names)) {
    return false;
  }
  if (tmpl.output.has_value() != concrete.output.has_value()) return false;
  return !tmpl.output || names(*tmpl.output, *concrete.output);
}

Json model_spec_to_json(const ModelSpec& spec) {
  Json hp = Json::object();
  const auto& h = spec.hyperparameters;
  if (h.max_depth) hp["maxDepth"] = *h.max_depth;
  if (h.min_leaf) hp["minLeaf"] = *h.min_leaf;
  if (h.k) hp["k"] = *h.k;
  if (h.alpha) hp["alpha"] = *h.alpha;
  if (h.bandwidth) hp["bandwidth"] = *h.bandwidth;
  if (h.trees) hp["trees"] = *h.trees;
  if (h.subsample) hp["subsample"] = *h.subsample;
  if (h.seed) hp["seed"] = *h.seed;
  Json out = {{"name", spec.name}, {"kind", to_string(spec.kind)}, {"inputs", spec.inputs}};
  out["output"] = spec.output ? Json(*spec.output) : Json(nullptr);
  out["hyperparameters"] = hp;
  return out;
}

ModelSpec model_spec_from_json(const Json& json) {
  constexpr std::string_view ctx = "model spec";
  ModelSpec spec;
  spec.name = detail::require_string(json, "name", ctx);
  spec.kind = parse_relationship_kind(detail::require_string(json, "kind", ctx));
  spec.inputs = detail::as_string_list(detail::require(json, "inputs", ctx), "model spec inputs");
  if (const Json* out = detail::optional_field(json, "output")) spec.output = detail::as_string(*out, ctx);
  if (const Json* hp = detail::optional_field(json, "hyperparameters")) {
    if (!hp->is_object()) throw ParseError("model spec: hyperparameters must be an object");
    auto count = [&](const char* key) -> std::optional<std::size_t> {
      const Json* v = detail::optional_field(*hp, key);
      if (!v) return std::nullopt;
      if (!v->is_number_unsigned()) throw ParseError(std::string("model spec: ") + key + " must be a non-negative integer");
      return v->get<std::size_t>();
    };
    auto real = [&](const char* key) -> std::optional<double> {
      const Json* v = detail::optional_field(*hp, key);
      if (!v) return std::nullopt;
      if (!v->is_number()) throw ParseError(std::string("model spec: ") + key + " must be a number");
      return v->get<double>();
    };
    auto& h = spec.hyperparameters;
    h.max_depth = count("maxDepth");
    h.min_leaf = count("minLeaf");
    h.k = count("k");
    h.alpha = real("alpha");
    h.bandwidth = real("bandwidth");
    h.trees = count("trees");
    h.subsample = count("subsample");
    if (const Json* v = detail::optional_field(*hp, "seed")) {
      if (!v->is_number_unsigned()) throw ParseError("model spec: seed must be a non-negative integer");
      h.seed = v->get<std::uint64_t>();
    }
  }
  return spec;
}

std::size_t EvaluationReport::scalar_count() const {
  if (is_classifier(kind)) return 1 + classes.size() * classes.size();
  switch (kind) {
    case RelationshipKind::linear_regression: return 2;
    case RelationshipKind::kernel_density:
    case RelationshipKind::normal_distribution: return 1 + parameters.size();
    default: return 3;
  }
}

Json evaluation_report_to_json(const EvaluationReport& r) {
  Json out = {{"kind", to_string(r.kind)}, {"rows", r.rows}, {"dropped", r.dropped}};
  if (is_classifier(r.kind)) {
    out["accuracy"] = r.accuracy;
    out["classes"] = r.classes;
    out["confusion"] = r.confusion;
  } else if (r.kind == RelationshipKind::linear_regression) {
    out["rmse"] = r.rmse;
    out["rSquared"] = r.r_squared;
  } else if (r.kind == RelationshipKind::isolation_forest) {
    out["scoreMin"] = r.score_min;
    out["scoreMean"] = r.score_mean;
    out["scoreMax"] = r.score_max;
  } else {
    out["meanLogLikelihood"] = r.mean_log_likelihood;
    out["parameters"] = r.parameters;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fitted state

struct RelationshipModel::Fitted {
  std::vector<Attribute> inputs;
  std::optional<Attribute> output;
  std::size_t rows = 0;
  std::size_t dropped = 0;

  // linear regression
  std::vector<double> coef;

  // decision tree; node 0 is the root
  struct TreeNode {
    std::optional<TreeSplit> split;
    std::size_t left = 0;
    std::size_t right = 0;
    std::string label;
  };
  std::vector<TreeNode> tree;

  // knn: standardized numeric features and raw categorical ones, per row
  std::vector<std::vector<double>> knn_num;
  std::vector<std::vector<std::string>> knn_cat;
  std::vector<std::string> knn_labels;
  std::vector<double> center;
  std::vector<double> scale;
  std::size_t k = 3;

  // naive Bayes
  std::vector<std::string> classes;
  std::vector<double> log_prior;
  std::vector<std::size_t> class_count;
  double alpha = 1.0;
  // per input: category counts per class (categorical) or per-class mean/variance
  std::vector<std::vector<std::map<std::string, std::size_t>>> nb_counts;
  std::vector<std::size_t> nb_distinct;
  std::vector<std::vector<double>> nb_mean;
  std::vector<std::vector<double>> nb_var;

  // kde / normal
  std::vector<double> sample;
  double h = 0.0;
  double mean = 0.0;
  double sd = 0.0;

  // isolation forest
  struct IsoNode {
    std::size_t input = 0;
    double split = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t size = 0;
    bool leaf = true;
  };
  std::vector<std::vector<IsoNode>> forest;
  std::size_t psi = 0;
};

namespace {

using Fitted = RelationshipModel::Fitted;

struct Usable {
  std::vector<std::vector<Value>> x;  // [row][input]
  std::vector<Value> y;
  std::size_t dropped = 0;
};

Usable usable_rows(const Table& table, const std::vector<Attribute>& inputs, const std::optional<Attribute>& output) {
  std::vector<std::size_t> cols;
  for (const auto& a : inputs) cols.push_back(table.column_index(a.name));
  const std::optional<std::size_t> ycol = output ? std::optional(table.column_index(output->name)) : std::nullopt;
  Usable u;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    bool ok = !ycol || !table.at(r, *ycol).is_null();
    for (auto c : cols) ok = ok && !table.at(r, c).is_null();
    if (!ok) {
      ++u.dropped;
      continue;
    }
    std::vector<Value> x;
    for (auto c : cols) x.push_back(table.at(r, c));
    u.x.push_back(std::move(x));
    if (ycol) u.y.push_back(table.at(r, *ycol));
  }
  return u;
}

std::vector<Value> record_inputs(const Record& row, const std::vector<Attribute>& inputs) {
  std::vector<Value> x;
  for (const auto& a : inputs) {
    auto it = row.find(a.name);
    if (it == row.end()) throw SchemaError("record has no attribute '" + a.name + "'");
    if (it->second.is_null()) throw ModelError("null value for input '" + a.name + "'");
    check_cell(a, it->second);
    x.push_back(it->second);
  }
  return x;
}

// ---- linear regression ------------------------------------------------------

std::vector<double> least_squares(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = a.size();
  const std::size_t p = a.front().size();
  if (n < p) throw ModelError("linear regression needs at least as many rows as coefficients");
  // Householder QR, in place.
  std::vector<double> diag(p);
  for (std::size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm = std::hypot(norm, a[i][k]);
    if (norm == 0.0) throw ModelError("linear regression inputs are collinear");
    const double alpha = a[k][k] > 0 ? -norm : norm;
    std::vector<double> v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a[i][k];
    v[0] -= alpha;
    double vv = 0.0;
    for (double e : v) vv += e * e;
    if (vv > 0.0) {
      for (std::size_t j = k; j < p; ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i - k] * a[i][j];
        const double f = 2.0 * dot / vv;
        for (std::size_t i = k; i < n; ++i) a[i][j] -= f * v[i - k];
      }
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i - k] * b[i];
      const double f = 2.0 * dot / vv;
      for (std::size_t i = k; i < n; ++i) b[i] -= f * v[i - k];
    }
    diag[k] = a[k][k];
  }
  double largest = 0.0;
  for (double d : diag) largest = std::max(largest, std::abs(d));
  for (double d : diag) {
    if (std::abs(d) <= 1e-12 * largest) throw ModelError("linear regression inputs are collinear");
  }
  std::vector<double> beta(p);
  for (std::size_t k = p; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= a[k][j] * beta[j];
    beta[k] = s / a[k][k];
  }
  return beta;
}

void fit_linear(Fitted& f, const Usable& u) {
  if (u.x.size() < 2) throw ModelError("linear regression needs at least 2 usable rows");
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (std::size_t r = 0; r < u.x.size(); ++r) {
    std::vector<double> row{1.0};
    for (const auto& v : u.x[r]) row.push_back(numeric(v));
    a.push_back(std::move(row));
    b.push_back(u.y[r].as_number());
  }
  f.coef = least_squares(std::move(a), std::move(b));
}

double predict_linear(const Fitted& f, const std::vector<Value>& x) {
  double y = f.coef[0];
  for (std::size_t i = 0; i < x.size(); ++i) y += f.coef[i + 1] * numeric(x[i]);
  return y;
}

// ---- decision tree ----------------------------------------------------------

struct TreeBuilder {
  Fitted& f;
  const Usable& u;
  std::vector<std::size_t> label;  // class index per row
  std::size_t max_depth;
  std::size_t min_leaf;

  std::vector<std::size_t> counts(const std::vector<std::size_t>& rows) const {
    std::vector<std::size_t> c(f.classes.size());
    for (auto r : rows) ++c[label[r]];
    return c;
  }

  bool goes_left(const TreeSplit& s, const Value& v) const {
    return s.categorical ? v.as_string() == s.category : numeric(v) <= s.threshold;
  }

  std::size_t build(const std::vector<std::size_t>& rows, std::size_t depth) {
    const auto node = f.tree.size();
    f.tree.emplace_back();
    const auto total = counts(rows);
    // Majority label; the smallest label wins ties because classes are sorted.
    f.tree[node].label = f.classes[static_cast<std::size_t>(std::max_element(total.begin(), total.end()) - total.begin())];
    const bool pure = std::count_if(total.begin(), total.end(), [](std::size_t c) { return c > 0; }) <= 1;
    if (pure || depth >= max_depth) return node;

    Fraction best{0, 1};
    for (auto c : total) best.num += static_cast<i128>(c) * c;
    best.den = static_cast<i128>(rows.size());
    std::optional<TreeSplit> chosen;

    auto consider = [&](const TreeSplit& s, const std::vector<std::size_t>& left, std::size_t nl) {
      const std::size_t nr = rows.size() - nl;
      if (nl < min_leaf || nr < min_leaf || nl == 0 || nr == 0) return;
      std::vector<std::size_t> right(total.size());
      for (std::size_t c = 0; c < total.size(); ++c) right[c] = total[c] - left[c];
      const auto score = split_score(left, nl, right, nr);
      if (score > best) {
        best = score;
        chosen = s;
      }
    };

    for (std::size_t in = 0; in < f.inputs.size(); ++in) {
      if (is_numeric(f.inputs[in].type)) {
        std::vector<std::size_t> sorted = rows;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](std::size_t a, std::size_t b) { return numeric(u.x[a][in]) < numeric(u.x[b][in]); });
        std::vector<std::size_t> left(total.size());
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          ++left[label[sorted[i]]];
          const double a = numeric(u.x[sorted[i]][in]);
          const double b = numeric(u.x[sorted[i + 1]][in]);
          if (a == b) continue;
          consider(TreeSplit{in, false, {}, a + (b - a) / 2.0}, left, i + 1);
        }
      } else {
        std::map<std::string, std::vector<std::size_t>> by_category;
        for (auto r : rows) {
          auto& c = by_category[u.x[r][in].as_string()];
          if (c.empty()) c.resize(total.size());
          ++c[label[r]];
        }
        for (const auto& [category, left] : by_category) {
          const auto nl = static_cast<std::size_t>(std::accumulate(left.begin(), left.end(), std::size_t{0}));
          consider(TreeSplit{in, true, category, 0.0}, left, nl);
        }
      }
    }
    if (!chosen) return node;

    std::vector<std::size_t> lrows;
    std::vector<std::size_t> rrows;
    for (auto r : rows) (goes_left(*chosen, u.x[r][chosen->input]) ? lrows : rrows).push_back(r);
    f.tree[node].split = chosen;
    const auto l = build(lrows, depth + 1);
    const auto r = build(rrows, depth + 1);
    f.tree[node].left = l;
    f.tree[node].right = r;
    return node;
  }
};

std::vector<std::string> sorted_classes(const Usable& u) {
  std::set<std::string> s;
  for (const auto& y : u.y) s.insert(y.as_string());
  if (s.size() < 2) throw ModelError("classifier training data has a single class; a constant classifier is degenerate");
  return {s.begin(), s.end()};
}

std::vector<std::size_t> class_indices(const Fitted& f, const Usable& u) {
  std::vector<std::size_t> out;
  for (const auto& y : u.y) {
    out.push_back(static_cast<std::size_t>(std::lower_bound(f.classes.begin(), f.classes.end(), y.as_string()) -
                                           f.classes.begin()));
  }
  return out;
}

void fit_tree(Fitted& f, const Usable& u, const Hyperparameters& h) {
  f.classes = sorted_classes(u);
  TreeBuilder b{f, u, class_indices(f, u), h.max_depth.value_or(8), std::max<std::size_t>(1, h.min_leaf.value_or(1))};
  std::vector<std::size_t> all(u.x.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  b.build(all, 0);
}

std::string predict_tree(const Fitted& f, const std::vector<Value>& x) {
  std::size_t node = 0;
  while (f.tree[node].split) {
    const auto& s = *f.tree[node].split;
    const bool left = s.categorical ? x[s.input].as_string() == s.category : numeric(x[s.input]) <= s.threshold;
    node = left ? f.tree[node].left : f.tree[node].right;
  }
  return f.tree[node].label;
}

// ---- knn --------------------------------------------------------------------

void fit_knn(Fitted& f, const Usable& u, const Hyperparameters& h) {
  sorted_classes(u);
  f.k = h.k.value_or(3);
  if (f.k == 0) throw ModelError("knn needs k >= 1");
  const std::size_t n = u.x.size();
  f.center.assign(f.inputs.size(), 0.0);
  f.scale.assign(f.inputs.size(), 1.0);
  for (std::size_t in = 0; in < f.inputs.size(); ++in) {
    if (!is_numeric(f.inputs[in].type)) continue;
    double mean = 0.0;
    for (const auto& row : u.x) mean += numeric(row[in]);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : u.x) ss += (numeric(row[in]) - mean) * (numeric(row[in]) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    f.center[in] = mean;
    f.scale[in] = sd > 0.0 ? sd : 1.0;
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> num;
    std::vector<std::string> cat;
    for (std::size_t in = 0; in < f.inputs.size(); ++in) {
      if (is_numeric(f.inputs[in].type)) {
        num.push_back((numeric(u.x[r][in]) - f.center[in]) / f.scale[in]);
      } else {
        cat.push_back(u.x[r][in].as_string());
      }
    }
    f.knn_num.push_back(std::move(num));
    f.knn_cat.push_back(std::move(cat));
    f.knn_labels.push_back(u.y[r].as_string());
  }
}

std::string predict_knn(const Fitted& f, const std::vector<Value>& x) {
  std::vector<double> qn;
  std::vector<std::string> qc;
  for (std::size_t in = 0; in < f.inputs.size(); ++in) {
    if (is_numeric(f.inputs[in].type)) {
      qn.push_back((numeric(x[in]) - f.center[in]) / f.scale[in]);
    } else {
      qc.push_back(x[in].as_string());
    }
  }
  const std::size_t n = f.knn_labels.size();
  std::vector<double> dist(n);
  for (std::size_t r = 0; r < n; ++r) {
    double ss = 0.0;
    for (std::size_t i = 0; i < qn.size(); ++i) ss += (qn[i] - f.knn_num[r][i]) * (qn[i] - f.knn_num[r][i]);
    double mismatches = 0.0;
    for (std::size_t i = 0; i < qc.size(); ++i) mismatches += qc[i] != f.knn_cat[r][i] ? 1.0 : 0.0;
    dist[r] = std::sqrt(ss) + mismatches;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  const std::size_t k = std::min(f.k, n);
  std::map<std::string, std::size_t> votes;
  for (std::size_t i = 0; i < k; ++i) ++votes[f.knn_labels[order[i]]];
  std::size_t top = 0;
  for (const auto& [label, v] : votes) top = std::max(top, v);
  // Tied classes: the one whose member is nearest wins.
  for (std::size_t i = 0; i < k; ++i) {
    if (votes[f.knn_labels[order[i]]] == top) return f.knn_labels[order[i]];
  }
  return f.knn_labels[order[0]];
}

// ---- naive Bayes ------------------------------------------------------------

void fit_naive_bayes(Fitted& f, const Usable& u, const Hyperparameters& h) {
  f.classes = sorted_classes(u);
  f.alpha = h.alpha.value_or(1.0);
  if (!(f.alpha > 0.0)) throw ModelError("naive Bayes alpha must be positive");
  const auto label = class_indices(f, u);
  const std::size_t n = u.x.size();
  const std::size_t kc = f.classes.size();
  f.class_count.assign(kc, 0);
  for (auto c : label) ++f.class_count[c];
  for (auto c : f.class_count) f.log_prior.push_back(std::log(static_cast<double>(c) / static_cast<double>(n)));

  const std::size_t ni = f.inputs.size();
  f.nb_counts.assign(ni, std::vector<std::map<std::string, std::size_t>>(kc));
  f.nb_distinct.assign(ni, 0);
  f.nb_mean.assign(ni, std::vector<double>(kc, 0.0));
  f.nb_var.assign(ni, std::vector<double>(kc, 0.0));
  for (std::size_t in = 0; in < ni; ++in) {
    if (!is_numeric(f.inputs[in].type)) {
      std::set<std::string> distinct;
      for (std::size_t r = 0; r < n; ++r) {
        const auto& v = u.x[r][in].as_string();
        distinct.insert(v);
        ++f.nb_counts[in][label[r]][v];
      }
      f.nb_distinct[in] = distinct.size();
      continue;
    }
    double all_mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      all_mean += numeric(u.x[r][in]);
      f.nb_mean[in][label[r]] += numeric(u.x[r][in]);
    }
    all_mean /= static_cast<double>(n);
    double all_var = 0.0;
    for (std::size_t r = 0; r < n; ++r) all_var += (numeric(u.x[r][in]) - all_mean) * (numeric(u.x[r][in]) - all_mean);
    all_var /= static_cast<double>(n);
    for (std::size_t c = 0; c < kc; ++c) f.nb_mean[in][c] /= static_cast<double>(f.class_count[c]);
    for (std::size_t r = 0; r < n; ++r) {
      const double d = numeric(u.x[r][in]) - f.nb_mean[in][label[r]];
      f.nb_var[in][label[r]] += d * d;
    }
    const double floor = 1e-9 * std::max(all_var, 1.0);
    for (std::size_t c = 0; c < kc; ++c) f.nb_var[in][c] = f.nb_var[in][c] / static_cast<double>(f.class_count[c]) + floor;
  }
}

std::vector<double> nb_posteriors(const Fitted& f, const std::vector<Value>& x) {
  const std::size_t kc = f.classes.size();
  std::vector<double> logp = f.log_prior;
  for (std::size_t in = 0; in < f.inputs.size(); ++in) {
    for (std::size_t c = 0; c < kc; ++c) {
      if (is_numeric(f.inputs[in].type)) {
        const double var = f.nb_var[in][c];
        const double d = numeric(x[in]) - f.nb_mean[in][c];
        logp[c] += -0.5 * std::log(2.0 * kPi * var) - d * d / (2.0 * var);
      } else {
        const auto& counts = f.nb_counts[in][c];
        auto it = counts.find(x[in].as_string());
        const double nvc = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        logp[c] += std::log((nvc + f.alpha) /
                            (static_cast<double>(f.class_count[c]) + f.alpha * static_cast<double>(f.nb_distinct[in])));
      }
    }
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  double total = 0.0;
  for (double& v : logp) total += (v = std::exp(v - top));
  for (double& v : logp) v /= total;
  return logp;
}

// ---- density models ---------------------------------------------------------

void fit_kde(Fitted& f, const Usable& u, const Hyperparameters& h) {
  for (const auto& row : u.x) f.sample.push_back(numeric(row[0]));
  if (h.bandwidth) {
    f.h = *h.bandwidth;
  } else {
    const double n = static_cast<double>(f.sample.size());
    double sd = 0.0;
    if (f.sample.size() >= 2) {
      const double mean = std::accumulate(f.sample.begin(), f.sample.end(), 0.0) / n;
      double ss = 0.0;
      for (double v : f.sample) ss += (v - mean) * (v - mean);
      sd = std::sqrt(ss / (n - 1.0));
    }
    f.h = 1.06 * sd * std::pow(n, -0.2);
  }
  if (!(f.h > 0.0) || !std::isfinite(f.h)) {
    throw ModelError("kernel density bandwidth is zero; the sample is constant or too small, pass a bandwidth");
  }
}

double kde_density(const Fitted& f, double x) {
  double s = 0.0;
  for (double v : f.sample) s += normal_pdf(x, v, f.h);
  return s / static_cast<double>(f.sample.size());
}

void fit_normal(Fitted& f, const Usable& u) {
  const std::size_t n = u.x.size();
  if (n < 2) throw ModelError("normal fit needs at least 2 usable rows");
  double mean = 0.0;
  for (const auto& row : u.x) mean += numeric(row[0]);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& row : u.x) ss += (numeric(row[0]) - mean) * (numeric(row[0]) - mean);
  f.mean = mean;
  f.sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(f.sd > 0.0)) throw ModelError("normal fit has zero standard deviation");
}

// ---- isolation forest -------------------------------------------------------

struct IsoBuilder {
  const std::vector<std::vector<double>>& data;
  std::mt19937_64& rng;
  std::size_t height_limit;
  std::vector<Fitted::IsoNode> nodes;

  std::size_t build(std::vector<std::size_t> rows, std::size_t depth) {
    const auto id = nodes.size();
    nodes.push_back(Fitted::IsoNode{0, 0.0, 0, 0, rows.size(), true});
    if (depth >= height_limit || rows.size() <= 1) return id;
    std::vector<std::size_t> candidates;
    std::vector<std::pair<double, double>> range(data.front().size());
    for (std::size_t in = 0; in < range.size(); ++in) {
      double lo = data[rows[0]][in];
      double hi = lo;
      for (auto r : rows) {
        lo = std::min(lo, data[r][in]);
        hi = std::max(hi, data[r][in]);
      }
      range[in] = {lo, hi};
      if (lo < hi) candidates.push_back(in);
    }
    if (candidates.empty()) return id;
    const auto in = candidates[std::min(candidates.size() - 1,
                                        static_cast<std::size_t>(uniform(rng) * static_cast<double>(candidates.size())))];
    const auto [lo, hi] = range[in];
    double split = lo + uniform(rng) * (hi - lo);
    if (split >= hi) split = std::nextafter(hi, lo);
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) (data[r][in] <= split ? left : right).push_back(r);
    nodes[id].leaf = false;
    nodes[id].input = in;
    nodes[id].split = split;
    const auto l = build(std::move(left), depth + 1);
    const auto r = build(std::move(right), depth + 1);
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }
};

void fit_isolation_forest(Fitted& f, const Usable& u, const Hyperparameters& h) {
  const std::size_t n = u.x.size();
  if (n < 2) throw ModelError("isolation forest needs at least 2 usable rows");
  std::vector<std::vector<double>> data;
  for (const auto& row : u.x) {
    std::vector<double> d;
    for (const auto& v : row) d.push_back(numeric(v));
    data.push_back(std::move(d));
  }
  const std::size_t trees = h.trees.value_or(100);
  if (trees == 0) throw ModelError("isolation forest needs at least one tree");
  f.psi = std::clamp<std::size_t>(h.subsample.value_or(256), 2, n);
  std::mt19937_64 rng(h.seed.value_or(0));
  const auto limit = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(f.psi))));
  std::vector<std::size_t> pool(n);
  for (std::size_t t = 0; t < trees; ++t) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < f.psi && f.psi < n; ++i) {
      const auto j = i + std::min(n - i - 1, static_cast<std::size_t>(uniform(rng) * static_cast<double>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    IsoBuilder b{data, rng, limit, {}};
    b.build(std::vector<std::size_t>(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(f.psi)), 0);
    f.forest.push_back(std::move(b.nodes));
  }
}

double iso_score(const Fitted& f, const std::vector<double>& x) {
  double total = 0.0;
  for (const auto& tree : f.forest) {
    std::size_t node = 0;
    double depth = 0.0;
    while (!tree[node].leaf) {
      node = x[tree[node].input] <= tree[node].split ? tree[node].left : tree[node].right;
      depth += 1.0;
    }
    total += depth + average_path(tree[node].size);
  }
  const double mean = total / static_cast<double>(f.forest.size());
  return std::exp2(-mean / average_path(f.psi));
}

// Resolves attribute types against the training table and checks the
// per-kind constraints.
void resolve(const ModelSpec& spec, const Table& table, Fitted& f) {
  if (contains_wildcard(spec)) throw NotExecutableError("model '" + spec.name + "' has wildcard attributes");
  if (spec.inputs.empty()) throw SchemaError("model '" + spec.name + "' needs at least one input");
  for (const auto& name : spec.inputs) f.inputs.push_back(table.attribute(name));
  if (spec.output) f.output = table.attribute(*spec.output);
  const std::string who = std::string(to_string(spec.kind)) + " '" + spec.name + "'";
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw SchemaError(who + ": " + what);
  };
  auto all_quantitative = [&] {
    return std::all_of(f.inputs.begin(), f.inputs.end(),
                       [](const Attribute& a) { return a.type == AttributeType::quantitative; });
  };
  switch (spec.kind) {
    case RelationshipKind::linear_regression:
      need(f.output && f.output->type == AttributeType::quantitative, "needs a quantitative output attribute");
      need(all_quantitative(), "needs quantitative inputs");
      break;
    case RelationshipKind::decision_tree_classification:
    case RelationshipKind::knn_classification:
    case RelationshipKind::naive_bayes_classification:
      need(f.output && f.output->type == AttributeType::nominal, "needs a nominal output attribute");
      break;
    case RelationshipKind::kernel_density:
    case RelationshipKind::normal_distribution:
      need(!f.output, "takes no output attribute");
      need(f.inputs.size() == 1 && all_quantitative(), "needs exactly one quantitative input");
      break;
    case RelationshipKind::isolation_forest:
      need(!f.output, "takes no output attribute");
      need(all_quantitative(), "needs quantitative inputs");
      break;
  }
}

}  // namespace

RelationshipModel::RelationshipModel(ModelSpec spec) : spec_(std::move(spec)) {}

const RelationshipModel::Fitted& RelationshipModel::fitted() const {
  if (!fitted_) throw ModelError("model '" + spec_.name + "' is not trained");
  return *fitted_;
}

RelationshipModel RelationshipModel::train(const Table& rows) const {
  auto f = std::make_shared<Fitted>();
  resolve(spec_, rows, *f);
  const Usable u = usable_rows(rows, f->inputs, f->output);
  if (u.x.empty()) throw ModelError("model '" + spec_.name + "' has no usable training rows");
  f->rows = u.x.size();
  f->dropped = u.dropped;
  const auto& h = spec_.hyperparameters;
  switch (spec_.kind) {
    case RelationshipKind::linear_regression: fit_linear(*f, u); break;
    case RelationshipKind::decision_tree_classification: fit_tree(*f, u, h); break;
    case RelationshipKind::knn_classification: fit_knn(*f, u, h); break;
    case RelationshipKind::naive_bayes_classification: fit_naive_bayes(*f, u, h); break;
    case RelationshipKind::kernel_density: fit_kde(*f, u, h); break;
    case RelationshipKind::normal_distribution: fit_normal(*f, u); break;
    case RelationshipKind::isolation_forest: fit_isolation_forest(*f, u, h); break;
  }
  RelationshipModel out(spec_);
  out.fitted_ = std::move(f);
  return out;
}

const std::vector<Attribute>& RelationshipModel::input_attributes() const { return fitted().inputs; }
const std::optional<Attribute>& RelationshipModel::output_attribute() const { return fitted().output; }
std::size_t RelationshipModel::training_rows() const { return fitted().rows; }
std::size_t RelationshipModel::dropped_rows() const { return fitted().dropped; }

namespace {

Value predict_values(const ModelSpec& spec, const Fitted& f, const std::vector<Value>& x) {
  switch (spec.kind) {
    case RelationshipKind::linear_regression: return Value(predict_linear(f, x));
    case RelationshipKind::decision_tree_classification: return Value(predict_tree(f, x));
    case RelationshipKind::knn_classification: return Value(predict_knn(f, x));
    case RelationshipKind::naive_bayes_classification: {
      const auto p = nb_posteriors(f, x);
      return Value(f.classes[static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin())]);
    }
    default: throw ModelError(std::string(to_string(spec.kind)) + " '" + spec.name + "' does not predict; use score");
  }
}

double score_value(const ModelSpec& spec, const Fitted& f, const std::vector<double>& x) {
  switch (spec.kind) {
    case RelationshipKind::kernel_density: return kde_density(f, x[0]);
    case RelationshipKind::normal_distribution: return normal_pdf(x[0], f.mean, f.sd);
    case RelationshipKind::isolation_forest: return iso_score(f, x);
    default: throw ModelError(std::string(to_string(spec.kind)) + " '" + spec.name + "' does not score; use predict");
  }
}

std::vector<double> numeric_inputs(const std::vector<Value>& x) {
  std::vector<double> out;
  for (const auto& v : x) out.push_back(numeric(v));
  return out;
}

}  // namespace

Value RelationshipModel::predict(const Record& row) const {
  const auto& f = fitted();
  return predict_values(spec_, f, record_inputs(row, f.inputs));
}

double RelationshipModel::score(const Record& row) const {
  const auto& f = fitted();
  return score_value(spec_, f, numeric_inputs(record_inputs(row, f.inputs)));
}

double RelationshipModel::score(double x) const {
  const auto& f = fitted();
  if (f.inputs.size() != 1) throw ModelError("score(x) needs a single-input model");
  return score_value(spec_, f, {x});
}

std::map<std::string, double> RelationshipModel::posteriors(const Record& row) const {
  const auto& f = fitted();
  if (spec_.kind != RelationshipKind::naive_bayes_classification) throw ModelError("posteriors need a naive Bayes model");
  const auto p = nb_posteriors(f, record_inputs(row, f.inputs));
  std::map<std::string, double> out;
  for (std::size_t c = 0; c < p.size(); ++c) out.emplace(f.classes[c], p[c]);
  return out;
}

std::vector<double> RelationshipModel::coefficients() const {
  if (spec_.kind != RelationshipKind::linear_regression) throw ModelError("coefficients need a linear regression");
  return fitted().coef;
}

std::pair<double, double> RelationshipModel::normal_parameters() const {
  if (spec_.kind != RelationshipKind::normal_distribution) throw ModelError("normal_parameters need a normal fit");
  return {fitted().mean, fitted().sd};
}

double RelationshipModel::bandwidth() const {
  if (spec_.kind != RelationshipKind::kernel_density) throw ModelError("bandwidth needs a kernel density model");
  return fitted().h;
}

std::optional<TreeSplit> RelationshipModel::root_split() const {
  if (spec_.kind != RelationshipKind::decision_tree_classification) throw ModelError("root_split needs a decision tree");
  return fitted().tree.front().split;
}

EvaluationReport RelationshipModel::evaluate(const Table& rows) const {
  const auto& f = fitted();
  std::vector<Attribute> inputs;
  for (const auto& a : f.inputs) {
    const auto& attr = rows.attribute(a.name);
    if (attr.type != a.type) throw SchemaError("evaluation attribute '" + a.name + "' changed type since training");
    inputs.push_back(attr);
  }
  const Usable u = usable_rows(rows, inputs, f.output);
  if (u.x.empty()) throw ModelError("model '" + spec_.name + "' has no usable evaluation rows");

  EvaluationReport r;
  r.kind = spec_.kind;
  r.rows = u.x.size();
  r.dropped = u.dropped;
  const double n = static_cast<double>(u.x.size());

  if (is_classifier(spec_.kind)) {
    std::set<std::string> labels(f.classes.begin(), f.classes.end());
    if (spec_.kind == RelationshipKind::knn_classification) labels.insert(f.knn_labels.begin(), f.knn_labels.end());
    for (const auto& y : u.y) labels.insert(y.as_string());
    r.classes.assign(labels.begin(), labels.end());
    r.confusion.assign(r.classes.size(), std::vector<std::size_t>(r.classes.size(), 0));
    auto index = [&](const std::string& s) {
      return static_cast<std::size_t>(std::lower_bound(r.classes.begin(), r.classes.end(), s) - r.classes.begin());
    };
    std::size_t correct = 0;
    for (std::size_t i = 0; i < u.x.size(); ++i) {
      const auto predicted = predict_values(spec_, f, u.x[i]).as_string();
      const auto& actual = u.y[i].as_string();
      ++r.confusion[index(actual)][index(predicted)];
      correct += predicted == actual ? 1 : 0;
    }
    r.accuracy = static_cast<double>(correct) / n;
  } else if (spec_.kind == RelationshipKind::linear_regression) {
    double sse = 0.0;
    double mean = 0.0;
    for (const auto& y : u.y) mean += y.as_number();
    mean /= n;
    double sst = 0.0;
    for (std::size_t i = 0; i < u.x.size(); ++i) {
      const double e = u.y[i].as_number() - predict_linear(f, u.x[i]);
      sse += e * e;
      sst += (u.y[i].as_number() - mean) * (u.y[i].as_number() - mean);
    }
    r.rmse = std::sqrt(sse / n);
    if (sst > 0.0) {
      r.r_squared = 1.0 - sse / sst;
    } else {
      r.r_squared = sse == 0.0 ? 1.0 : 0.0;
    }
  } else if (spec_.kind == RelationshipKind::isolation_forest) {
    r.score_min = std::numeric_limits<double>::infinity();
    r.score_max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& x : u.x) {
      const double s = iso_score(f, numeric_inputs(x));
      r.score_min = std::min(r.score_min, s);
      r.score_max = std::max(r.score_max, s);
      sum += s;
    }
    r.score_mean = sum / n;
  } else {
    double sum = 0.0;
    for (const auto& x : u.x) sum += std::log(std::max(score_value(spec_, f, numeric_inputs(x)), 1e-300));
    r.mean_log_likelihood = sum / n;
    if (spec_.kind == RelationshipKind::normal_distribution) {
      r.parameters = {f.mean, f.sd};
    } else {
      r.parameters = {f.h};
    }
  }
  return r;
}

}  // namespace ig
