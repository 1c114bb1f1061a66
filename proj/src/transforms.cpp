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

#include "ig/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "ig/error.hpp"
#include "json_util.hpp"

namespace ig {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct KeyHash {
  std::size_t operator()(const std::vector<Value>& key) const {
    std::size_t h = 0x84222325;
    for (const auto& v : key) h = (h ^ hash_value(v)) * 0x100000001b3ULL;
    return h;
  }
};

// Working relation threaded through the steps.
struct Frame {
  Schema schema;
  std::vector<std::optional<SourceAttribute>> origin;
  std::vector<std::vector<Value>> columns;
  std::size_t rows = 0;
  std::vector<std::size_t> group_keys;
  bool grouped = false;
  bool ordered = false;

  std::size_t index_of(const std::string& name) const {
    if (is_wildcard(name)) throw NotExecutableError("wildcard attribute in an executable pipeline");
    for (std::size_t i = 0; i < schema.size(); ++i) {
      if (schema[i].name == name) return i;
    }
    throw SchemaError("unknown attribute '" + name + "'");
  }

  void keep_rows(const std::vector<std::size_t>& keep) {
    for (auto& col : columns) {
      std::vector<Value> next;
      next.reserve(keep.size());
      for (auto r : keep) next.push_back(std::move(col[r]));
      col = std::move(next);
    }
    rows = keep.size();
  }
};

class Executor {
 public:
  Executor(const TransformSpec& spec, const Datasets& datasets) : spec_(spec), datasets_(datasets) {}

  PipelineResult run() {
    if (spec_.sources.empty()) throw SchemaError("a transform spec needs at least one source");
    if (contains_wildcard(spec_)) throw NotExecutableError("transform spec contains wildcards (objective, not executable)");
    for (const auto& s : spec_.sources) datasets_.at(s);

    const Table& first = datasets_.at(spec_.sources.front());
    frame_.schema = first.schema();
    frame_.columns = first.columns();
    frame_.rows = first.row_count();
    for (const auto& a : first.schema()) frame_.origin.emplace_back(SourceAttribute{spec_.sources.front(), a.name});

    for (std::size_t i = 0; i < spec_.steps.size(); ++i) {
      step_index_ = i;
      std::visit(Overloaded{
                     [&](const WildcardStep&) { throw NotExecutableError("wildcard step"); },
                     [&](const GroupBy& s) { apply(s); },
                     [&](const Rollup& s) { apply(s); },
                     [&](const OrderBy& s) { apply(s); },
                     [&](const Filter& s) { apply(s); },
                     [&](const Derive& s) { apply(s); },
                     [&](const Bin& s) { apply(s); },
                     [&](const Join& s) { apply(s); },
                 },
                 spec_.steps[i]);
    }

    PipelineResult out;
    out.referenced = std::move(referenced_);
    if (frame_.schema.empty()) {
      out.table = Table::from_rows(spec_.sources.front(), {}, std::vector<std::vector<Value>>(frame_.rows));
    } else {
      out.table = Table(spec_.sources.front(), std::move(frame_.schema), std::move(frame_.columns));
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError("step " + std::to_string(step_index_) + ": " + what);
  }

  void touch(std::size_t column) {
    if (frame_.origin[column]) referenced_.insert(*frame_.origin[column]);
  }

  void touch_expr(const Expr& e) {
    for (const auto& name : referenced_columns(e)) touch(frame_.index_of(name));
  }

  // Row partitions in first-appearance order; one partition when ungrouped.
  std::vector<std::vector<std::size_t>> partitions() const {
    std::vector<std::vector<std::size_t>> parts;
    if (!frame_.grouped) {
      parts.emplace_back(frame_.rows);
      std::iota(parts.back().begin(), parts.back().end(), std::size_t{0});
      return parts;
    }
    std::unordered_map<std::vector<Value>, std::size_t, KeyHash> index;
    std::vector<Value> key(frame_.group_keys.size());
    for (std::size_t r = 0; r < frame_.rows; ++r) {
      for (std::size_t k = 0; k < key.size(); ++k) key[k] = frame_.columns[frame_.group_keys[k]][r];
      auto [it, inserted] = index.try_emplace(key, parts.size());
      if (inserted) parts.emplace_back();
      parts[it->second].push_back(r);
    }
    return parts;
  }

  void apply(const GroupBy& s) {
    if (s.keys.empty()) fail("groupby needs at least one key");
    frame_.group_keys.clear();
    for (const auto& k : s.keys) {
      const auto c = frame_.index_of(k);
      touch(c);
      frame_.group_keys.push_back(c);
    }
    frame_.grouped = true;
  }

  void apply(const Rollup& s) {
    if (step_index_ != 0 && !std::holds_alternative<GroupBy>(spec_.steps[step_index_ - 1])) {
      fail("rollup must directly follow groupby or be the first step");
    }
    if (s.aggregates.empty()) fail("rollup needs at least one aggregate");
    std::vector<AggregateSlot> slots;
    Schema out_schema;
    std::vector<std::optional<SourceAttribute>> out_origin;
    for (auto k : frame_.group_keys) {
      out_schema.push_back(frame_.schema[k]);
      out_origin.push_back(frame_.origin[k]);
    }
    for (const auto& agg : s.aggregates) {
      if (agg.expr.kind != Expr::Kind::call || !is_aggregate(agg.expr.function)) {
        fail("rollup '" + agg.out_name + "' must be a single count/sum/mean/min/max call, got '" + to_string(agg.expr) +
             "'");
      }
      auto bound = bind_expression(agg.expr, frame_.schema, BindOptions{false, true});
      touch_expr(agg.expr);
      Attribute attr{agg.out_name, AttributeType::quantitative, {}};
      if (agg.expr.function == Function::min || agg.expr.function == Function::max) {
        attr.type = frame_.schema[bound.aggregates[0].column].type;
        attr.order = frame_.schema[bound.aggregates[0].column].order;
      }
      out_schema.push_back(std::move(attr));
      out_origin.emplace_back(std::nullopt);
      slots.push_back(bound.aggregates.front());
    }
    check_schema_names(out_schema);

    auto parts = partitions();
    if (!frame_.grouped && parts.front().empty() && frame_.rows == 0) {
      // Global rollup over an empty input still yields one row.
    }
    std::vector<std::vector<Value>> cols(out_schema.size());
    for (const auto& part : parts) {
      if (frame_.grouped && part.empty()) continue;
      std::size_t c = 0;
      for (auto k : frame_.group_keys) cols[c++].push_back(frame_.columns[k][part.front()]);
      for (const auto& slot : slots) cols[c++].push_back(compute_aggregate(slot, frame_.columns, part));
    }
    frame_.schema = std::move(out_schema);
    frame_.origin = std::move(out_origin);
    frame_.columns = std::move(cols);
    frame_.rows = frame_.columns.front().size();
    frame_.grouped = false;
    frame_.group_keys.clear();
    frame_.ordered = false;
  }

  void apply(const OrderBy& s) {
    if (s.keys.empty()) fail("orderby needs at least one key");
    std::vector<std::pair<std::size_t, SortDirection>> keys;
    for (const auto& k : s.keys) {
      const auto c = frame_.index_of(k.attribute);
      touch(c);
      keys.emplace_back(c, k.direction);
    }
    std::vector<std::size_t> perm(frame_.rows);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      for (const auto& [c, dir] : keys) {
        const Value& va = frame_.columns[c][a];
        const Value& vb = frame_.columns[c][b];
        if (va.is_null() && vb.is_null()) continue;
        // Nulls sort last ascending and first descending.
        if (va.is_null()) return dir == SortDirection::desc;
        if (vb.is_null()) return dir == SortDirection::asc;
        const auto cmp = compare_in_attribute(frame_.schema[c], va, vb);
        if (cmp == 0) continue;
        return dir == SortDirection::asc ? cmp < 0 : cmp > 0;
      }
      return false;
    });
    frame_.keep_rows(perm);
    frame_.ordered = true;
  }

  // Evaluates `bound` for every row; aggregates and rank are per partition.
  std::vector<Value> evaluate(const BoundExpression& bound) const {
    std::vector<Value> out(frame_.rows);
    std::vector<Value> aggs(bound.aggregates.size());
    for (const auto& part : partitions()) {
      for (std::size_t a = 0; a < aggs.size(); ++a) aggs[a] = compute_aggregate(bound.aggregates[a], frame_.columns, part);
      for (std::size_t i = 0; i < part.size(); ++i) {
        EvalContext ctx{i + 1, aggs};
        out[part[i]] = eval_expression(bound.root, frame_.columns, part[i], ctx);
      }
    }
    return out;
  }

  void apply(const Filter& s) {
    auto bound = bind_expression(s.predicate, frame_.schema, BindOptions{frame_.ordered, true});
    if (bound.root.type != StaticType::boolean && bound.root.type != StaticType::null) {
      fail("filter predicate '" + to_string(s.predicate) + "' is not boolean");
    }
    touch_expr(s.predicate);
    const auto values = evaluate(bound);
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < frame_.rows; ++r) {
      if (!values[r].is_null() && values[r].as_bool()) keep.push_back(r);
    }
    frame_.keep_rows(keep);
  }

  void apply(const Derive& s) {
    if (s.out_name.empty()) fail("derive needs an output name");
    auto bound = bind_expression(s.expr, frame_.schema, BindOptions{false, true});
    touch_expr(s.expr);
    auto values = evaluate(bound);
    Attribute attr{s.out_name, AttributeType::nominal, {}};
    switch (bound.root.type) {
      case StaticType::number: attr.type = AttributeType::quantitative; break;
      case StaticType::date: attr.type = AttributeType::temporal; break;
      case StaticType::string:
        if (bound.root.kind == Expr::Kind::column) {
          attr.type = frame_.schema[bound.root.column].type;
          attr.order = frame_.schema[bound.root.column].order;
        }
        break;
      case StaticType::boolean:
        for (auto& v : values) {
          if (!v.is_null()) v = Value(v.as_bool() ? "true" : "false");
        }
        break;
      case StaticType::null: break;
    }
    if (auto existing = std::find_if(frame_.schema.begin(), frame_.schema.end(),
                                     [&](const Attribute& a) { return a.name == s.out_name; });
        existing != frame_.schema.end()) {
      const auto c = static_cast<std::size_t>(existing - frame_.schema.begin());
      frame_.schema[c] = std::move(attr);
      frame_.origin[c] = std::nullopt;
      frame_.columns[c] = std::move(values);
      frame_.group_keys.erase(std::remove(frame_.group_keys.begin(), frame_.group_keys.end(), c),
                              frame_.group_keys.end());
      if (frame_.grouped && frame_.group_keys.empty()) frame_.grouped = false;
    } else {
      frame_.schema.push_back(std::move(attr));
      frame_.origin.emplace_back(std::nullopt);
      frame_.columns.push_back(std::move(values));
    }
  }

  void apply(const Bin& s) {
    const auto c = frame_.index_of(s.attribute);
    if (frame_.schema[c].type != AttributeType::quantitative) fail("bin needs a quantitative attribute");
    if (s.bin_count.has_value() == s.step.has_value()) fail("bin takes exactly one of a bin count or a step width");
    if (s.bin_count && *s.bin_count == 0) fail("bin count must be positive");
    if (s.step && !(*s.step > 0.0 && std::isfinite(*s.step))) fail("bin step must be positive");
    if (s.out_name.empty()) fail("bin needs an output name");
    touch(c);

    std::vector<std::size_t> keep;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t r = 0; r < frame_.rows; ++r) {
      const Value& v = frame_.columns[c][r];
      if (v.is_null()) continue;
      const double x = v.as_number();
      if (keep.empty()) lo = hi = x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      keep.push_back(r);
    }
    frame_.keep_rows(keep);

    const bool counted = s.bin_count.has_value();
    const std::size_t k = counted ? *s.bin_count : 0;
    const double width = counted ? (hi - lo) / static_cast<double>(k) : *s.step;
    auto start_of = [&](long i) { return lo + static_cast<double>(i) * width; };
    auto end_of = [&](long i) {
      if (counted && static_cast<std::size_t>(i) + 1 == k) return hi;
      return lo + static_cast<double>(i + 1) * width;
    };

    std::vector<Value> starts;
    std::vector<Value> ends;
    for (std::size_t r = 0; r < frame_.rows; ++r) {
      const double x = frame_.columns[c][r].as_number();
      long i = width > 0.0 ? static_cast<long>(std::floor((x - lo) / width)) : 0;
      const long last = counted ? static_cast<long>(k) - 1 : i + 1;
      i = std::clamp(i, 0L, std::max(0L, last));
      // Nudge across rounding at bin edges so x lands in [start, end).
      while (i > 0 && x < start_of(i)) --i;
      while (i < last && x >= end_of(i)) ++i;
      starts.emplace_back(start_of(i));
      ends.emplace_back(end_of(i));
    }
    for (auto suffix : {"_start", "_end"}) {
      frame_.schema.push_back(Attribute{s.out_name + suffix, AttributeType::quantitative, {}});
      frame_.origin.emplace_back(std::nullopt);
    }
    check_schema_names(frame_.schema);
    frame_.columns.push_back(std::move(starts));
    frame_.columns.push_back(std::move(ends));
  }

  void apply(const Join& s) {
    if (std::find(spec_.sources.begin(), spec_.sources.end(), s.right_source) == spec_.sources.end()) {
      fail("join source '" + s.right_source + "' is not listed in sources");
    }
    if (s.on.empty()) fail("join needs at least one key pair");
    const Table& right = datasets_.at(s.right_source);
    std::vector<std::size_t> lcols;
    std::vector<std::size_t> rcols;
    for (const auto& key : s.on) {
      if (is_wildcard(key.right)) throw NotExecutableError("wildcard join key");
      const auto lc = frame_.index_of(key.left);
      const auto rc = right.find_column(key.right);
      if (!rc) fail("unknown attribute '" + key.right + "' in join source '" + s.right_source + "'");
      auto family = [](AttributeType t) { return t == AttributeType::ordinal ? AttributeType::nominal : t; };
      if (family(frame_.schema[lc].type) != family(right.schema()[*rc].type)) {
        fail("join key types differ: '" + key.left + "' vs '" + key.right + "'");
      }
      touch(lc);
      referenced_.insert(SourceAttribute{s.right_source, key.right});
      lcols.push_back(lc);
      rcols.push_back(*rc);
    }

    std::unordered_map<std::vector<Value>, std::vector<std::size_t>, KeyHash> index;
    std::vector<Value> key(rcols.size());
    for (std::size_t r = 0; r < right.row_count(); ++r) {
      bool has_null = false;
      for (std::size_t k = 0; k < rcols.size(); ++k) {
        key[k] = right.at(r, rcols[k]);
        has_null = has_null || key[k].is_null();
      }
      if (!has_null) index[key].push_back(r);
    }

    std::vector<std::pair<std::size_t, std::size_t>> matches;
    for (std::size_t l = 0; l < frame_.rows; ++l) {
      bool has_null = false;
      for (std::size_t k = 0; k < lcols.size(); ++k) {
        key[k] = frame_.columns[lcols[k]][l];
        has_null = has_null || key[k].is_null();
      }
      if (has_null) continue;
      if (auto it = index.find(key); it != index.end()) {
        for (auto r : it->second) matches.emplace_back(l, r);
      }
    }

    std::vector<std::vector<Value>> cols(frame_.schema.size() + right.column_count());
    for (std::size_t c = 0; c < frame_.schema.size(); ++c) {
      cols[c].reserve(matches.size());
      for (const auto& [l, r] : matches) cols[c].push_back(frame_.columns[c][l]);
    }
    for (std::size_t c = 0; c < right.column_count(); ++c) {
      auto& col = cols[frame_.schema.size() + c];
      col.reserve(matches.size());
      for (const auto& [l, r] : matches) col.push_back(right.at(r, c));
    }
    for (const auto& attr : right.schema()) {
      Attribute out = attr;
      auto taken = [&](const std::string& n) {
        return std::any_of(frame_.schema.begin(), frame_.schema.end(), [&](const Attribute& a) { return a.name == n; });
      };
      while (taken(out.name)) out.name += "_r";
      frame_.schema.push_back(std::move(out));
      frame_.origin.emplace_back(SourceAttribute{s.right_source, attr.name});
    }
    frame_.columns = std::move(cols);
    frame_.rows = matches.size();
    frame_.ordered = false;
  }

  const TransformSpec& spec_;
  const Datasets& datasets_;
  Frame frame_;
  std::set<SourceAttribute> referenced_;
  std::size_t step_index_ = 0;
};

bool name_matches(const std::string& tmpl, const std::string& concrete) {
  return is_wildcard(tmpl) || tmpl == concrete;
}

bool step_matches(const TransformStep& tmpl, const TransformStep& concrete) {
  if (std::holds_alternative<WildcardStep>(tmpl)) return true;
  if (tmpl.index() != concrete.index()) return false;
  return std::visit(
      Overloaded{
          [&](const WildcardStep&) { return true; },
          [&](const GroupBy& t) {
            const auto& c = std::get<GroupBy>(concrete);
            return std::equal(t.keys.begin(), t.keys.end(), c.keys.begin(), c.keys.end(), name_matches);
          },
          [&](const Rollup& t) {
            const auto& c = std::get<Rollup>(concrete);
            return std::equal(t.aggregates.begin(), t.aggregates.end(), c.aggregates.begin(), c.aggregates.end(),
                              [](const AggregateSpec& a, const AggregateSpec& b) {
                                return name_matches(a.out_name, b.out_name) && match_with_wildcards(a.expr, b.expr);
                              });
          },
          [&](const OrderBy& t) {
            const auto& c = std::get<OrderBy>(concrete);
            return std::equal(t.keys.begin(), t.keys.end(), c.keys.begin(), c.keys.end(),
                              [](const SortKey& a, const SortKey& b) {
                                return name_matches(a.attribute, b.attribute) && a.direction == b.direction;
                              });
          },
          [&](const Filter& t) { return match_with_wildcards(t.predicate, std::get<Filter>(concrete).predicate); },
          [&](const Derive& t) {
            const auto& c = std::get<Derive>(concrete);
            return name_matches(t.out_name, c.out_name) && match_with_wildcards(t.expr, c.expr);
          },
          [&](const Bin& t) {
            const auto& c = std::get<Bin>(concrete);
            return name_matches(t.attribute, c.attribute) && t.bin_count == c.bin_count && t.step == c.step &&
                   name_matches(t.out_name, c.out_name);
          },
          [&](const Join& t) {
            const auto& c = std::get<Join>(concrete);
            return t.right_source == c.right_source &&
                   std::equal(t.on.begin(), t.on.end(), c.on.begin(), c.on.end(), [](const JoinKey& a, const JoinKey& b) {
                     return name_matches(a.left, b.left) && name_matches(a.right, b.right);
                   });
          },
      },
      tmpl);
}

Json expr_json(const Expr& e) { return to_string(e); }

Expr expr_from(const Json& j, std::string_view context) { return parse_expression(detail::as_string(j, context)); }

}  // namespace

bool contains_wildcard(const TransformStep& step) {
  auto any_name = [](const auto&... names) { return (is_wildcard(names) || ...); };
  return std::visit(
      Overloaded{
          [](const WildcardStep&) { return true; },
          [&](const GroupBy& s) { return std::any_of(s.keys.begin(), s.keys.end(), is_wildcard); },
          [&](const Rollup& s) {
            return std::any_of(s.aggregates.begin(), s.aggregates.end(), [](const AggregateSpec& a) {
              return is_wildcard(a.out_name) || contains_wildcard(a.expr);
            });
          },
          [&](const OrderBy& s) {
            return std::any_of(s.keys.begin(), s.keys.end(), [](const SortKey& k) { return is_wildcard(k.attribute); });
          },
          [&](const Filter& s) { return contains_wildcard(s.predicate); },
          [&](const Derive& s) { return is_wildcard(s.out_name) || contains_wildcard(s.expr); },
          [&](const Bin& s) { return any_name(s.attribute, s.out_name); },
          [&](const Join& s) {
            return std::any_of(s.on.begin(), s.on.end(), [](const JoinKey& k) { return is_wildcard(k.left) || is_wildcard(k.right); });
          },
      },
      step);
}

bool contains_wildcard(const TransformSpec& spec) {
  return std::any_of(spec.steps.begin(), spec.steps.end(),
                     [](const TransformStep& s) { return contains_wildcard(s); });
}

PipelineResult execute_pipeline_traced(const TransformSpec& spec, const Datasets& datasets) {
  return Executor(spec, datasets).run();
}

Table execute_pipeline(const TransformSpec& spec, const Datasets& datasets) {
  return execute_pipeline_traced(spec, datasets).table;
}

std::set<SourceAttribute> referenced_attributes(const TransformSpec& spec, const Datasets& datasets) {
  // Binding over schema-only copies visits every step without touching data.
  Datasets empty;
  for (const auto& name : spec.sources) {
    const Table& t = datasets.at(name);
    empty.add(name, Table(t.name(), t.schema(), std::vector<std::vector<Value>>(t.column_count())));
  }
  return execute_pipeline_traced(spec, empty).referenced;
}

bool match_with_wildcards(const TransformSpec& tmpl, const TransformSpec& concrete) {
  if (tmpl.sources != concrete.sources) return false;
  return std::equal(tmpl.steps.begin(), tmpl.steps.end(), concrete.steps.begin(), concrete.steps.end(), step_matches);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Json step_to_json(const TransformStep& step) {
  return std::visit(
      Overloaded{
          [](const WildcardStep&) -> Json { return std::string(kWildcard); },
          [](const GroupBy& s) -> Json { return {{"op", "groupby"}, {"args", {{"keys", s.keys}}}}; },
          [](const Rollup& s) -> Json {
            Json aggs = Json::array();
            for (const auto& a : s.aggregates) aggs.push_back({{"as", a.out_name}, {"expr", expr_json(a.expr)}});
            return {{"op", "rollup"}, {"args", {{"aggregates", aggs}}}};
          },
          [](const OrderBy& s) -> Json {
            Json keys = Json::array();
            for (const auto& k : s.keys) {
              keys.push_back({{"attribute", k.attribute}, {"direction", k.direction == SortDirection::asc ? "asc" : "desc"}});
            }
            return {{"op", "orderby"}, {"args", {{"keys", keys}}}};
          },
          [](const Filter& s) -> Json { return {{"op", "filter"}, {"args", {{"predicate", expr_json(s.predicate)}}}}; },
          [](const Derive& s) -> Json {
            return {{"op", "derive"}, {"args", {{"as", s.out_name}, {"expr", expr_json(s.expr)}}}};
          },
          [](const Bin& s) -> Json {
            Json args = {{"attribute", s.attribute}};
            if (s.bin_count) args["bins"] = *s.bin_count;
            if (s.step) args["step"] = *s.step;
            args["as"] = s.out_name;
            return {{"op", "bin"}, {"args", args}};
          },
          [](const Join& s) -> Json {
            Json on = Json::array();
            for (const auto& k : s.on) on.push_back({{"left", k.left}, {"right", k.right}});
            return {{"op", "join"}, {"args", {{"right", s.right_source}, {"on", on}}}};
          },
      },
      step);
}

TransformStep step_from_json(const Json& j) {
  if (j.is_string() && is_wildcard(j.get<std::string>())) return WildcardStep{};
  const std::string op = detail::require_string(j, "op", "transform step");
  const std::string ctx = "transform step '" + op + "'";
  const Json& args = detail::require(j, "args", ctx);
  if (op == "groupby") return GroupBy{detail::as_string_list(detail::require(args, "keys", ctx), ctx)};
  if (op == "rollup") {
    Rollup r;
    const Json& aggs = detail::require(args, "aggregates", ctx);
    if (!aggs.is_array()) throw ParseError(ctx + ": aggregates must be an array");
    for (const auto& a : aggs) {
      r.aggregates.push_back({detail::require_string(a, "as", ctx), expr_from(detail::require(a, "expr", ctx), ctx)});
    }
    return r;
  }
  if (op == "orderby") {
    OrderBy o;
    const Json& keys = detail::require(args, "keys", ctx);
    if (!keys.is_array()) throw ParseError(ctx + ": keys must be an array");
    for (const auto& k : keys) {
      SortKey key;
      key.attribute = detail::require_string(k, "attribute", ctx);
      const Json* dir = detail::optional_field(k, "direction");
      const std::string d = dir ? detail::as_string(*dir, ctx) : "asc";
      if (d != "asc" && d != "desc") throw ParseError(ctx + ": direction must be asc or desc");
      key.direction = d == "asc" ? SortDirection::asc : SortDirection::desc;
      o.keys.push_back(std::move(key));
    }
    return o;
  }
  if (op == "filter") return Filter{expr_from(detail::require(args, "predicate", ctx), ctx)};
  if (op == "derive") {
    return Derive{detail::require_string(args, "as", ctx), expr_from(detail::require(args, "expr", ctx), ctx)};
  }
  if (op == "bin") {
    Bin b;
    b.attribute = detail::require_string(args, "attribute", ctx);
    if (const Json* n = detail::optional_field(args, "bins")) {
      if (!n->is_number_unsigned()) throw ParseError(ctx + ": bins must be a positive integer");
      b.bin_count = n->get<std::size_t>();
    }
    if (const Json* st = detail::optional_field(args, "step")) {
      if (!st->is_number()) throw ParseError(ctx + ": step must be a number");
      b.step = st->get<double>();
    }
    b.out_name = detail::require_string(args, "as", ctx);
    return b;
  }
  if (op == "join") {
    Join jn;
    jn.right_source = detail::require_string(args, "right", ctx);
    const Json& on = detail::require(args, "on", ctx);
    if (!on.is_array()) throw ParseError(ctx + ": on must be an array");
    for (const auto& k : on) jn.on.push_back({detail::require_string(k, "left", ctx), detail::require_string(k, "right", ctx)});
    return jn;
  }
  throw ParseError("unknown transform op '" + op + "'");
}

}  // namespace

Json transform_spec_to_json(const TransformSpec& spec) {
  Json steps = Json::array();
  for (const auto& s : spec.steps) steps.push_back(step_to_json(s));
  return {{"sources", spec.sources}, {"transforms", steps}};
}

TransformSpec transform_spec_from_json(const Json& json) {
  TransformSpec spec;
  spec.sources = detail::as_string_list(detail::require(json, "sources", "transform spec"), "transform spec sources");
  const Json& steps = detail::require(json, "transforms", "transform spec");
  if (!steps.is_array()) throw ParseError("transform spec: transforms must be an array");
  for (const auto& s : steps) spec.steps.push_back(step_from_json(s));
  return spec;
}

}  // namespace ig
