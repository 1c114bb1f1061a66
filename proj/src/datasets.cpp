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

#include "ig/datasets.hpp"

#include <atomic>

#include "ig/error.hpp"

namespace ig {

namespace {

std::uint64_t next_identity() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

}  // namespace

Datasets::Datasets() : identity_(next_identity()) {}

void Datasets::add(std::string name, Table table) {
  tables_.insert_or_assign(std::move(name), std::move(table));
  identity_ = next_identity();
}

const Table* Datasets::find(std::string_view name) const {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

const Table& Datasets::at(std::string_view name) const {
  if (const Table* t = find(name)) return *t;
  throw SchemaError("unresolved dataset '" + std::string(name) + "'");
}

std::vector<std::string> Datasets::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : tables_) out.push_back(name);
  return out;
}

}  // namespace ig
