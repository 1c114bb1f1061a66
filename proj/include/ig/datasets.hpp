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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ig/table.hpp"

namespace ig {

/// Named tables available to pipelines and models. Every mutation assigns a
/// fresh identity so cached results keyed on it never go stale.
class Datasets {
 public:
  Datasets();

  void add(std::string name, Table table);
  bool contains(std::string_view name) const { return tables_.find(name) != tables_.end(); }
  const Table* find(std::string_view name) const;
  /// Throws SchemaError for unknown names.
  const Table& at(std::string_view name) const;
  std::vector<std::string> names() const;
  std::size_t size() const { return tables_.size(); }

  std::uint64_t identity() const { return identity_; }

 private:
  std::map<std::string, Table, std::less<>> tables_;
  std::uint64_t identity_;
};

}  // namespace ig
