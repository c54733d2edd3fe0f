// Copyright 2026 The sparqlbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlbench/rdf.h"
#include "sparqlbench/util/http.h"

namespace sparqlbench {

// In-process chat-completions stubs for offline end-to-end runs.
//   gold      returns the item's gold query; under masked prompts the KG
//             terms are replaced by the tokens the prompt listed
//   garbage   returns prose that is not a query
//   leaky     returns the gold query unchanged under every strategy
//   unmapped  returns the gold query with KG terms replaced by kg: tokens
//             that no mapping contains
enum class MockMode { Gold, Garbage, Leaky, Unmapped };

std::string_view to_string(MockMode mode);
// Throws ConfigError.
MockMode parse_mock_mode(std::string_view name);

struct MockItem {
  std::string gold_query;
  // Terms in the order the injection block lists them.
  std::vector<std::string> ordered_terms;
};

// Maps question text (as it appears in the prompt) to what the stub needs.
class MockOracle {
 public:
  void add(const std::string& question, MockItem item);
  const MockItem* find(const std::string& question) const;
  std::size_t size() const { return items_.size(); }

 private:
  std::map<std::string, MockItem> items_;
};

// The stub assumes prompts rendered from the built-in templates.
std::shared_ptr<util::HttpTransport> make_mock_transport(
    MockMode mode, std::shared_ptr<const MockOracle> oracle,
    KgConfig kg = KgConfig::wikidata());

// Replaces each KG IRI reference of `query` (prefixed or full) with
// replacement(prefixed_term); an empty replacement keeps the original.
std::string rewrite_kg_terms(
    std::string_view query, const KgConfig& kg,
    const std::function<std::string(const std::string&)>& replacement);

}  // namespace sparqlbench
