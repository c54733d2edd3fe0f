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

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/endpoint.h"
#include "sparqlbench/rdf.h"

namespace sparqlbench {

struct TermBinding {
  std::string term;  // prefixed form, e.g. "wd:Q40984"
  std::string label;
  TermKind kind = TermKind::Entity;

  bool operator==(const TermBinding&) const = default;
};

std::string_view to_string(TermKind kind);
nlohmann::json to_json(const TermBinding& b);
TermBinding binding_from_json(const nlohmann::json& j);

// KG terms of a gold query in first-occurrence order, deduplicated and
// normalized to prefixed form. Throws ParseError.
std::vector<std::string> extract_terms(std::string_view gold_query,
                                       const KgConfig& kg = KgConfig::wikidata());

// Stable reorder: entities first, then properties.
std::vector<TermBinding> order_for_injection(std::vector<TermBinding> bindings);

struct CachedLabel {
  std::string label;
  std::string language;
};

// Persistent label cache, JSONL of {iri, label, language}. Concurrent reads,
// serialized appends. An empty path keeps the cache in memory only.
class LabelCache {
 public:
  explicit LabelCache(std::filesystem::path path = {});

  std::optional<CachedLabel> get(const std::string& iri) const;
  void put(const std::string& iri, const CachedLabel& label);
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, CachedLabel> entries_;
};

struct LabelResolution {
  std::vector<TermBinding> bindings;  // input order
  std::vector<std::string> warnings;  // non-English fallbacks
};

// Pairs each term with the English label of its label-bearing entity,
// falling back to another language when English is absent. Cache first;
// misses are fetched with at most `concurrency` requests in flight.
// Throws LabelNotFound (after resolving every other term) or EndpointError.
LabelResolution resolve_labels(const std::vector<std::string>& terms,
                               SparqlEndpoint& endpoint, LabelCache& cache,
                               const KgConfig& kg = KgConfig::wikidata(),
                               std::size_t concurrency = 4);

// The label lookup issued for one IRI.
std::string label_query(const std::string& iri, bool english_only);

}  // namespace sparqlbench
