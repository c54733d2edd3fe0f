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

#include <nlohmann/json.hpp>

#include "sparqlbench/endpoint.h"
#include "sparqlbench/rdf.h"

namespace sparqlbench {

struct ValidationOutcome {
  bool syntactically_valid = false;
  bool executable = false;  // implies syntactically_valid
  std::optional<std::string> syntax_error;
  std::optional<std::string> execution_error;

  nlohmann::json to_json() const;
  static ValidationOutcome from_json(const nlohmann::json& j);
  bool operator==(const ValidationOutcome&) const = default;
};

// Grammar check with the standard prefixes (Wikidata's plus kg:) bound
// unless the query redeclares them. `executable` is left false.
ValidationOutcome validate_syntax(std::string_view query,
                                  const PrefixMap& prefixes = validation_prefixes());

enum class ResultKind { Bindings, Boolean, Failed };

std::string_view to_string(ResultKind kind);

struct ExecutionResult {
  ResultKind kind = ResultKind::Failed;
  AnswerSet answer;
  std::size_t row_count = 0;
  bool truncated = false;  // more rows than the cap; never scored correct
  bool transport_failure = false;  // no response, 429 or 5xx; not cached
  std::string diagnostic;

  nlohmann::json to_json() const;
  static ExecutionResult from_json(const nlohmann::json& j);
  bool operator==(const ExecutionResult&) const = default;
};

// Persistent execution cache, JSONL of {query_hash, endpoint, result}.
// An empty path keeps it in memory.
class ExecutionCache {
 public:
  explicit ExecutionCache(std::filesystem::path path = {});
  static std::string key(std::string_view endpoint_id, std::string_view query);

  std::optional<ExecutionResult> get(std::string_view endpoint_id,
                                     std::string_view query) const;
  void put(std::string_view endpoint_id, std::string_view query,
           const ExecutionResult& result);
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, ExecutionResult> entries_;
};

// Runs the query. Endpoint and decoding failures come back as kind=Failed;
// results above row_cap are truncated and flagged. Transport failures are
// not cached.
ExecutionResult execute(const std::string& query, SparqlEndpoint& endpoint,
                        std::size_t row_cap = 10000, ExecutionCache* cache = nullptr);

// Answer-set equality after term normalization. Failed or truncated results,
// boolean/non-boolean mismatches and empty-vs-non-empty sets are unequal.
bool compare(const ExecutionResult& result, const AnswerSet& gold,
             const PrefixMap& prefixes = wikidata_prefixes());

}  // namespace sparqlbench
