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

#include "sparqlbench/sparql_eval.h"

#include <mutex>
#include <set>

#include "sparqlbench/errors.h"
#include "sparqlbench/sparql/parser.h"
#include "sparqlbench/util/hash.h"
#include "sparqlbench/util/io.h"

namespace sparqlbench {

using nlohmann::json;

namespace {

json optional_string(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

std::optional<std::string> read_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

json ValidationOutcome::to_json() const {
  return {{"syntactically_valid", syntactically_valid},
          {"executable", executable},
          {"syntax_error", optional_string(syntax_error)},
          {"execution_error", optional_string(execution_error)}};
}

ValidationOutcome ValidationOutcome::from_json(const json& j) {
  ValidationOutcome v;
  v.syntactically_valid = j.at("syntactically_valid").get<bool>();
  v.executable = j.at("executable").get<bool>();
  v.syntax_error = read_optional(j, "syntax_error");
  v.execution_error = read_optional(j, "execution_error");
  return v;
}

ValidationOutcome validate_syntax(std::string_view query, const PrefixMap& prefixes) {
  ValidationOutcome v;
  if (auto err = sparql::check_syntax(query, prefixes)) {
    v.syntax_error = err->what();
  } else {
    v.syntactically_valid = true;
  }
  return v;
}

std::string_view to_string(ResultKind kind) {
  switch (kind) {
    case ResultKind::Bindings: return "bindings";
    case ResultKind::Boolean: return "boolean";
    case ResultKind::Failed: return "failed";
  }
  return "unknown";
}

json ExecutionResult::to_json() const {
  json j = {{"kind", to_string(kind)},
            {"row_count", row_count},
            {"truncated", truncated},
            {"transport_failure", transport_failure},
            {"diagnostic", diagnostic}};
  j["answer"] = kind == ResultKind::Failed ? json(nullptr) : answer_to_results_json(answer);
  return j;
}

ExecutionResult ExecutionResult::from_json(const json& j) {
  ExecutionResult r;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "bindings") {
    r.kind = ResultKind::Bindings;
  } else if (kind == "boolean") {
    r.kind = ResultKind::Boolean;
  } else if (kind == "failed") {
    r.kind = ResultKind::Failed;
  } else {
    throw SchemaError("unknown execution result kind '" + kind + "'");
  }
  r.row_count = j.at("row_count").get<std::size_t>();
  r.truncated = j.value("truncated", false);
  r.transport_failure = j.value("transport_failure", false);
  r.diagnostic = j.value("diagnostic", "");
  if (r.kind != ResultKind::Failed) r.answer = answer_from_results_json(j.at("answer"));
  return r;
}

ExecutionCache::ExecutionCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  bool torn = false;
  for (const auto& row : util::read_jsonl(path_, &torn)) {
    try {
      entries_[row.at("query_hash").get<std::string>()] =
          ExecutionResult::from_json(row.at("result"));
    } catch (const std::exception&) {
      // A damaged entry is a cache miss.
    }
  }
}

std::string ExecutionCache::key(std::string_view endpoint_id, std::string_view query) {
  std::string material(endpoint_id);
  material += '\n';
  material += query;
  return util::sha256_hex(material);
}

std::optional<ExecutionResult> ExecutionCache::get(std::string_view endpoint_id,
                                                   std::string_view query) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(key(endpoint_id, query));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ExecutionCache::put(std::string_view endpoint_id, std::string_view query,
                         const ExecutionResult& result) {
  std::string k = key(endpoint_id, query);
  std::unique_lock lock(mu_);
  if (!entries_.emplace(k, result).second) return;
  if (!path_.empty()) {
    util::JsonlAppender(path_).append(
        json{{"query_hash", k}, {"endpoint", endpoint_id}, {"result", result.to_json()}});
  }
}

std::size_t ExecutionCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

ExecutionResult execute(const std::string& query, SparqlEndpoint& endpoint,
                        std::size_t row_cap, ExecutionCache* cache) {
  const std::string endpoint_id = endpoint.id();
  if (cache) {
    if (auto hit = cache->get(endpoint_id, query)) return *hit;
  }
  ExecutionResult result;
  EndpointReply reply = endpoint.query(query);
  if (!reply.ok) {
    result.kind = ResultKind::Failed;
    // Retries already ran out; such failures may succeed later.
    result.transport_failure = reply.transport_failure || reply.status == 429 ||
                               reply.status >= 500;
    result.diagnostic = reply.diagnostic.empty() ? "endpoint error" : reply.diagnostic;
  } else {
    try {
      SparqlResults decoded = SparqlResults::from_json(json::parse(reply.body));
      if (decoded.is_boolean) {
        result.kind = ResultKind::Boolean;
        result.answer = AnswerSet::boolean(decoded.boolean_value);
        result.row_count = 1;
      } else {
        result.kind = ResultKind::Bindings;
        result.row_count = decoded.rows.size();
        if (row_cap > 0 && decoded.rows.size() > row_cap) {
          decoded.rows.resize(row_cap);
          result.truncated = true;
          result.diagnostic = "result truncated at " + std::to_string(row_cap) + " of " +
                              std::to_string(result.row_count) + " rows";
        }
        result.answer = decoded.flatten();
      }
    } catch (const std::exception& e) {
      result = ExecutionResult{};
      result.kind = ResultKind::Failed;
      result.diagnostic = std::string("undecodable endpoint response: ") + e.what();
    }
  }
  if (cache && !result.transport_failure) cache->put(endpoint_id, query, result);
  return result;
}

bool compare(const ExecutionResult& result, const AnswerSet& gold,
             const PrefixMap& prefixes) {
  if (result.kind == ResultKind::Failed || result.truncated) return false;
  const AnswerSet& got = result.answer;
  bool got_bool = got.kind() == AnswerKind::Boolean;
  bool gold_bool = gold.kind() == AnswerKind::Boolean;
  if (got_bool != gold_bool) return false;
  if (got_bool) return got.truth() == gold.truth();
  if (got.empty() != gold.empty()) return false;
  auto normalized = [&](const AnswerSet& a) {
    std::set<RdfTerm> out;
    for (const auto& t : a.values()) out.insert(normalize_term(t, prefixes));
    return out;
  };
  return normalized(got) == normalized(gold);
}

}  // namespace sparqlbench
