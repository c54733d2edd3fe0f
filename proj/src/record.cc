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

#include "sparqlbench/record.h"

#include "sparqlbench/errors.h"

namespace sparqlbench {

using nlohmann::json;

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::InvalidFormatOrQuery: return "invalid_format_or_query";
    case ErrorCategory::EmptyAnswer: return "empty_answer";
    case ErrorCategory::IncorrectEntitySet: return "incorrect_entity_set";
    case ErrorCategory::KGUriLeak: return "kg_uri_leak";
  }
  return "unknown";
}

std::string GenerationRecord::triple_key() const {
  return dataset + "\x1f" + model + "\x1f" + std::string(to_string(strategy)) + "\x1f" +
         item_id;
}

namespace {

json opt(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> opt_get(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

json GenerationRecord::to_json() const {
  json cats = json::array();
  for (auto c : error_categories) cats.push_back(static_cast<int>(c));
  return {{"item_id", item_id},
          {"model", model},
          {"strategy", to_string(strategy)},
          {"dataset", dataset},
          {"raw_response", raw_response},
          {"generation_error", opt(generation_error)},
          {"latency_ms", latency_ms},
          {"request_id", request_id},
          {"attempts", attempts},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"scored", scored},
          {"extracted_query", opt(extracted_query)},
          {"extraction_error", opt(extraction_error)},
          {"unmasked_query", opt(unmasked_query)},
          {"unknown_mask_tokens", unknown_mask_tokens},
          {"leaked_terms", leaked_terms},
          {"validation", validation.to_json()},
          {"execution", execution ? execution->to_json() : json(nullptr)},
          {"answer_matches", answer_matches},
          {"correct", correct},
          {"error_categories", cats}};
}

GenerationRecord GenerationRecord::from_json(const json& j) {
  GenerationRecord r;
  try {
    r.item_id = j.at("item_id").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.strategy = parse_strategy(j.at("strategy").get<std::string>());
    r.dataset = j.at("dataset").get<std::string>();
    r.raw_response = j.value("raw_response", "");
    r.generation_error = opt_get(j, "generation_error");
    r.latency_ms = j.value("latency_ms", 0.0);
    r.request_id = j.value("request_id", "");
    r.attempts = j.value("attempts", 0);
    r.started_at = j.value("started_at", "");
    r.finished_at = j.value("finished_at", "");
    r.scored = j.value("scored", false);
    r.extracted_query = opt_get(j, "extracted_query");
    r.extraction_error = opt_get(j, "extraction_error");
    r.unmasked_query = opt_get(j, "unmasked_query");
    r.unknown_mask_tokens =
        j.value("unknown_mask_tokens", std::vector<std::string>{});
    r.leaked_terms = j.value("leaked_terms", std::vector<std::string>{});
    if (j.contains("validation")) r.validation = ValidationOutcome::from_json(j["validation"]);
    if (j.contains("execution") && !j["execution"].is_null()) {
      r.execution = ExecutionResult::from_json(j["execution"]);
    }
    r.answer_matches = j.value("answer_matches", false);
    r.correct = j.value("correct", false);
    for (const auto& c : j.value("error_categories", json::array())) {
      int v = c.get<int>();
      if (v < 1 || v > 4) throw SchemaError("error category out of range");
      r.error_categories.insert(static_cast<ErrorCategory>(v));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed generation record: ") + e.what());
  }
  return r;
}

}  // namespace sparqlbench
