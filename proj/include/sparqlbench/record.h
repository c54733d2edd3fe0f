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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/prompting.h"
#include "sparqlbench/sparql_eval.h"

namespace sparqlbench {

enum class ErrorCategory {
  InvalidFormatOrQuery = 1,
  EmptyAnswer = 2,
  IncorrectEntitySet = 3,
  KGUriLeak = 4,
};

inline constexpr ErrorCategory kAllCategories[] = {
    ErrorCategory::InvalidFormatOrQuery, ErrorCategory::EmptyAnswer,
    ErrorCategory::IncorrectEntitySet, ErrorCategory::KGUriLeak};

std::string_view to_string(ErrorCategory category);
using CategorySet = std::set<ErrorCategory>;

// One (model, strategy, item) trial. Fields up to `attempts` are filled when
// the model is called; the rest when the trial is scored.
struct GenerationRecord {
  std::string item_id;
  std::string model;
  PromptStrategy strategy = PromptStrategy::ZeroShot;
  std::string dataset;
  std::string raw_response;
  std::optional<std::string> generation_error;  // transport failure or refusal
  double latency_ms = 0;
  std::string request_id;
  int attempts = 0;
  std::string started_at;
  std::string finished_at;

  bool scored = false;
  std::optional<std::string> extracted_query;  // absent when extraction failed
  std::optional<std::string> extraction_error;
  std::optional<std::string> unmasked_query;   // masked strategy only
  std::vector<std::string> unknown_mask_tokens;
  std::vector<std::string> leaked_terms;       // KG terms in the pre-unmask query
  ValidationOutcome validation;
  std::optional<ExecutionResult> execution;
  bool answer_matches = false;  // compare() verdict
  bool correct = false;         // answer matches and no KG term leaked
  CategorySet error_categories;

  // The (item, model, strategy, dataset) key.
  std::string triple_key() const;
  nlohmann::json to_json() const;
  static GenerationRecord from_json(const nlohmann::json& j);
  bool operator==(const GenerationRecord&) const = default;
};

}  // namespace sparqlbench
