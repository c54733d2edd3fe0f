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

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/prompting.h"
#include "sparqlbench/util/concurrency.h"
#include "sparqlbench/util/http.h"

namespace sparqlbench {

struct ModelConfig {
  std::string name;
  // OpenAI-compatible API root; requests go to {base_url}/chat/completions.
  // "mock:<mode>" selects an in-process stub (see mock_model.h).
  std::string base_url = "http://localhost:11434/v1";
  double temperature = 0.0;
  int max_tokens = 1024;
  std::chrono::milliseconds timeout{120000};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};
  // Unset: decided by matching the name against reasoning_model_patterns.
  std::optional<bool> strip_reasoning;
  std::string api_key_env = "SPARQLBENCH_API_KEY";
  double requests_per_second = 0.0;  // 0 disables the limiter
  std::size_t concurrency = 4;

  bool effective_strip_reasoning() const;
  nlohmann::json to_json() const;
  // Throws ConfigError on invariant violations.
  static ModelConfig from_json(const nlohmann::json& j);
};

// Case-insensitive substrings that mark reasoning models emitting
// <think> blocks.
const std::vector<std::string>& reasoning_model_patterns();

struct RawResponse {
  std::string text;
  double latency_ms = 0;
  std::string request_id;
  int attempts = 0;
};

// Chat-completions client. Every call is a fresh single-message
// conversation; nothing is carried between calls.
class LlmClient {
 public:
  LlmClient(ModelConfig config, std::shared_ptr<util::HttpTransport> transport);
  // Throws TransportError once retries are exhausted (transport failures,
  // 429 and 5xx are retried) and ModelRefusal on other non-2xx statuses or
  // a response without message content.
  RawResponse generate(const PromptText& prompt);
  const ModelConfig& config() const { return config_; }

 private:
  ModelConfig config_;
  std::shared_ptr<util::HttpTransport> transport_;
  util::TokenBucket bucket_;
};

// The request body sent for one prompt.
nlohmann::json chat_request_body(const ModelConfig& config, std::string_view prompt);

// Candidate query from a raw model response:
//  1. drop <think>...</think> spans when strip_reasoning is set,
//  2. take the query field of a JSON object response,
//  3. strip Markdown code fences,
//  4. drop prose before the first query keyword when the rest parses.
// Throws FormatError when nothing non-empty remains.
std::string extract_query(std::string_view response, bool strip_reasoning);
inline std::string extract_query(const RawResponse& response, bool strip_reasoning) {
  return extract_query(response.text, strip_reasoning);
}

}  // namespace sparqlbench
