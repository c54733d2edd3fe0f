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

#include "sparqlbench/llm_client.h"

#include <algorithm>
#include <cctype>
#include <thread>

#include "sparqlbench/errors.h"
#include "sparqlbench/sparql/parser.h"
#include "sparqlbench/util/hash.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

using nlohmann::json;

const std::vector<std::string>& reasoning_model_patterns() {
  static const std::vector<std::string> kPatterns = {"deepseek-r1", "qwq", "r1-distill",
                                                     "reasoner"};
  return kPatterns;
}

bool ModelConfig::effective_strip_reasoning() const {
  if (strip_reasoning) return *strip_reasoning;
  std::string lower = util::to_lower_ascii(name);
  for (const auto& p : reasoning_model_patterns()) {
    if (lower.find(p) != std::string::npos) return true;
  }
  return false;
}

json ModelConfig::to_json() const {
  json j = {{"name", name},
            {"base_url", base_url},
            {"temperature", temperature},
            {"max_tokens", max_tokens},
            {"timeout_ms", timeout.count()},
            {"max_retries", max_retries},
            {"backoff_base_ms", backoff_base.count()},
            {"strip_reasoning", effective_strip_reasoning()},
            {"api_key_env", api_key_env},
            {"requests_per_second", requests_per_second},
            {"concurrency", concurrency}};
  return j;
}

ModelConfig ModelConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("model entry must be an object");
  ModelConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.base_url = j.value("base_url", c.base_url);
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout = std::chrono::milliseconds(
        j.value("timeout_ms", static_cast<long long>(c.timeout.count())));
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_base = std::chrono::milliseconds(
        j.value("backoff_base_ms", static_cast<long long>(c.backoff_base.count())));
    if (j.contains("strip_reasoning") && !j["strip_reasoning"].is_null()) {
      c.strip_reasoning = j["strip_reasoning"].get<bool>();
    }
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.requests_per_second = j.value("requests_per_second", c.requests_per_second);
    c.concurrency = j.value("concurrency", c.concurrency);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model entry: ") + e.what());
  }
  if (c.name.empty()) throw ConfigError("model name must not be empty");
  if (c.temperature < 0) throw ConfigError("model " + c.name + ": temperature must be >= 0");
  if (c.timeout.count() <= 0) throw ConfigError("model " + c.name + ": timeout must be > 0");
  if (c.max_retries < 0) throw ConfigError("model " + c.name + ": max_retries must be >= 0");
  if (c.max_tokens <= 0) throw ConfigError("model " + c.name + ": max_tokens must be > 0");
  return c;
}

json chat_request_body(const ModelConfig& config, std::string_view prompt) {
  return {{"model", config.name},
          {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
          {"temperature", config.temperature},
          {"max_tokens", config.max_tokens}};
}

LlmClient::LlmClient(ModelConfig config, std::shared_ptr<util::HttpTransport> transport)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      bucket_(config_.requests_per_second,
              std::max<double>(1.0, config_.requests_per_second)) {}

RawResponse LlmClient::generate(const PromptText& prompt) {
  util::HttpRequest request;
  request.method = "POST";
  std::string base = config_.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  request.url = base + "/chat/completions";
  request.content_type = "application/json";
  request.body = chat_request_body(config_, prompt.body).dump();
  request.timeout = config_.timeout;
  request.headers["Accept"] = "application/json";
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    request.headers["Authorization"] = std::string("Bearer ") + key;
  }

  auto backoff = config_.backoff_base;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    bucket_.acquire();
    auto start = std::chrono::steady_clock::now();
    util::HttpResponse response;
    try {
      response = transport_->send(request);
    } catch (const util::HttpTransportFailure& e) {
      last_error = e.what();
      continue;
    }
    double latency = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (response.status == 429 || response.status >= 500) {
      last_error = "HTTP " + std::to_string(response.status);
      continue;
    }
    if (response.status < 200 || response.status >= 300) {
      throw ModelRefusal("model " + config_.name + " rejected the request: HTTP " +
                             std::to_string(response.status) + " " +
                             std::string(util::trim(response.body.substr(0, 300))),
                         response.status);
    }
    RawResponse raw;
    raw.latency_ms = std::max(0.0, latency);
    raw.attempts = attempt + 1;
    try {
      json doc = json::parse(response.body);
      const json& message = doc.at("choices").at(0).at("message");
      raw.text = message.at("content").is_null() ? "" : message.at("content").get<std::string>();
      raw.request_id = doc.value("id", "");
    } catch (const json::exception& e) {
      throw ModelRefusal("model " + config_.name + " returned an unreadable completion: " +
                             e.what(),
                         response.status);
    }
    if (raw.request_id.empty()) {
      raw.request_id = util::sha256_hex(response.body).substr(0, 16);
    }
    return raw;
  }
  throw TransportError("model " + config_.name + " unreachable after " +
                           std::to_string(config_.max_retries + 1) +
                           " attempt(s): " + last_error,
                       config_.max_retries + 1);
}

// ---- extraction ------------------------------------------------------------

namespace {

std::string strip_think(std::string_view text) {
  constexpr std::string_view kOpen = "<think>";
  constexpr std::string_view kClose = "</think>";
  std::string s(text);
  // A reply that starts mid-reasoning has a closing tag without an opener.
  std::size_t close = s.find(kClose);
  std::size_t open = s.find(kOpen);
  if (close != std::string::npos && (open == std::string::npos || close < open)) {
    s.erase(0, close + kClose.size());
  }
  while ((open = s.find(kOpen)) != std::string::npos) {
    close = s.find(kClose, open);
    if (close == std::string::npos) {
      s.erase(open);
      break;
    }
    s.erase(open, close + kClose.size() - open);
  }
  return s;
}

std::optional<std::string> json_query_field(std::string_view text) {
  std::string_view t = util::trim(text);
  if (t.empty() || t.front() != '{') return std::nullopt;
  json doc = json::parse(t, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_object()) return std::nullopt;
  for (const char* key : {"query", "sparql", "sparql_query", "SPARQL", "Query"}) {
    auto it = doc.find(key);
    if (it != doc.end() && it->is_string()) return it->get<std::string>();
  }
  return std::nullopt;
}

std::string strip_fences(std::string_view text) {
  std::size_t open = text.find("```");
  if (open == std::string_view::npos) return std::string(text);
  std::size_t body = text.find('\n', open);
  if (body == std::string_view::npos) return std::string();
  // Only a language tag may follow the opening fence.
  std::string_view tag = util::trim(text.substr(open + 3, body - open - 3));
  if (!std::all_of(tag.begin(), tag.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
      })) {
    return std::string(text);
  }
  ++body;
  std::size_t close = text.find("```", body);
  return std::string(text.substr(body, close == std::string_view::npos ? std::string_view::npos
                                                                        : close - body));
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::size_t first_keyword(std::string_view text) {
  static const std::vector<std::string> kKeywords = {"prefix", "base",      "select",
                                                     "ask",    "construct", "describe"};
  std::string lower = util::to_lower_ascii(text);
  std::size_t best = std::string::npos;
  for (const auto& kw : kKeywords) {
    for (std::size_t pos = lower.find(kw); pos != std::string::npos;
         pos = lower.find(kw, pos + 1)) {
      bool start_ok = pos == 0 || !is_word_char(lower[pos - 1]);
      bool end_ok = pos + kw.size() >= lower.size() || !is_word_char(lower[pos + kw.size()]);
      if (start_ok && end_ok) {
        best = std::min(best, pos);
        break;
      }
    }
  }
  return best;
}

}  // namespace

std::string extract_query(std::string_view response, bool strip_reasoning) {
  std::string text = strip_reasoning ? strip_think(response) : std::string(response);
  if (auto field = json_query_field(text)) text = *field;
  text = strip_fences(text);
  // A fenced JSON object, e.g. ```json {"query": ...} ```.
  if (auto field = json_query_field(text)) text = strip_fences(*field);
  std::string_view candidate = util::trim(text);
  std::size_t kw = first_keyword(candidate);
  if (kw != std::string_view::npos && kw > 0) {
    std::string_view tail = util::trim(candidate.substr(kw));
    if (!sparql::check_syntax(tail, validation_prefixes())) candidate = tail;
  }
  if (candidate.empty()) throw FormatError("no query text in the model response");
  return std::string(candidate);
}

}  // namespace sparqlbench
