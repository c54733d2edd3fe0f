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

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/rdf.h"
#include "sparqlbench/util/concurrency.h"
#include "sparqlbench/util/http.h"

namespace sparqlbench {

struct EndpointConfig {
  // http(s) URL of a SPARQL 1.1 Protocol service, or "replay:" /
  // "replay:<recorded.jsonl>" for the offline replay endpoint.
  std::string url = "https://query.wikidata.org/sparql";
  std::chrono::milliseconds timeout{60000};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::string user_agent = "sparqlbench/0.1 (text-to-SPARQL evaluation harness)";
  double requests_per_second = 5.0;  // 0 disables the limiter
  std::size_t row_cap = 10000;
  std::size_t concurrency = 4;

  nlohmann::json to_json() const;
  static EndpointConfig from_json(const nlohmann::json& j);
};

struct EndpointReply {
  bool ok = false;
  int status = 0;             // 0 when no HTTP response arrived
  std::string body;           // results JSON when ok
  std::string diagnostic;     // error text when !ok
  bool transport_failure = false;
  int attempts = 0;
};

class SparqlEndpoint {
 public:
  virtual ~SparqlEndpoint() = default;
  virtual EndpointReply query(const std::string& sparql) = 0;
  // Stable identifier used in cache keys.
  virtual std::string id() const = 0;
};

// SPARQL 1.1 Protocol client: form-encoded POST, results as JSON.
// Transport failures, 429 and 5xx are retried with exponential backoff.
class HttpSparqlEndpoint : public SparqlEndpoint {
 public:
  HttpSparqlEndpoint(EndpointConfig config,
                     std::shared_ptr<util::HttpTransport> transport = nullptr);
  EndpointReply query(const std::string& sparql) override;
  std::string id() const override { return config_.url; }

 private:
  EndpointConfig config_;
  std::shared_ptr<util::HttpTransport> transport_;
  util::TokenBucket bucket_;
};

// Whitespace-, comment- and prefix-spelling-insensitive form of a query:
// PREFIX declarations are dropped and prefixed names expanded to full IRIs.
// Falls back to the trimmed text when the query does not tokenize.
std::string canonical_query_key(std::string_view query, const PrefixMap& predeclared);

// Offline endpoint answering from recorded (query, results) pairs. Queries
// are parsed against the prefixes the public Wikidata service predeclares;
// parse failures reply 400 like the real service. Recordings are matched by
// canonical_query_key. Queries without a recording yield an empty result of
// the matching form.
class ReplayEndpoint : public SparqlEndpoint {
 public:
  ReplayEndpoint() = default;
  void record(const std::string& query, nlohmann::json results);
  // Reads JSONL lines of {"query": ..., "result": <SPARQL results JSON>}.
  void load_recordings(const std::string& path);

  bool has_recording(const std::string& query) const;

  EndpointReply query(const std::string& sparql) override;
  std::string id() const override { return "replay:"; }
  std::size_t request_count() const { return requests_.load(); }

 private:
  static std::string key(const std::string& query);
  std::map<std::string, nlohmann::json> recorded_;
  mutable std::mutex mu_;
  std::atomic<std::size_t> requests_{0};
};

// Builds an HttpSparqlEndpoint or, for replay: URLs, a ReplayEndpoint.
std::shared_ptr<SparqlEndpoint> make_endpoint(const EndpointConfig& config);

}  // namespace sparqlbench
