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

#include "sparqlbench/endpoint.h"

#include <thread>

#include "sparqlbench/errors.h"
#include "sparqlbench/rdf.h"
#include "sparqlbench/sparql/lexer.h"
#include "sparqlbench/sparql/parser.h"
#include "sparqlbench/util/io.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

using nlohmann::json;

json EndpointConfig::to_json() const {
  return {{"url", url},
          {"timeout_ms", timeout.count()},
          {"max_retries", max_retries},
          {"backoff_base_ms", backoff_base.count()},
          {"user_agent", user_agent},
          {"requests_per_second", requests_per_second},
          {"row_cap", row_cap},
          {"concurrency", concurrency}};
}

EndpointConfig EndpointConfig::from_json(const json& j) {
  EndpointConfig c;
  if (!j.is_object()) throw ConfigError("sparql_endpoint must be an object");
  c.url = j.value("url", c.url);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(c.timeout.count())));
  c.max_retries = j.value("max_retries", c.max_retries);
  c.backoff_base = std::chrono::milliseconds(
      j.value("backoff_base_ms", static_cast<long long>(c.backoff_base.count())));
  c.user_agent = j.value("user_agent", c.user_agent);
  c.requests_per_second = j.value("requests_per_second", c.requests_per_second);
  c.row_cap = j.value("row_cap", c.row_cap);
  c.concurrency = j.value("concurrency", c.concurrency);
  if (c.timeout.count() <= 0) throw ConfigError("sparql_endpoint.timeout_ms must be > 0");
  if (c.max_retries < 0) throw ConfigError("sparql_endpoint.max_retries must be >= 0");
  return c;
}

HttpSparqlEndpoint::HttpSparqlEndpoint(EndpointConfig config,
                                       std::shared_ptr<util::HttpTransport> transport)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : util::make_http_transport()),
      bucket_(config_.requests_per_second, std::max<double>(1.0, config_.requests_per_second)) {}

EndpointReply HttpSparqlEndpoint::query(const std::string& sparql) {
  util::HttpRequest request;
  request.method = "POST";
  request.url = config_.url;
  request.body = "query=" + util::url_encode(sparql);
  request.content_type = "application/x-www-form-urlencoded";
  request.headers = {{"Accept", "application/sparql-results+json"},
                     {"User-Agent", config_.user_agent}};
  request.timeout = config_.timeout;

  EndpointReply reply;
  auto backoff = config_.backoff_base;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    bucket_.acquire();
    reply.attempts = attempt + 1;
    try {
      util::HttpResponse response = transport_->send(request);
      reply.status = response.status;
      reply.transport_failure = false;
      if (response.status >= 200 && response.status < 300) {
        reply.ok = true;
        reply.body = std::move(response.body);
        reply.diagnostic.clear();
        return reply;
      }
      reply.diagnostic = "HTTP " + std::to_string(response.status) + ": " +
                         std::string(util::trim(response.body.substr(0, 500)));
      bool retryable = response.status == 429 || response.status >= 500;
      if (!retryable) return reply;
    } catch (const util::HttpTransportFailure& e) {
      reply.status = 0;
      reply.transport_failure = true;
      reply.diagnostic = e.what();
    }
  }
  return reply;
}

std::string canonical_query_key(std::string_view query, const PrefixMap& predeclared) {
  std::vector<sparql::Token> tokens;
  try {
    tokens = sparql::tokenize(query);
  } catch (const sparql::SyntaxError&) {
    return std::string(util::trim(query));
  }
  PrefixMap declared;
  auto expand = [&](std::string_view pname) -> std::string {
    std::size_t colon = pname.find(':');
    std::string_view prefix = pname.substr(0, colon);
    auto ns = declared.ns(prefix);
    if (!ns) ns = predeclared.ns(prefix);
    if (!ns) return std::string(pname);
    return "<" + *ns + std::string(pname.substr(colon + 1)) + ">";
  };
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind == sparql::TokenKind::End) break;
    if (t.is_word("PREFIX") && i + 2 < tokens.size() &&
        tokens[i + 1].kind == sparql::TokenKind::PnameNs &&
        tokens[i + 2].kind == sparql::TokenKind::IriRef) {
      declared.set(tokens[i + 1].value, tokens[i + 2].value);
      i += 2;
      continue;
    }
    std::string piece;
    switch (t.kind) {
      case sparql::TokenKind::PnameLn:
      case sparql::TokenKind::PnameNs:
        piece = expand(t.text);
        break;
      case sparql::TokenKind::IriRef:
        piece = "<" + t.value + ">";
        break;
      case sparql::TokenKind::Var:
        piece = "?" + t.value;
        break;
      case sparql::TokenKind::String:
        piece = json(t.value).dump();
        break;
      case sparql::TokenKind::Word:
        piece = t.text == "a" ? std::string("a") : util::to_upper_ascii(t.text);
        break;
      default:
        piece = std::string(t.text);
    }
    if (!key.empty()) key += ' ';
    key += piece;
  }
  return key;
}

std::string ReplayEndpoint::key(const std::string& query) {
  return canonical_query_key(query, wikidata_prefixes());
}

void ReplayEndpoint::record(const std::string& query, json results) {
  std::lock_guard lock(mu_);
  recorded_[key(query)] = std::move(results);
}

bool ReplayEndpoint::has_recording(const std::string& query) const {
  std::lock_guard lock(mu_);
  return recorded_.count(key(query)) > 0;
}

void ReplayEndpoint::load_recordings(const std::string& path) {
  for (const auto& row : util::read_jsonl(path)) {
    if (!row.contains("query") || !row["query"].is_string() || !row.contains("result")) {
      throw SchemaError(path + ": recording needs query and result");
    }
    record(row["query"].get<std::string>(), row["result"]);
  }
}

EndpointReply ReplayEndpoint::query(const std::string& sparql) {
  ++requests_;
  EndpointReply reply;
  reply.attempts = 1;
  sparql::ParsedQuery parsed;
  try {
    parsed = sparql::parse_query(sparql, wikidata_prefixes());
  } catch (const sparql::SyntaxError& e) {
    reply.status = 400;
    reply.diagnostic = std::string("HTTP 400: MalformedQueryException: ") + e.what();
    return reply;
  }
  {
    std::lock_guard lock(mu_);
    auto it = recorded_.find(key(sparql));
    if (it != recorded_.end()) {
      reply.ok = true;
      reply.status = 200;
      reply.body = it->second.dump();
      return reply;
    }
  }
  SparqlResults empty;
  if (parsed.form == sparql::QueryForm::Ask) {
    empty.is_boolean = true;
    empty.boolean_value = false;
  } else {
    empty.vars = parsed.projected_vars;
  }
  reply.ok = true;
  reply.status = 200;
  reply.body = empty.to_json().dump();
  return reply;
}

std::shared_ptr<SparqlEndpoint> make_endpoint(const EndpointConfig& config) {
  if (config.url.rfind("replay:", 0) == 0) {
    auto replay = std::make_shared<ReplayEndpoint>();
    std::string path = config.url.substr(7);
    if (!path.empty()) replay->load_recordings(path);
    return replay;
  }
  return std::make_shared<HttpSparqlEndpoint>(config);
}

}  // namespace sparqlbench
