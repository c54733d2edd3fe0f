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

#include "sparqlbench/mock_model.h"

#include <functional>

#include <nlohmann/json.hpp>

#include "sparqlbench/errors.h"
#include "sparqlbench/sparql/parser.h"
#include "sparqlbench/util/hash.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

using nlohmann::json;

std::string_view to_string(MockMode mode) {
  switch (mode) {
    case MockMode::Gold: return "gold";
    case MockMode::Garbage: return "garbage";
    case MockMode::Leaky: return "leaky";
    case MockMode::Unmapped: return "unmapped";
  }
  return "unknown";
}

MockMode parse_mock_mode(std::string_view name) {
  std::string n = util::to_lower_ascii(util::trim(name));
  for (auto m : {MockMode::Gold, MockMode::Garbage, MockMode::Leaky, MockMode::Unmapped}) {
    if (n == to_string(m)) return m;
  }
  throw ConfigError("unknown mock model '" + std::string(name) +
                    "' (expected gold, garbage, leaky or unmapped)");
}

void MockOracle::add(const std::string& question, MockItem item) {
  items_.emplace(question, std::move(item));
}

const MockItem* MockOracle::find(const std::string& question) const {
  auto it = items_.find(question);
  return it == items_.end() ? nullptr : &it->second;
}

std::string rewrite_kg_terms(
    std::string_view query, const KgConfig& kg,
    const std::function<std::string(const std::string&)>& replacement) {
  PrefixMap prefixes = validation_prefixes();
  for (const auto& ns : kg.namespaces) prefixes.set(ns.prefix, ns.iri);
  auto parsed = sparql::parse_query(query, prefixes);
  std::string out;
  std::size_t pos = 0;
  for (const auto& ref : parsed.iris) {
    const KgNamespace* ns = kg.find_iri(ref.iri);
    if (!ns || ref.offset < pos) continue;
    std::string term = ns->prefix + ":" + ref.iri.substr(ns->iri.size());
    std::string repl = replacement(term);
    if (repl.empty()) continue;
    out.append(query.substr(pos, ref.offset - pos));
    out += repl;
    pos = ref.offset + ref.length;
  }
  out.append(query.substr(pos));
  return out;
}

namespace {

constexpr std::string_view kQuestionOpen = "Translate the question \"";
constexpr std::string_view kQuestionClose = "\" into a SPARQL query";
constexpr std::string_view kPairsHeader = "The possible entities and properties are:";

std::string question_of(const std::string& prompt) {
  std::size_t open = prompt.find(kQuestionOpen);
  std::size_t close = prompt.rfind(kQuestionClose);
  if (open == std::string::npos || close == std::string::npos || close < open) return {};
  open += kQuestionOpen.size();
  return prompt.substr(open, close - open);
}

// Terms listed in the injection block, in order.
std::vector<std::string> listed_terms(const std::string& prompt) {
  std::vector<std::string> terms;
  std::size_t header = prompt.find(kPairsHeader);
  if (header == std::string::npos) return terms;
  for (const auto& line : util::split_lines(prompt.substr(header + kPairsHeader.size()))) {
    std::size_t is = line.find(" is ");
    if (is != std::string::npos) terms.push_back(line.substr(0, is));
  }
  return terms;
}

class MockTransport : public util::HttpTransport {
 public:
  MockTransport(MockMode mode, std::shared_ptr<const MockOracle> oracle, KgConfig kg)
      : mode_(mode), oracle_(std::move(oracle)), kg_(std::move(kg)) {}

  util::HttpResponse send(const util::HttpRequest& request) override {
    std::string prompt;
    std::string model;
    try {
      json body = json::parse(request.body);
      model = body.at("model").get<std::string>();
      prompt = body.at("messages").at(0).at("content").get<std::string>();
    } catch (const json::exception& e) {
      return {400, json{{"error", {{"message", e.what()}}}}.dump()};
    }
    std::string content = answer(prompt);
    json reply = {
        {"id", "mock-" + util::sha256_hex(model + "\n" + prompt).substr(0, 16)},
        {"object", "chat.completion"},
        {"model", model},
        {"choices",
         json::array({{{"index", 0},
                       {"message", {{"role", "assistant"}, {"content", content}}},
                       {"finish_reason", "stop"}}})}};
    return {200, reply.dump()};
  }

 private:
  std::string answer(const std::string& prompt) const {
    if (mode_ == MockMode::Garbage) {
      return "I am not able to write that query, but the answer is probably 42.";
    }
    const MockItem* item = oracle_ ? oracle_->find(question_of(prompt)) : nullptr;
    if (!item) return "I do not know this question.";
    switch (mode_) {
      case MockMode::Leaky:
        return item->gold_query;
      case MockMode::Unmapped: {
        std::map<std::string, std::string> tokens;
        return rewrite_kg_terms(item->gold_query, kg_, [&](const std::string& term) {
          auto [it, inserted] = tokens.emplace(term, "");
          // Below the masking range, so never part of a mapping.
          if (inserted) it->second = "kg:" + std::to_string(tokens.size());
          return it->second;
        });
      }
      case MockMode::Gold:
      default: {
        auto listed = listed_terms(prompt);
        bool masked = !listed.empty() && listed.front().rfind("kg:", 0) == 0;
        if (!masked) return "```sparql\n" + item->gold_query + "\n```";
        std::map<std::string, std::string> mapping;
        for (std::size_t i = 0; i < listed.size() && i < item->ordered_terms.size(); ++i) {
          mapping[item->ordered_terms[i]] = listed[i];
        }
        std::string q = rewrite_kg_terms(item->gold_query, kg_, [&](const std::string& term) {
          auto it = mapping.find(term);
          return it == mapping.end() ? std::string() : it->second;
        });
        return "```sparql\n" + q + "\n```";
      }
    }
  }

  MockMode mode_;
  std::shared_ptr<const MockOracle> oracle_;
  KgConfig kg_;
};

}  // namespace

std::shared_ptr<util::HttpTransport> make_mock_transport(
    MockMode mode, std::shared_ptr<const MockOracle> oracle, KgConfig kg) {
  return std::make_shared<MockTransport>(mode, std::move(oracle), std::move(kg));
}

}  // namespace sparqlbench
