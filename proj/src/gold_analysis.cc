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

#include "sparqlbench/gold_analysis.h"

#include <algorithm>
#include <mutex>
#include <regex>
#include <set>

#include "sparqlbench/errors.h"
#include "sparqlbench/sparql/parser.h"
#include "sparqlbench/util/concurrency.h"
#include "sparqlbench/util/io.h"

namespace sparqlbench {

using nlohmann::json;

std::string_view to_string(TermKind kind) {
  return kind == TermKind::Entity ? "entity" : "property";
}

json to_json(const TermBinding& b) {
  return {{"term", b.term}, {"label", b.label}, {"kind", to_string(b.kind)}};
}

TermBinding binding_from_json(const json& j) {
  TermBinding b;
  b.term = j.at("term").get<std::string>();
  b.label = j.at("label").get<std::string>();
  b.kind = j.at("kind").get<std::string>() == "property" ? TermKind::Property
                                                           : TermKind::Entity;
  return b;
}

namespace {

bool is_identifier_local(std::string_view local) {
  static const std::regex kLocal(R"([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)");
  return std::regex_match(local.begin(), local.end(), kLocal);
}

}  // namespace

std::vector<std::string> extract_terms(std::string_view gold_query,
                                       const KgConfig& kg) {
  PrefixMap prefixes = validation_prefixes();
  for (const auto& ns : kg.namespaces) prefixes.set(ns.prefix, ns.iri);
  sparql::ParsedQuery parsed;
  try {
    parsed = sparql::parse_query(gold_query, prefixes);
  } catch (const sparql::SyntaxError& e) {
    throw ParseError(std::string("gold query does not parse: ") + e.what());
  }
  std::vector<std::string> terms;
  std::set<std::string> seen;
  for (const auto& ref : parsed.iris) {
    const KgNamespace* ns = kg.find_iri(ref.iri);
    if (!ns) continue;
    std::string_view local = std::string_view(ref.iri).substr(ns->iri.size());
    if (!is_identifier_local(local)) continue;
    std::string prefixed = ns->prefix + ":" + std::string(local);
    if (seen.insert(prefixed).second) terms.push_back(std::move(prefixed));
  }
  return terms;
}

std::vector<TermBinding> order_for_injection(std::vector<TermBinding> bindings) {
  std::stable_partition(bindings.begin(), bindings.end(), [](const TermBinding& b) {
    return b.kind == TermKind::Entity;
  });
  return bindings;
}

LabelCache::LabelCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  bool torn = false;
  for (const auto& row : util::read_jsonl(path_, &torn)) {
    if (!row.is_object() || !row.contains("iri") || !row.contains("label")) continue;
    entries_[row["iri"].get<std::string>()] =
        CachedLabel{row["label"].get<std::string>(), row.value("language", "")};
  }
}

std::optional<CachedLabel> LabelCache::get(const std::string& iri) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(iri);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void LabelCache::put(const std::string& iri, const CachedLabel& label) {
  std::unique_lock lock(mu_);
  if (entries_.contains(iri)) return;
  entries_[iri] = label;
  if (!path_.empty()) {
    util::JsonlAppender(path_).append(
        json{{"iri", iri}, {"label", label.label}, {"language", label.language}});
  }
}

std::size_t LabelCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::string label_query(const std::string& iri, bool english_only) {
  std::string q = "SELECT ?label WHERE { <" + iri +
                  "> <http://www.w3.org/2000/01/rdf-schema#label> ?label . ";
  if (english_only) {
    q += "FILTER(LANG(?label) = \"en\") }";
  } else {
    q += "} ORDER BY LANG(?label) ?label LIMIT 1";
  }
  return q;
}

namespace {

// Returns the chosen label or nullopt when the entity has none.
std::optional<CachedLabel> fetch_label(const std::string& iri,
                                       SparqlEndpoint& endpoint,
                                       bool english_only) {
  EndpointReply reply = endpoint.query(label_query(iri, english_only));
  if (!reply.ok) {
    throw EndpointError("label lookup for <" + iri + "> failed after " +
                        std::to_string(reply.attempts) +
                        " attempt(s): " + reply.diagnostic);
  }
  SparqlResults results;
  try {
    results = SparqlResults::from_json(json::parse(reply.body));
  } catch (const std::exception& e) {
    throw EndpointError("label lookup for <" + iri + "> returned malformed results: " +
                        e.what());
  }
  std::optional<CachedLabel> best;
  for (const auto& row : results.rows) {
    auto it = row.find("label");
    if (it == row.end() || it->second.type != TermType::Literal) continue;
    CachedLabel candidate{it->second.value, it->second.lang};
    if (!best || std::tie(candidate.language, candidate.label) <
                     std::tie(best->language, best->label)) {
      best = candidate;
    }
  }
  if (best && english_only && best->language.empty()) best->language = "en";
  return best;
}

}  // namespace

LabelResolution resolve_labels(const std::vector<std::string>& terms,
                               SparqlEndpoint& endpoint, LabelCache& cache,
                               const KgConfig& kg, std::size_t concurrency) {
  LabelResolution out;
  std::vector<std::string> label_iris;
  for (const auto& term : terms) {
    auto iri = kg.label_iri(term);
    if (!iri) throw LabelNotFound("term " + term + " is not in a configured KG namespace");
    label_iris.push_back(*iri);
  }

  std::vector<std::string> misses;
  {
    std::set<std::string> queued;
    for (const auto& iri : label_iris) {
      if (!cache.get(iri) && queued.insert(iri).second) misses.push_back(iri);
    }
  }

  std::mutex mu;
  std::vector<std::string> missing;
  util::parallel_for(misses.size(), concurrency, [&](std::size_t i) {
    const std::string& iri = misses[i];
    auto label = fetch_label(iri, endpoint, /*english_only=*/true);
    if (!label) {
      label = fetch_label(iri, endpoint, /*english_only=*/false);
      std::lock_guard lock(mu);
      if (label) {
        out.warnings.push_back("no English label for <" + iri + ">, using @" +
                               label->language + " \"" + label->label + "\"");
      }
    }
    if (label && !label->label.empty()) {
      cache.put(iri, *label);
    } else {
      std::lock_guard lock(mu);
      missing.push_back(iri);
    }
  });

  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw LabelNotFound("no label for " + list);
  }

  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto label = cache.get(label_iris[i]);
    auto colon = terms[i].find(':');
    const KgNamespace* ns = kg.find_prefix(terms[i].substr(0, colon));
    out.bindings.push_back(TermBinding{terms[i], label->label, ns->kind});
  }
  std::sort(out.warnings.begin(), out.warnings.end());
  return out;
}

}  // namespace sparqlbench
