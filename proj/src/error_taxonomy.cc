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

#include "sparqlbench/error_taxonomy.h"

#include <set>

#include "sparqlbench/sparql/lexer.h"

namespace sparqlbench {

std::vector<std::string> find_kg_leaks(std::string_view query_text, const KgConfig& kg) {
  std::vector<std::string> leaks;
  std::set<std::string> seen;
  auto tokens = sparql::tokenize(query_text, /*tolerant=*/true);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    std::string term;
    if (t.kind == sparql::TokenKind::PnameLn) {
      std::size_t colon = t.text.find(':');
      if (kg.find_prefix(t.text.substr(0, colon)) && colon + 1 < t.text.size()) {
        term = std::string(t.text);
      }
    } else if (t.kind == sparql::TokenKind::IriRef) {
      const KgNamespace* ns = kg.find_iri(t.value);
      if (ns && t.value.size() > ns->iri.size()) term = "<" + t.value + ">";
    }
    if (!term.empty() && seen.insert(term).second) leaks.push_back(term);
  }
  return leaks;
}

CategorySet classify(const GenerationRecord& r) {
  CategorySet out;
  const bool extracted = r.extracted_query.has_value();
  const bool executable =
      extracted && r.validation.syntactically_valid && r.validation.executable;
  if (!executable) out.insert(ErrorCategory::InvalidFormatOrQuery);
  if (executable && r.execution) {
    const auto& e = *r.execution;
    bool empty = e.kind == ResultKind::Bindings && e.row_count == 0;
    if (empty) {
      out.insert(ErrorCategory::EmptyAnswer);
    } else if (!r.answer_matches) {
      out.insert(ErrorCategory::IncorrectEntitySet);
    }
  }
  if (r.strategy == PromptStrategy::MaskedInjection && !r.leaked_terms.empty()) {
    out.insert(ErrorCategory::KGUriLeak);
  }
  return out;
}

std::optional<double> CategoryFrequencyRow::frequency(ErrorCategory category) const {
  if (total == 0) return std::nullopt;
  auto it = counts.find(category);
  return static_cast<double>(it == counts.end() ? 0 : it->second) /
         static_cast<double>(total);
}

std::vector<CategoryFrequencyRow> category_frequencies(
    const std::vector<GenerationRecord>& records) {
  std::vector<CategoryFrequencyRow> aggregate, per_strategy;
  std::map<std::string, std::size_t> agg_index, strat_index;
  auto bump = [](CategoryFrequencyRow& row, const GenerationRecord& r) {
    ++row.total;
    for (auto c : r.error_categories) ++row.counts[c];
  };
  for (const auto& r : records) {
    std::string akey = r.model + "\x1f" + r.dataset;
    auto [ait, anew] = agg_index.emplace(akey, aggregate.size());
    if (anew) {
      aggregate.push_back({r.model, r.dataset, std::string(kAllStrategies), 0, {}});
      for (auto c : kAllCategories) aggregate.back().counts[c] = 0;
    }
    bump(aggregate[ait->second], r);

    std::string skey = akey + "\x1f" + std::string(to_string(r.strategy));
    auto [sit, snew] = strat_index.emplace(skey, per_strategy.size());
    if (snew) {
      per_strategy.push_back({r.model, r.dataset, std::string(to_string(r.strategy)), 0, {}});
      for (auto c : kAllCategories) per_strategy.back().counts[c] = 0;
    }
    bump(per_strategy[sit->second], r);
  }
  aggregate.insert(aggregate.end(), per_strategy.begin(), per_strategy.end());
  return aggregate;
}

}  // namespace sparqlbench
