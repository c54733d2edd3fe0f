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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlbench/rdf.h"
#include "sparqlbench/record.h"

namespace sparqlbench {

// KG terms written in `query_text`: prefixed names under a configured KG
// prefix and full IRIs under a KG namespace, each with a non-empty local
// part. Lexing is tolerant, so broken queries are scanned too. PREFIX
// declarations (bare namespace IRIs) do not count.
std::vector<std::string> find_kg_leaks(std::string_view query_text,
                                       const KgConfig& kg = KgConfig::wikidata());

// Categories of a scored record; empty for a correct trial.
CategorySet classify(const GenerationRecord& record);

inline constexpr std::string_view kAllStrategies = "all";

struct CategoryFrequencyRow {
  std::string model;
  std::string dataset;
  std::string strategy;  // a strategy name, or "all" for the aggregate
  std::size_t total = 0;
  std::map<ErrorCategory, std::size_t> counts;

  // nullopt when the cell has no trials.
  std::optional<double> frequency(ErrorCategory category) const;
};

// One aggregate row per (model, dataset) over all strategies, followed by
// one row per (model, dataset, strategy). Rows appear in first-occurrence
// order of their keys.
std::vector<CategoryFrequencyRow> category_frequencies(
    const std::vector<GenerationRecord>& records);

}  // namespace sparqlbench
