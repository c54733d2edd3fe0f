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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/config.h"
#include "sparqlbench/dataset.h"
#include "sparqlbench/gold_analysis.h"
#include "sparqlbench/prompting.h"
#include "sparqlbench/record.h"
#include "sparqlbench/run_store.h"

namespace sparqlbench {

struct IngestSummary {
  std::string dataset;
  std::size_t loaded = 0;
  std::size_t retained = 0;
  std::vector<DropEntry> dropped;
};

struct Annotation {
  std::string dataset;
  std::string item_id;
  std::vector<std::string> terms;
  std::optional<std::vector<TermBinding>> bindings;  // absent when unusable
  std::string error;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  static Annotation from_json(const nlohmann::json& j);
};

// Loads and filters every dataset; writes items/ into the run directory.
std::vector<IngestSummary> cmd_ingest(const RunConfig& config);

// Extracts terms and labels for every ingested item (ingesting first when
// needed); writes annotations.jsonl. Items without terms or labels are kept
// with an error and left out of injection runs.
std::vector<Annotation> cmd_annotate(const RunConfig& config);

struct RunSummary {
  std::size_t planned = 0;   // grid size after exclusions
  std::size_t skipped = 0;   // already present
  std::size_t generated = 0;
  std::size_t failed = 0;    // transport failures or refusals
  std::size_t excluded = 0;  // injection trials without bindings
};

// Generates every missing trial of the grid and appends it unscored.
// Throws ManifestMismatch when the run directory belongs to other inputs.
RunSummary cmd_run(const RunConfig& config);

struct ScoreSummary {
  std::size_t records = 0;
  std::size_t correct = 0;
};

// Scores every stored record from its raw response and rewrites
// records.jsonl in canonical order. No model is called.
ScoreSummary cmd_score(const std::filesystem::path& run_dir,
                       const ConfigOverrides& overrides = {});

// Writes report.md, report.csv, report.json and errors.csv.
void cmd_report(const std::filesystem::path& run_dir);

// Scoring of one trial; exposed for tests.
struct ScoringContext {
  SparqlEndpoint* endpoint = nullptr;
  ExecutionCache* cache = nullptr;
  std::size_t row_cap = 10000;
  KgConfig kg = KgConfig::wikidata();
};
void score_record(GenerationRecord& record, const AnswerSet& gold,
                  const MaskMapping* mapping, bool strip_reasoning,
                  const ScoringContext& context);

// Reads back items/ and annotations.jsonl of a run directory.
std::vector<BenchmarkItem> load_items(const RunStore& store, const std::string& dataset);
std::map<std::string, Annotation> load_annotations(const RunStore& store);
std::string annotation_key(const std::string& dataset, const std::string& item_id);

}  // namespace sparqlbench
