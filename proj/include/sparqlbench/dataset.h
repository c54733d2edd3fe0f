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
#include <string>
#include <string_view>
#include <vector>

#include "sparqlbench/rdf.h"

namespace sparqlbench {

enum class DatasetKind { QALD9Plus, MCWQ, Custom };
enum class DatasetFormat { QaldJson, Mcwq, GenericJsonl };

std::string_view to_string(DatasetKind kind);
std::string_view to_string(DatasetFormat format);
// Accepts "qald_json", "mcwq", "generic_jsonl" (case-insensitive).
DatasetFormat parse_dataset_format(std::string_view name);
DatasetKind kind_for(DatasetFormat format);

struct BenchmarkItem {
  std::string id;
  std::string question;  // English, NFC
  std::string gold_query;
  AnswerSet gold_answer;
  DatasetKind dataset = DatasetKind::Custom;

  bool operator==(const BenchmarkItem&) const = default;
};

// Throws SchemaError, MissingLanguageError, IoError.
std::vector<BenchmarkItem> load_dataset(const std::filesystem::path& path,
                                        DatasetFormat format);
std::vector<BenchmarkItem> parse_dataset(std::string_view content,
                                         DatasetFormat format,
                                         std::string_view source_name = "<input>");

// GENERIC_JSONL rendering of items; parse_dataset(..., GenericJsonl) reads
// it back.
std::string serialize_generic_jsonl(const std::vector<BenchmarkItem>& items);

struct DropEntry {
  std::string item_id;
  std::string reason;
};

struct FilterResult {
  std::vector<BenchmarkItem> retained;
  std::vector<DropEntry> dropped;
};

// Keeps items that can be scored: non-empty question, non-empty gold answer,
// gold query accepted by the parser, first occurrence of each id.
FilterResult filter_evaluable(const std::vector<BenchmarkItem>& items);

}  // namespace sparqlbench
