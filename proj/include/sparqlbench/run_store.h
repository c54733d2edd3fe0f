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
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/config.h"
#include "sparqlbench/record.h"
#include "sparqlbench/util/io.h"

namespace sparqlbench {

// Everything that must not change between the first and a resumed run.
struct RunManifest {
  std::uint64_t seed = 0;
  nlohmann::json datasets = nlohmann::json::array();  // [{name, format, sha256}]
  nlohmann::json templates = nlohmann::json::object();  // strategy -> sha256
  nlohmann::json models = nlohmann::json::array();
  nlohmann::json effective_config = nlohmann::json::object();
  std::string created_at;
  std::string tool_version;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  // Human-readable differences in seed, dataset hashes, template hashes and
  // model configurations; empty when compatible.
  std::vector<std::string> differences(const RunManifest& other) const;
};

// Manifest for a config: hashes the dataset files and templates.
RunManifest make_manifest(const RunConfig& config, const PromptTemplates& templates);

// Run directory:
//   manifest.json  records.jsonl  annotations.jsonl  errors.csv
//   report.md  report.csv  report.json
//   items/<dataset>.jsonl  items/<dataset>.drops.jsonl
//   masks/<dataset>/<item>.json
//   responses/<dataset>/<model>/<strategy>/<item>.txt
//   cache/labels.jsonl  cache/executions.jsonl
class RunStore {
 public:
  explicit RunStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path manifest_path() const { return dir_ / "manifest.json"; }
  std::filesystem::path records_path() const { return dir_ / "records.jsonl"; }
  std::filesystem::path items_path(const std::string& dataset) const;
  std::filesystem::path drops_path(const std::string& dataset) const;
  std::filesystem::path annotations_path() const { return dir_ / "annotations.jsonl"; }
  std::filesystem::path mask_path(const std::string& dataset, const std::string& item) const;
  std::filesystem::path response_path(const GenerationRecord& r) const;
  std::filesystem::path label_cache_path() const { return dir_ / "cache" / "labels.jsonl"; }
  std::filesystem::path execution_cache_path() const {
    return dir_ / "cache" / "executions.jsonl";
  }

  bool has_manifest() const;
  RunManifest read_manifest() const;
  // Writes the manifest, or checks it against the stored one. Throws
  // ManifestMismatch listing the differences.
  void write_or_check_manifest(const RunManifest& manifest);

  // Records with duplicate triples removed (first kept). A torn last line
  // is ignored.
  std::vector<GenerationRecord> load_records() const;
  // Triple keys already present.
  std::set<std::string> completed_triples() const;
  // Prepares records.jsonl for appending after an interruption.
  void repair();
  // Appends one record and stores its raw response.
  void append(const GenerationRecord& record);
  // Replaces records.jsonl atomically.
  void rewrite_records(const std::vector<GenerationRecord>& records);

 private:
  std::filesystem::path dir_;
  std::unique_ptr<util::JsonlAppender> appender_;
};

}  // namespace sparqlbench
