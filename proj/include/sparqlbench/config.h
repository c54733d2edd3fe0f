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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/dataset.h"
#include "sparqlbench/endpoint.h"
#include "sparqlbench/llm_client.h"
#include "sparqlbench/prompting.h"

namespace sparqlbench {

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  DatasetFormat format = DatasetFormat::QaldJson;
};

struct ConcurrencyLimits {
  std::size_t llm = 4;
  std::size_t endpoint = 4;
};

// Declarative description of one evaluation grid. Relative paths in a
// config file resolve against the file's directory.
struct RunConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<ModelConfig> models;
  std::vector<PromptStrategy> strategies;
  EndpointConfig sparql_endpoint;
  std::uint64_t seed = 0;
  ConcurrencyLimits concurrency;
  std::filesystem::path output_dir = "run";
  // Empty: built-in templates.
  std::filesystem::path templates_dir;
  // Read-only label files ({iri, label, language} JSONL) loaded into the
  // label cache before any endpoint lookup.
  std::vector<std::filesystem::path> label_files;

  nlohmann::json to_json() const;
  // Throws ConfigError.
  static RunConfig from_json(const nlohmann::json& j,
                             const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);
  // Throws ConfigError on violated invariants.
  void validate() const;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::string> endpoint_url;
  std::optional<std::string> mock_model;
};

// Applies flag values; --mock-model points every model at the stub (or adds
// a model named mock-<mode> when none is configured).
void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

}  // namespace sparqlbench
