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

#include "sparqlbench/run_store.h"

#include "sparqlbench/errors.h"
#include "sparqlbench/util/hash.h"
#include "sparqlbench/util/text.h"
#include "sparqlbench/version.h"

namespace sparqlbench {

using nlohmann::json;
namespace fs = std::filesystem;

json RunManifest::to_json() const {
  return {{"tool", "sparqlbench"},
          {"tool_version", tool_version},
          {"created_at", created_at},
          {"seed", seed},
          {"datasets", datasets},
          {"templates", templates},
          {"models", models},
          {"effective_config", effective_config}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.datasets = j.at("datasets");
    m.templates = j.at("templates");
    m.models = j.at("models");
    m.effective_config = j.value("effective_config", json::object());
    m.created_at = j.value("created_at", "");
    m.tool_version = j.value("tool_version", "");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::vector<std::string> RunManifest::differences(const RunManifest& other) const {
  std::vector<std::string> out;
  if (seed != other.seed) {
    out.push_back("seed " + std::to_string(seed) + " != " + std::to_string(other.seed));
  }
  auto find_by_name = [](const json& arr, const std::string& name) -> const json* {
    for (const auto& e : arr) {
      if (e.value("name", "") == name) return &e;
    }
    return nullptr;
  };
  for (const auto& d : other.datasets) {
    const json* mine = find_by_name(datasets, d.value("name", ""));
    if (mine && mine->value("sha256", "") != d.value("sha256", "")) {
      out.push_back("dataset " + d.value("name", "") + " content changed");
    }
  }
  for (const auto& [strategy, hash] : other.templates.items()) {
    if (templates.contains(strategy) && templates[strategy] != hash) {
      out.push_back("template " + strategy + " changed");
    }
  }
  for (const auto& m : other.models) {
    const json* mine = find_by_name(models, m.value("name", ""));
    if (mine && *mine != m) out.push_back("model " + m.value("name", "") + " configuration changed");
  }
  return out;
}

RunManifest make_manifest(const RunConfig& config, const PromptTemplates& templates) {
  RunManifest m;
  m.seed = config.seed;
  for (const auto& d : config.datasets) {
    m.datasets.push_back({{"name", d.name},
                          {"format", to_string(d.format)},
                          {"sha256", util::sha256_hex(util::read_file(d.path))}});
  }
  for (auto s : all_strategies()) {
    m.templates[std::string(to_string(s))] = util::sha256_hex(templates.get(s));
  }
  for (const auto& model : config.models) m.models.push_back(model.to_json());
  m.effective_config = config.to_json();
  m.created_at = util::utc_timestamp_now();
  m.tool_version = kVersion;
  return m;
}

RunStore::RunStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create run directory " + dir_.string() + ": " + ec.message());
  appender_ = std::make_unique<util::JsonlAppender>(records_path());
}

fs::path RunStore::items_path(const std::string& dataset) const {
  return dir_ / "items" / (util::sanitize_path_component(dataset) + ".jsonl");
}

fs::path RunStore::drops_path(const std::string& dataset) const {
  return dir_ / "items" / (util::sanitize_path_component(dataset) + ".drops.jsonl");
}

fs::path RunStore::mask_path(const std::string& dataset, const std::string& item) const {
  return dir_ / "masks" / util::sanitize_path_component(dataset) /
         (util::sanitize_path_component(item) + ".json");
}

fs::path RunStore::response_path(const GenerationRecord& r) const {
  return dir_ / "responses" / util::sanitize_path_component(r.dataset) /
         util::sanitize_path_component(r.model) / std::string(to_string(r.strategy)) /
         (util::sanitize_path_component(r.item_id) + ".txt");
}

bool RunStore::has_manifest() const { return fs::exists(manifest_path()); }

RunManifest RunStore::read_manifest() const {
  json j = json::parse(util::read_file(manifest_path()), nullptr, false);
  if (j.is_discarded()) throw IoError(manifest_path().string() + " is not valid JSON");
  return RunManifest::from_json(j);
}

void RunStore::write_or_check_manifest(const RunManifest& manifest) {
  if (!has_manifest()) {
    util::write_file_atomic(manifest_path(), manifest.to_json().dump(2) + "\n");
    return;
  }
  auto diffs = read_manifest().differences(manifest);
  if (!diffs.empty()) {
    std::string msg = "run directory " + dir_.string() + " was created with different inputs: ";
    msg += util::join(diffs, "; ");
    throw ManifestMismatch(msg);
  }
}

std::vector<GenerationRecord> RunStore::load_records() const {
  std::vector<GenerationRecord> out;
  if (!fs::exists(records_path())) return out;
  bool torn = false;
  std::set<std::string> seen;
  for (const auto& row : util::read_jsonl(records_path(), &torn)) {
    GenerationRecord r = GenerationRecord::from_json(row);
    if (seen.insert(r.triple_key()).second) out.push_back(std::move(r));
  }
  return out;
}

std::set<std::string> RunStore::completed_triples() const {
  std::set<std::string> out;
  for (const auto& r : load_records()) out.insert(r.triple_key());
  return out;
}

void RunStore::repair() { util::repair_jsonl_tail(records_path()); }

void RunStore::append(const GenerationRecord& record) {
  util::write_file_atomic(response_path(record), record.raw_response);
  appender_->append(record.to_json());
}

void RunStore::rewrite_records(const std::vector<GenerationRecord>& records) {
  std::string text;
  for (const auto& r : records) text += r.to_json().dump() + "\n";
  util::write_file_atomic(records_path(), text);
}

}  // namespace sparqlbench
