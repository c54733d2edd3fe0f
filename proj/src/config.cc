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

#include "sparqlbench/config.h"

#include "sparqlbench/errors.h"
#include "sparqlbench/mock_model.h"
#include "sparqlbench/util/io.h"

namespace sparqlbench {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

}  // namespace

json RunConfig::to_json() const {
  json ds = json::array();
  for (const auto& d : datasets) {
    ds.push_back({{"name", d.name}, {"path", d.path.string()}, {"format", to_string(d.format)}});
  }
  json ms = json::array();
  for (const auto& m : models) ms.push_back(m.to_json());
  json ss = json::array();
  for (auto s : strategies) ss.push_back(to_string(s));
  json labels = json::array();
  for (const auto& l : label_files) labels.push_back(l.string());
  return {{"datasets", ds},
          {"models", ms},
          {"strategies", ss},
          {"sparql_endpoint", sparql_endpoint.to_json()},
          {"seed", seed},
          {"concurrency", {{"llm", concurrency.llm}, {"endpoint", concurrency.endpoint}}},
          {"output_dir", output_dir.string()},
          {"templates_dir", templates_dir.string()},
          {"label_files", labels}};
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& d : j.value("datasets", json::array())) {
      DatasetSpec spec;
      spec.name = d.at("name").get<std::string>();
      spec.path = resolve(base_dir, d.at("path").get<std::string>());
      spec.format = parse_dataset_format(d.value("format", "qald_json"));
      c.datasets.push_back(std::move(spec));
    }
    for (const auto& m : j.value("models", json::array())) {
      c.models.push_back(ModelConfig::from_json(m));
    }
    if (j.contains("strategies")) {
      for (const auto& s : j["strategies"]) c.strategies.push_back(parse_strategy(s.get<std::string>()));
    } else {
      c.strategies = all_strategies();
    }
    if (j.contains("sparql_endpoint")) {
      c.sparql_endpoint = EndpointConfig::from_json(j["sparql_endpoint"]);
      const std::string& url = c.sparql_endpoint.url;
      if (url.rfind("replay:", 0) == 0 && url.size() > 7) {
        c.sparql_endpoint.url = "replay:" + resolve(base_dir, url.substr(7)).string();
      }
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("concurrency")) {
      const json& cc = j["concurrency"];
      c.concurrency.llm = cc.value("llm", c.concurrency.llm);
      c.concurrency.endpoint = cc.value("endpoint", c.concurrency.endpoint);
    }
    if (j.contains("output_dir")) {
      c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    }
    if (j.contains("templates_dir") && !j["templates_dir"].get<std::string>().empty()) {
      c.templates_dir = resolve(base_dir, j["templates_dir"].get<std::string>());
    }
    for (const auto& l : j.value("label_files", json::array())) {
      c.label_files.push_back(resolve(base_dir, l.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const SchemaError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  json j = json::parse(text, nullptr, false, /*ignore_comments=*/true);
  if (j.is_discarded()) throw ConfigError(path.string() + " is not valid JSON");
  return from_json(j, path.parent_path());
}

void RunConfig::validate() const {
  if (datasets.empty()) throw ConfigError("config needs at least one dataset");
  if (models.empty()) throw ConfigError("config needs at least one model");
  if (strategies.empty()) throw ConfigError("config needs at least one strategy");
  if (concurrency.llm == 0 || concurrency.endpoint == 0) {
    throw ConfigError("concurrency limits must be positive");
  }
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (datasets[i].name == datasets[k].name) {
        throw ConfigError("duplicate dataset name " + datasets[i].name);
      }
    }
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (models[i].name == models[k].name) throw ConfigError("duplicate model " + models[i].name);
    }
  }
}

void apply_overrides(RunConfig& config, const ConfigOverrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (o.endpoint_url) config.sparql_endpoint.url = *o.endpoint_url;
  if (o.mock_model) {
    MockMode mode = parse_mock_mode(*o.mock_model);
    std::string url = "mock:" + std::string(to_string(mode));
    if (config.models.empty()) {
      ModelConfig m;
      m.name = "mock-" + std::string(to_string(mode));
      config.models.push_back(m);
    }
    for (auto& m : config.models) {
      m.base_url = url;
      m.max_retries = 0;
    }
  }
}

}  // namespace sparqlbench
