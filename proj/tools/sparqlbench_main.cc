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

// sparqlbench: evaluate LLM text-to-SPARQL translation under zero-shot,
// knowledge-injection and masked knowledge-injection prompting.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sparqlbench/config.h"
#include "sparqlbench/errors.h"
#include "sparqlbench/pipeline.h"
#include "sparqlbench/util/log.h"
#include "sparqlbench/version.h"

namespace sb = sparqlbench;
namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kIo = 2, kManifest = 3 };

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::string endpoint_url;
  std::string mock_model;
  bool verbose = false;
  bool quiet = false;
};

sb::ConfigOverrides overrides_of(const GlobalFlags& g) {
  sb::ConfigOverrides o;
  o.seed = g.seed;
  if (!g.output_dir.empty()) o.output_dir = fs::path(g.output_dir);
  if (!g.endpoint_url.empty()) o.endpoint_url = g.endpoint_url;
  if (!g.mock_model.empty()) o.mock_model = g.mock_model;
  return o;
}

sb::RunConfig load_config(const GlobalFlags& g) {
  if (g.config.empty()) throw sb::ConfigError("--config is required for this subcommand");
  sb::RunConfig config = sb::RunConfig::load(g.config);
  sb::apply_overrides(config, overrides_of(g));
  return config;
}

// score and report take the run directory from --output-dir, else from the
// config file.
fs::path run_dir_of(const GlobalFlags& g) {
  if (!g.output_dir.empty()) return g.output_dir;
  if (!g.config.empty()) return sb::RunConfig::load(g.config).output_dir;
  throw sb::ConfigError("--output-dir or --config is required for this subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-to-SPARQL LLM evaluation harness"};
  app.set_version_flag("--version", std::string(sb::kVersion));
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("-c,--config", g.config, "Run configuration (JSON)");
  app.add_option("--seed", g.seed, "Run seed (overrides the config)");
  app.add_option("-o,--output-dir", g.output_dir, "Run directory (overrides the config)");
  app.add_option("--endpoint-url", g.endpoint_url,
                 "SPARQL endpoint URL, or replay:[recordings.jsonl] for offline runs");
  app.add_option("--mock-model", g.mock_model,
                 "Use the built-in stub model: gold, garbage, leaky or unmapped");
  app.add_flag("-v,--verbose", g.verbose, "Debug logging");
  app.add_flag("-q,--quiet", g.quiet, "Only warnings and errors");

  auto* ingest = app.add_subcommand("ingest", "Load datasets and apply the evaluability filter");
  auto* annotate = app.add_subcommand("annotate", "Extract KG terms and resolve their labels");
  auto* run = app.add_subcommand("run", "Query the models for every missing trial");
  auto* score = app.add_subcommand("score", "Validate, execute and classify stored responses");
  auto* report = app.add_subcommand("report", "Write report.md, report.csv, report.json, errors.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; bad usage counts as a configuration error.
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  if (g.verbose) sb::util::set_log_level(sb::util::LogLevel::Debug);
  if (g.quiet) sb::util::set_log_level(sb::util::LogLevel::Warn);

  try {
    if (ingest->parsed()) {
      sb::cmd_ingest(load_config(g));
    } else if (annotate->parsed()) {
      sb::cmd_annotate(load_config(g));
    } else if (run->parsed()) {
      sb::cmd_run(load_config(g));
    } else if (score->parsed()) {
      sb::cmd_score(run_dir_of(g), overrides_of(g));
    } else if (report->parsed()) {
      sb::cmd_report(run_dir_of(g));
    }
  } catch (const sb::ManifestMismatch& e) {
    sb::util::log_error(e.what());
    return kManifest;
  } catch (const sb::ConfigError& e) {
    sb::util::log_error(e.what());
    return kConfig;
  } catch (const sb::Error& e) {
    sb::util::log_error(e.what());
    return kIo;
  } catch (const std::exception& e) {
    sb::util::log_error(e.what());
    return kIo;
  }
  return kOk;
}
