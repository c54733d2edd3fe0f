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

#include "sparqlbench/pipeline.h"

#include <algorithm>
#include <atomic>
#include <mutex>

#include "sparqlbench/error_taxonomy.h"
#include "sparqlbench/errors.h"
#include "sparqlbench/llm_client.h"
#include "sparqlbench/metrics_report.h"
#include "sparqlbench/mock_model.h"
#include "sparqlbench/sparql_eval.h"
#include "sparqlbench/util/concurrency.h"
#include "sparqlbench/util/hash.h"
#include "sparqlbench/util/io.h"
#include "sparqlbench/util/log.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

using nlohmann::json;
namespace fs = std::filesystem;

json Annotation::to_json() const {
  json j = {{"dataset", dataset}, {"item_id", item_id}, {"terms", terms}};
  if (bindings) {
    json b = json::array();
    for (const auto& x : *bindings) b.push_back(sparqlbench::to_json(x));
    j["bindings"] = b;
  } else {
    j["bindings"] = nullptr;
  }
  j["error"] = error.empty() ? json(nullptr) : json(error);
  j["warnings"] = warnings;
  return j;
}

Annotation Annotation::from_json(const json& j) {
  Annotation a;
  a.dataset = j.at("dataset").get<std::string>();
  a.item_id = j.at("item_id").get<std::string>();
  a.terms = j.value("terms", std::vector<std::string>{});
  if (j.contains("bindings") && !j["bindings"].is_null()) {
    a.bindings.emplace();
    for (const auto& b : j["bindings"]) a.bindings->push_back(binding_from_json(b));
  }
  if (j.contains("error") && j["error"].is_string()) a.error = j["error"].get<std::string>();
  a.warnings = j.value("warnings", std::vector<std::string>{});
  return a;
}

std::string annotation_key(const std::string& dataset, const std::string& item_id) {
  return dataset + "\x1f" + item_id;
}

std::vector<BenchmarkItem> load_items(const RunStore& store, const std::string& dataset) {
  fs::path path = store.items_path(dataset);
  if (!fs::exists(path)) {
    throw IoError("no ingested items for dataset " + dataset + " (run `ingest` first)");
  }
  auto items = load_dataset(path, DatasetFormat::GenericJsonl);
  return items;
}

std::map<std::string, Annotation> load_annotations(const RunStore& store) {
  std::map<std::string, Annotation> out;
  if (!fs::exists(store.annotations_path())) return out;
  for (const auto& row : util::read_jsonl(store.annotations_path())) {
    Annotation a = Annotation::from_json(row);
    out.emplace(annotation_key(a.dataset, a.item_id), std::move(a));
  }
  return out;
}

// ---- ingest ----------------------------------------------------------------

std::vector<IngestSummary> cmd_ingest(const RunConfig& config) {
  if (config.datasets.empty()) throw ConfigError("config needs at least one dataset");
  RunStore store(config.output_dir);
  std::vector<IngestSummary> out;
  for (const auto& spec : config.datasets) {
    auto items = load_dataset(spec.path, spec.format);
    FilterResult filtered = filter_evaluable(items);
    IngestSummary s{spec.name, items.size(), filtered.retained.size(), filtered.dropped};
    util::write_file_atomic(store.items_path(spec.name),
                            serialize_generic_jsonl(filtered.retained));
    std::string drops;
    for (const auto& d : filtered.dropped) {
      drops += json{{"item_id", d.item_id}, {"reason", d.reason}}.dump() + "\n";
    }
    util::write_file_atomic(store.drops_path(spec.name), drops);
    util::log_info("ingest " + spec.name + ": " + std::to_string(s.loaded) + " loaded, " +
                   std::to_string(s.retained) + " retained, " +
                   std::to_string(s.dropped.size()) + " dropped");
    for (const auto& d : filtered.dropped) {
      util::log_debug("  drop " + d.item_id + ": " + d.reason);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---- annotate --------------------------------------------------------------

namespace {

void ensure_ingested(const RunConfig& config, const RunStore& store) {
  for (const auto& d : config.datasets) {
    if (!fs::exists(store.items_path(d.name))) {
      cmd_ingest(config);
      return;
    }
  }
}

void preload_labels(LabelCache& cache, const RunConfig& config) {
  for (const auto& path : config.label_files) {
    for (const auto& row : util::read_jsonl(path)) {
      if (!row.contains("iri") || !row.contains("label")) {
        throw SchemaError(path.string() + ": label rows need iri and label");
      }
      std::string label = row["label"].get<std::string>();
      if (label.empty()) continue;
      cache.put(row["iri"].get<std::string>(), CachedLabel{label, row.value("language", "")});
    }
  }
}

}  // namespace

std::vector<Annotation> cmd_annotate(const RunConfig& config) {
  RunStore store(config.output_dir);
  ensure_ingested(config, store);
  LabelCache cache(store.label_cache_path());
  preload_labels(cache, config);
  auto endpoint = make_endpoint(config.sparql_endpoint);
  KgConfig kg = KgConfig::wikidata();

  std::vector<Annotation> all;
  for (const auto& spec : config.datasets) {
    auto items = load_items(store, spec.name);
    std::vector<Annotation> annotations(items.size());
    util::parallel_for(items.size(), config.concurrency.endpoint, [&](std::size_t i) {
      Annotation& a = annotations[i];
      a.dataset = spec.name;
      a.item_id = items[i].id;
      try {
        a.terms = extract_terms(items[i].gold_query, kg);
        if (a.terms.empty()) {
          a.error = "gold query mentions no KG terms";
          return;
        }
        LabelResolution res = resolve_labels(a.terms, *endpoint, cache, kg, 1);
        a.bindings = std::move(res.bindings);
        a.warnings = std::move(res.warnings);
      } catch (const LabelNotFound& e) {
        a.error = std::string("label not found: ") + e.what();
      } catch (const Error& e) {
        a.error = e.what();
      }
    });
    std::size_t usable = 0;
    for (const auto& a : annotations) {
      if (a.bindings) ++usable;
      for (const auto& w : a.warnings) util::log_warn(spec.name + "/" + a.item_id + ": " + w);
    }
    util::log_info("annotate " + spec.name + ": " + std::to_string(usable) + " of " +
                   std::to_string(annotations.size()) + " items usable for injection");
    all.insert(all.end(), annotations.begin(), annotations.end());
  }
  std::string text;
  for (const auto& a : all) text += a.to_json().dump() + "\n";
  util::write_file_atomic(store.annotations_path(), text);
  return all;
}

// ---- run -------------------------------------------------------------------

namespace {

PromptTemplates templates_for(const RunConfig& config) {
  if (config.templates_dir.empty()) return PromptTemplates::builtin();
  return PromptTemplates::load(config.templates_dir);
}

struct Trial {
  const DatasetSpec* dataset;
  const ModelConfig* model;
  PromptStrategy strategy;
  const BenchmarkItem* item;
  const Annotation* annotation;
};

MaskMapping mapping_for(RunStore& store, const RunConfig& config, const std::string& dataset,
                        const BenchmarkItem& item, const std::vector<TermBinding>& bindings) {
  fs::path path = store.mask_path(dataset, item.id);
  if (fs::exists(path)) return MaskMapping::from_json(json::parse(util::read_file(path)));
  std::uint64_t seed = util::derive_seed(config.seed, dataset, item.id);
  MaskMapping m = mask_terms(order_for_injection(bindings), seed).mapping;
  util::write_file_atomic(path, m.to_json().dump(2) + "\n");
  return m;
}

}  // namespace

RunSummary cmd_run(const RunConfig& config) {
  config.validate();
  RunStore store(config.output_dir);
  PromptTemplates templates = templates_for(config);
  store.write_or_check_manifest(make_manifest(config, templates));
  ensure_ingested(config, store);
  if (!fs::exists(store.annotations_path())) cmd_annotate(config);

  std::map<std::string, std::vector<BenchmarkItem>> items;
  for (const auto& d : config.datasets) items[d.name] = load_items(store, d.name);
  auto annotations = load_annotations(store);

  auto oracle = std::make_shared<MockOracle>();
  for (const auto& [name, list] : items) {
    for (const auto& item : list) {
      MockItem m{item.gold_query, {}};
      auto it = annotations.find(annotation_key(name, item.id));
      if (it != annotations.end() && it->second.bindings) {
        for (const auto& b : order_for_injection(*it->second.bindings)) {
          m.ordered_terms.push_back(b.term);
        }
      }
      oracle->add(item.question, std::move(m));
    }
  }
  std::map<std::string, std::unique_ptr<LlmClient>> clients;
  for (const auto& m : config.models) {
    std::shared_ptr<util::HttpTransport> transport;
    if (m.base_url.rfind("mock:", 0) == 0) {
      transport = make_mock_transport(parse_mock_mode(m.base_url.substr(5)), oracle);
    } else {
      transport = util::make_http_transport();
    }
    clients[m.name] = std::make_unique<LlmClient>(m, transport);
  }

  store.repair();
  const auto done = store.completed_triples();
  RunSummary summary;
  std::vector<Trial> pending;
  for (const auto& d : config.datasets) {
    for (const auto& m : config.models) {
      for (auto s : config.strategies) {
        for (const auto& item : items[d.name]) {
          auto it = annotations.find(annotation_key(d.name, item.id));
          const Annotation* a = it == annotations.end() ? nullptr : &it->second;
          if (uses_injection(s) && (!a || !a->bindings)) {
            ++summary.excluded;
            continue;
          }
          ++summary.planned;
          GenerationRecord key;
          key.dataset = d.name;
          key.model = m.name;
          key.strategy = s;
          key.item_id = item.id;
          if (done.count(key.triple_key())) {
            ++summary.skipped;
            continue;
          }
          pending.push_back(Trial{&d, &m, s, &item, a});
        }
      }
    }
  }
  util::log_info("run: " + std::to_string(summary.planned) + " trials planned, " +
                 std::to_string(summary.skipped) + " already done, " +
                 std::to_string(summary.excluded) + " injection trials excluded");

  // Masks are written before the fan-out so workers only read them.
  std::map<std::string, MaskMapping> masks;
  for (const auto& t : pending) {
    if (t.strategy != PromptStrategy::MaskedInjection) continue;
    std::string k = annotation_key(t.dataset->name, t.item->id);
    if (!masks.count(k)) {
      masks[k] = mapping_for(store, config, t.dataset->name, *t.item, *t.annotation->bindings);
    }
  }

  std::atomic<std::size_t> generated{0}, failed{0};
  util::parallel_for(pending.size(), config.concurrency.llm, [&](std::size_t i) {
    const Trial& t = pending[i];
    GenerationRecord r;
    r.dataset = t.dataset->name;
    r.model = t.model->name;
    r.strategy = t.strategy;
    r.item_id = t.item->id;
    r.started_at = util::utc_timestamp_now();
    const std::vector<TermBinding> none;
    const auto& bindings = t.annotation && t.annotation->bindings ? *t.annotation->bindings : none;
    PromptText prompt;
    if (t.strategy == PromptStrategy::MaskedInjection) {
      prompt = build_prompt(*t.item, bindings,
                            masks.at(annotation_key(t.dataset->name, t.item->id)), templates);
    } else {
      std::uint64_t seed = util::derive_seed(config.seed, t.dataset->name, t.item->id);
      prompt = build_prompt(*t.item, t.strategy, bindings, seed, templates);
    }
    try {
      RawResponse raw = clients.at(t.model->name)->generate(prompt);
      r.raw_response = std::move(raw.text);
      r.latency_ms = raw.latency_ms;
      r.request_id = std::move(raw.request_id);
      r.attempts = raw.attempts;
    } catch (const TransportError& e) {
      r.generation_error = e.what();
      r.attempts = e.attempts();
      ++failed;
    } catch (const ModelRefusal& e) {
      r.generation_error = e.what();
      ++failed;
    }
    r.finished_at = util::utc_timestamp_now();
    store.append(r);
    ++generated;
  });
  summary.generated = generated;
  summary.failed = failed;
  util::log_info("run: " + std::to_string(summary.generated) + " trials generated, " +
                 std::to_string(summary.failed) + " failed");
  return summary;
}

// ---- score -----------------------------------------------------------------

void score_record(GenerationRecord& r, const AnswerSet& gold, const MaskMapping* mapping,
                  bool strip_reasoning, const ScoringContext& ctx) {
  r.scored = true;
  r.extracted_query.reset();
  r.extraction_error.reset();
  r.unmasked_query.reset();
  r.unknown_mask_tokens.clear();
  r.leaked_terms.clear();
  r.validation = ValidationOutcome{};
  r.execution.reset();
  r.answer_matches = false;
  r.correct = false;

  if (r.generation_error) {
    r.extraction_error = "no model response: " + *r.generation_error;
  } else {
    try {
      r.extracted_query = extract_query(r.raw_response, strip_reasoning);
    } catch (const FormatError& e) {
      r.extraction_error = e.what();
    }
  }
  if (r.extracted_query) {
    std::string query = *r.extracted_query;
    if (r.strategy == PromptStrategy::MaskedInjection) {
      r.leaked_terms = find_kg_leaks(query, ctx.kg);
      UnmaskResult u = unmask_query(query, mapping ? *mapping : MaskMapping{});
      r.unmasked_query = u.query;
      r.unknown_mask_tokens = std::move(u.unknown_tokens);
      query = u.query;
    }
    r.validation = validate_syntax(query);
    if (r.validation.syntactically_valid && ctx.endpoint) {
      ExecutionResult exec = execute(query, *ctx.endpoint, ctx.row_cap, ctx.cache);
      r.validation.executable = exec.kind != ResultKind::Failed;
      if (!r.validation.executable) r.validation.execution_error = exec.diagnostic;
      r.answer_matches = r.validation.executable && compare(exec, gold);
      r.execution = std::move(exec);
    }
    r.correct = r.answer_matches && r.leaked_terms.empty();
  }
  r.error_categories = classify(r);
}

namespace {

RunConfig config_from_manifest(const RunStore& store, const ConfigOverrides& overrides) {
  if (!store.has_manifest()) {
    throw IoError(store.dir().string() + " has no manifest.json (run `run` first)");
  }
  RunManifest manifest = store.read_manifest();
  RunConfig config = RunConfig::from_json(manifest.effective_config);
  config.output_dir = store.dir();
  ConfigOverrides o = overrides;
  o.mock_model.reset();  // responses are already stored
  o.seed.reset();
  apply_overrides(config, o);
  return config;
}

// Dataset, model and strategy in config order, then item order.
void sort_canonical(std::vector<GenerationRecord>& records, const RunConfig& config,
                    const std::map<std::string, std::vector<BenchmarkItem>>& items) {
  std::map<std::string, std::size_t> dataset_rank, model_rank, item_rank;
  for (std::size_t i = 0; i < config.datasets.size(); ++i) dataset_rank[config.datasets[i].name] = i;
  for (std::size_t i = 0; i < config.models.size(); ++i) model_rank[config.models[i].name] = i;
  for (const auto& [name, list] : items) {
    for (std::size_t i = 0; i < list.size(); ++i) item_rank[annotation_key(name, list[i].id)] = i;
  }
  auto rank = [](const std::map<std::string, std::size_t>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? SIZE_MAX : it->second;
  };
  auto strategy_rank = [&](PromptStrategy s) {
    auto it = std::find(config.strategies.begin(), config.strategies.end(), s);
    return static_cast<std::size_t>(it - config.strategies.begin());
  };
  std::stable_sort(records.begin(), records.end(), [&](const auto& a, const auto& b) {
    auto ka = std::make_tuple(rank(dataset_rank, a.dataset), a.dataset, rank(model_rank, a.model),
                              a.model, strategy_rank(a.strategy),
                              rank(item_rank, annotation_key(a.dataset, a.item_id)), a.item_id);
    auto kb = std::make_tuple(rank(dataset_rank, b.dataset), b.dataset, rank(model_rank, b.model),
                              b.model, strategy_rank(b.strategy),
                              rank(item_rank, annotation_key(b.dataset, b.item_id)), b.item_id);
    return ka < kb;
  });
}

}  // namespace

ScoreSummary cmd_score(const fs::path& run_dir, const ConfigOverrides& overrides) {
  RunStore store(run_dir);
  RunConfig config = config_from_manifest(store, overrides);
  std::map<std::string, std::vector<BenchmarkItem>> items;
  std::map<std::string, const BenchmarkItem*> by_key;
  for (const auto& d : config.datasets) items[d.name] = load_items(store, d.name);
  for (const auto& [name, list] : items) {
    for (const auto& item : list) by_key[annotation_key(name, item.id)] = &item;
  }

  auto endpoint = make_endpoint(config.sparql_endpoint);
  std::unique_ptr<ExecutionCache> cache;
  if (auto replay = std::dynamic_pointer_cast<ReplayEndpoint>(endpoint)) {
    // Offline scoring: gold queries answer with their gold answers unless a
    // recording says otherwise.
    for (const auto& [key, item] : by_key) {
      if (!replay->has_recording(item->gold_query)) {
        replay->record(item->gold_query, answer_to_results_json(item->gold_answer));
      }
    }
  } else {
    cache = std::make_unique<ExecutionCache>(store.execution_cache_path());
  }
  ScoringContext ctx;
  ctx.endpoint = endpoint.get();
  ctx.cache = cache.get();
  ctx.row_cap = config.sparql_endpoint.row_cap;

  std::map<std::string, bool> strip;
  for (const auto& m : config.models) strip[m.name] = m.effective_strip_reasoning();

  auto records = store.load_records();
  std::map<std::string, MaskMapping> masks;
  for (const auto& r : records) {
    if (r.strategy != PromptStrategy::MaskedInjection) continue;
    std::string k = annotation_key(r.dataset, r.item_id);
    fs::path p = store.mask_path(r.dataset, r.item_id);
    if (!masks.count(k) && fs::exists(p)) {
      masks[k] = MaskMapping::from_json(json::parse(util::read_file(p)));
    }
  }
  util::parallel_for(records.size(), config.concurrency.endpoint, [&](std::size_t i) {
    GenerationRecord& r = records[i];
    std::string k = annotation_key(r.dataset, r.item_id);
    auto item = by_key.find(k);
    AnswerSet gold = item == by_key.end() ? AnswerSet{} : item->second->gold_answer;
    auto mask = masks.find(k);
    auto s = strip.find(r.model);
    score_record(r, gold, mask == masks.end() ? nullptr : &mask->second,
                 s == strip.end() ? false : s->second, ctx);
  });
  sort_canonical(records, config, items);
  store.rewrite_records(records);
  ScoreSummary summary;
  summary.records = records.size();
  for (const auto& r : records) summary.correct += r.correct ? 1 : 0;
  util::log_info("score: " + std::to_string(summary.records) + " records, " +
                 std::to_string(summary.correct) + " correct");
  return summary;
}

// ---- report ----------------------------------------------------------------

void cmd_report(const fs::path& run_dir) {
  RunStore store(run_dir);
  if (!store.has_manifest()) {
    throw IoError(run_dir.string() + " is not a run directory (no manifest.json)");
  }
  auto records = store.load_records();
  for (const auto& r : records) {
    if (!r.scored) throw ConfigError("run directory has unscored records (run `score` first)");
  }
  auto reports = compute_all_metrics(records);
  auto freqs = category_frequencies(records);
  util::write_file_atomic(store.dir() / "report.md",
                          render_report(reports, freqs, ReportFormat::Markdown));
  util::write_file_atomic(store.dir() / "report.csv",
                          render_report(reports, freqs, ReportFormat::Csv));
  util::write_file_atomic(store.dir() / "report.json",
                          render_report(reports, freqs, ReportFormat::Json));
  util::write_file_atomic(store.dir() / "errors.csv", render_error_csv(freqs));
  util::log_info("report: " + std::to_string(reports.size()) + " groups written to " +
                 store.dir().string());
}

}  // namespace sparqlbench
