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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "sparqlbench/config.h"
#include "sparqlbench/dataset.h"
#include "sparqlbench/endpoint.h"
#include "sparqlbench/error_taxonomy.h"
#include "sparqlbench/gold_analysis.h"
#include "sparqlbench/metrics_report.h"
#include "sparqlbench/pipeline.h"
#include "sparqlbench/prompting.h"
#include "sparqlbench/run_store.h"
#include "sparqlbench/sparql_eval.h"
#include "sparqlbench/util/hash.h"
#include "sparqlbench/util/io.h"
#include "sparqlbench/util/log.h"

namespace sb = sparqlbench;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kFixtures = SPARQLBENCH_FIXTURE_DIR;
const fs::path kGolden = SPARQLBENCH_GOLDEN_DIR;
const std::string kWd = "http://www.wikidata.org/entity/";

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure notes; the first few are kept for the summary line.
struct Notes {
  std::size_t failures = 0;
  std::vector<std::string> first;
  void fail(const std::string& what) {
    if (first.size() < 3) first.push_back(what);
    ++failures;
  }
  std::string summary() const {
    std::string s;
    for (const auto& f : first) s += "; " + f;
    return s;
  }
};

int run_criterion(int id, const std::string& name, double limit_s,
                  const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  bool in_time = secs < limit_s;
  bool pass = out.pass && in_time;
  std::printf("criterion %d: %s  %s  (%.3f s, limit %.0f s)  %s%s\n", id, pass ? "PASS" : "FAIL",
              name.c_str(), secs, limit_s, out.detail.c_str(),
              in_time ? "" : "  [time limit exceeded]");
  std::fflush(stdout);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- tables

struct Cell {
  std::size_t total, valid, correct;
  const char* p_val;
  const char* p;
};
struct TableRow {
  const char* dataset;
  const char* model;
  Cell cells[3];  // zero-shot, knowledge injection, masked injection
};

// Published counts and printed ratios: the main results table (MCWQ and
// QALD-9-plus) followed by the optimized MCWQ table.
const TableRow kPublished[] = {
    {"MCWQ", "Qwen 2.5 7B", {{155, 55, 0, "0.35", "0.00"}, {155, 81, 11, "0.35", "0.07"}, {155, 90, 0, "0.35", "0.00"}}},
    {"MCWQ", "Qwen 2.5 14B", {{155, 45, 0, "0.29", "0.00"}, {155, 66, 6, "0.29", "0.04"}, {155, 78, 0, "0.29", "0.00"}}},
    {"MCWQ", "Qwen 2.5 32B", {{155, 0, 0, "0.00", "0.00"}, {155, 0, 0, "0.00", "0.00"}, {155, 1, 0, "0.00", "0.00"}}},
    {"MCWQ", "Qwen 2.5 72B", {{155, 18, 0, "0.12", "0.00"}, {155, 95, 24, "0.12", "0.15"}, {155, 65, 2, "0.12", "0.01"}}},
    {"MCWQ", "DeepSeek-r1 7B", {{155, 2, 0, "0.01", "0.00"}, {155, 11, 0, "0.01", "0.00"}, {155, 4, 0, "0.01", "0.00"}}},
    {"MCWQ", "DeepSeek-r1 14B", {{155, 76, 0, "0.49", "0.00"}, {155, 26, 2, "0.49", "0.01"}, {155, 45, 0, "0.49", "0.00"}}},
    {"MCWQ", "DeepSeek-r1 32B", {{155, 59, 0, "0.38", "0.00"}, {155, 10, 6, "0.38", "0.04"}, {155, 9, 0, "0.38", "0.00"}}},
    {"MCWQ", "DeepSeek-r1 70B", {{155, 69, 0, "0.45", "0.00"}, {155, 12, 2, "0.45", "0.01"}, {155, 49, 2, "0.45", "0.01"}}},
    {"MCWQ", "Mistral-Small", {{155, 92, 0, "0.59", "0.00"}, {155, 71, 11, "0.59", "0.07"}, {155, 38, 0, "0.59", "0.00"}}},
    {"MCWQ", "Mistral-Large", {{155, 135, 1, "0.87", "0.01"}, {155, 112, 12, "0.87", "0.08"}, {155, 110, 0, "0.87", "0.00"}}},
    {"MCWQ", "Llama 3.3 70B", {{155, 118, 0, "0.76", "0.00"}, {155, 122, 16, "0.76", "0.10"}, {155, 112, 1, "0.76", "0.01"}}},
    {"QALD-9-plus", "Qwen 2.5 7B", {{471, 266, 0, "0.56", "0.00"}, {460, 357, 109, "0.56", "0.24"}, {460, 347, 37, "0.56", "0.08"}}},
    {"QALD-9-plus", "qwen2.5 14B", {{471, 268, 1, "0.57", "0.00"}, {460, 342, 209, "0.57", "0.45"}, {460, 246, 126, "0.57", "0.27"}}},
    {"QALD-9-plus", "Qwen 2.5 32B", {{471, 10, 0, "0.02", "0.00"}, {460, 5, 3, "0.02", "0.01"}, {460, 21, 8, "0.02", "0.02"}}},
    {"QALD-9-plus", "Qwen 2.5 72B", {{471, 247, 6, "0.52", "0.01"}, {460, 400, 257, "0.52", "0.56"}, {460, 425, 229, "0.52", "0.50"}}},
    {"QALD-9-plus", "DeepSeek-r1 7B", {{471, 31, 0, "0.07", "0.00"}, {460, 84, 3, "0.07", "0.01"}, {460, 30, 0, "0.07", "0.00"}}},
    {"QALD-9-plus", "DeepSeek-r1 14B", {{471, 293, 0, "0.62", "0.00"}, {460, 198, 77, "0.62", "0.17"}, {460, 46, 4, "0.62", "0.01"}}},
    {"QALD-9-plus", "DeepSeek-r1 32B", {{471, 354, 4, "0.75", "0.01"}, {460, 347, 212, "0.75", "0.46"}, {460, 335, 181, "0.75", "0.39"}}},
    {"QALD-9-plus", "DeepSeek-r1 70B", {{471, 370, 3, "0.79", "0.01"}, {460, 144, 64, "0.79", "0.14"}, {460, 55, 14, "0.79", "0.03"}}},
    {"QALD-9-plus", "Mistral-Small", {{471, 338, 6, "0.72", "0.01"}, {460, 399, 241, "0.72", "0.52"}, {460, 347, 151, "0.72", "0.33"}}},
    {"QALD-9-plus", "Mistral-Large", {{471, 447, 30, "0.95", "0.06"}, {460, 450, 279, "0.95", "0.61"}, {460, 426, 212, "0.95", "0.46"}}},
    {"QALD-9-plus", "Llama 3.3 70B", {{471, 330, 14, "0.70", "0.03"}, {460, 371, 186, "0.70", "0.40"}, {460, 372, 161, "0.70", "0.35"}}},
    {"MCWQ optimized", "Qwen 2.5 7B", {{146, 51, 0, "0.35", "0.00"}, {140, 77, 12, "0.35", "0.09"}, {140, 70, 0, "0.35", "0.00"}}},
    {"MCWQ optimized", "Qwen 2.5 14B", {{146, 24, 0, "0.16", "0.00"}, {140, 44, 7, "0.16", "0.05"}, {140, 37, 0, "0.16", "0.00"}}},
    {"MCWQ optimized", "Qwen 2.5 32B", {{146, 0, 0, "0.00", "0.00"}, {140, 0, 0, "0.00", "0.00"}, {140, 1, 0, "0.00", "0.00"}}},
    {"MCWQ optimized", "Qwen 2.5 72B", {{146, 22, 0, "0.15", "0.00"}, {140, 107, 16, "0.15", "0.11"}, {140, 99, 0, "0.15", "0.00"}}},
    {"MCWQ optimized", "DeepSeek-r1 7B", {{146, 4, 0, "0.03", "0.00"}, {140, 7, 0, "0.03", "0.00"}, {140, 4, 0, "0.03", "0.00"}}},
    {"MCWQ optimized", "DeepSeek-r1 14B", {{146, 66, 0, "0.45", "0.00"}, {140, 51, 7, "0.45", "0.05"}, {140, 6, 0, "0.45", "0.00"}}},
    {"MCWQ optimized", "DeepSeek-r1 32B", {{146, 66, 0, "0.45", "0.00"}, {140, 69, 16, "0.45", "0.11"}, {140, 40, 0, "0.45", "0.00"}}},
    {"MCWQ optimized", "DeepSeek-r1 70B", {{146, 67, 0, "0.46", "0.00"}, {140, 20, 2, "0.46", "0.01"}, {140, 27, 0, "0.46", "0.00"}}},
    {"MCWQ optimized", "Mistral-Small", {{146, 95, 0, "0.65", "0.00"}, {140, 56, 8, "0.65", "0.06"}, {140, 53, 0, "0.65", "0.00"}}},
    {"MCWQ optimized", "Mistral-Large", {{146, 123, 2, "0.84", "0.01"}, {140, 101, 12, "0.84", "0.09"}, {140, 92, 0, "0.84", "0.00"}}},
    {"MCWQ optimized", "Llama 3.3 70B", {{146, 103, 0, "0.71", "0.00"}, {140, 97, 20, "0.71", "0.14"}, {140, 89, 0, "0.71", "0.00"}}},
};

std::vector<sb::GenerationRecord> records_for(const sb::GroupKey& g, const Cell& c) {
  std::vector<sb::GenerationRecord> recs(c.total);
  for (std::size_t i = 0; i < c.total; ++i) {
    auto& r = recs[i];
    r.item_id = std::to_string(i);
    r.model = g.model;
    r.strategy = g.strategy;
    r.dataset = g.dataset;
    r.scored = true;
    bool valid = i < c.valid;
    if (valid) r.extracted_query = "ASK {}";
    r.validation.syntactically_valid = valid;
    r.validation.executable = valid;
    r.correct = i < c.correct;
  }
  return recs;
}

Outcome metric_oracle() {
  Notes notes;
  std::size_t p_cells = 0, p_val_cells = 0, own_p_val_diffs = 0;
  for (const auto& row : kPublished) {
    for (int s = 0; s < 3; ++s) {
      const Cell& c = row.cells[s];
      sb::GroupKey g{row.model, sb::all_strategies()[s], row.dataset};
      sb::MetricsReport rep = sb::compute_metrics(records_for(g, c), g);
      std::string label = std::string(row.dataset) + "/" + row.model + "/" +
                          std::string(sb::to_string(g.strategy));
      if (rep.total != c.total || rep.valid != c.valid || rep.correct != c.correct) {
        notes.fail(label + " counts");
      }
      ++p_cells;
      if (sb::format_ratio(rep.correct, rep.total) != c.p) {
        notes.fail(label + " P " + sb::format_ratio(rep.correct, rep.total) + " != " + c.p);
      }
      // The printed P_val column repeats the zero-shot value in all three
      // strategy blocks, so it is checked against the zero-shot counts.
      if (s == 0) {
        ++p_val_cells;
        if (sb::format_ratio(rep.valid, rep.total) != c.p_val) {
          notes.fail(label + " P_val " + sb::format_ratio(rep.valid, rep.total) + " != " + c.p_val);
        }
      } else if (sb::format_ratio(rep.valid, rep.total) != c.p_val) {
        ++own_p_val_diffs;
      }
    }
  }
  std::ostringstream d;
  d << p_cells << " P cells and " << p_val_cells << " zero-shot P_val cells checked, "
    << notes.failures << " mismatches; " << own_p_val_diffs
    << " injection-block P_val cells differ from their own valid/total as printed"
    << notes.summary();
  return {notes.failures == 0, d.str()};
}

// ---------------------------------------------------------------- prompts

sb::BenchmarkItem skype_item() {
  auto items = sb::load_dataset(kFixtures / "qald9plus_synthetic.json", sb::DatasetFormat::QaldJson);
  for (auto& it : items) {
    if (it.id == "99") return it;
  }
  throw std::runtime_error("Skype item missing from the QALD fixture");
}

Outcome prompt_goldens() {
  Notes notes;
  sb::BenchmarkItem item = skype_item();
  std::vector<sb::TermBinding> bindings = {{"wd:Q40984", "Skype", sb::TermKind::Entity},
                                           {"wdt:P178", "developer", sb::TermKind::Property}};
  auto expect = [&](const std::string& file, const std::string& body) {
    if (sb::util::read_file(kGolden / file) != body) notes.fail(file + " differs");
  };
  expect("skype_zero_shot.txt", sb::build_prompt(item, sb::PromptStrategy::ZeroShot, {}, 0).body);
  expect("skype_knowledge_injection.txt",
         sb::build_prompt(item, sb::PromptStrategy::KnowledgeInjection, bindings, 0).body);
  sb::MaskMapping pinned;
  pinned.pairs = {{"wd:Q40984", "kg:6211"}, {"wdt:P178", "kg:1548"}};
  expect("skype_masked_injection.txt", sb::build_prompt(item, bindings, pinned).body);

  // A seeded mapping yields the golden with its two tokens substituted.
  sb::PromptText seeded = sb::build_prompt(item, sb::PromptStrategy::MaskedInjection, bindings, 42);
  std::string templ = sb::util::read_file(kGolden / "skype_masked_injection.txt");
  templ.replace(templ.find("kg:6211"), 7, *seeded.mapping->masked_for("wd:Q40984"));
  templ.replace(templ.find("kg:1548"), 7, *seeded.mapping->masked_for("wdt:P178"));
  if (seeded.body != templ) notes.fail("seeded masked prompt differs from golden structure");
  return {notes.failures == 0, "3 byte-exact goldens + seeded masked structure" + notes.summary()};
}

// ---------------------------------------------------------------- masking

std::vector<sb::BenchmarkItem> retained_qald() {
  auto items = sb::load_dataset(kFixtures / "qald9plus_synthetic.json", sb::DatasetFormat::QaldJson);
  return sb::filter_evaluable(items).retained;
}

bool round_trips(const std::string& query, const std::vector<sb::TermBinding>& bindings,
                 std::uint64_t seed, Notes& notes, const std::string& label) {
  sb::MaskedBindings masked = sb::mask_terms(bindings, seed);
  if (!masked.mapping.is_valid_bijection()) {
    notes.fail(label + ": mapping is not a bijection in range");
    return false;
  }
  std::string rewritten = sb::mask_rewrite(query, masked.mapping);
  sb::UnmaskResult back = sb::unmask_query(rewritten, masked.mapping);
  if (back.query != query || !back.unknown_tokens.empty()) {
    notes.fail(label + ": unmask(mask(q)) != q");
    return false;
  }
  return true;
}

Outcome masking_round_trip() {
  Notes notes;
  std::mt19937_64 rng(20250117);
  const char* prefixes[] = {"wd:Q", "wdt:P", "p:P", "ps:P", "pq:P"};
  for (int t = 0; t < 500; ++t) {
    std::size_t n = 1 + rng() % 20;
    std::vector<sb::TermBinding> bindings;
    std::string values;
    for (std::size_t i = 0; i < n; ++i) {
      const char* pre = prefixes[rng() % 5];
      std::string term = pre + std::to_string(1 + rng() % 100000);
      bindings.push_back({term, "label " + std::to_string(i),
                          pre[0] == 'w' && pre[1] == 'd' && pre[2] == ':' ? sb::TermKind::Entity
                                                                          : sb::TermKind::Property});
      values += " " + term;
    }
    std::string q = "SELECT ?x WHERE { VALUES ?x {" + values + " } ?x ?p ?o }";
    round_trips(q, bindings, rng(), notes, "random set " + std::to_string(t));
  }
  auto items = retained_qald();
  std::size_t used = 0;
  for (const auto& item : items) {
    if (used == 200) break;
    std::vector<sb::TermBinding> bindings;
    for (const auto& term : sb::extract_terms(item.gold_query)) {
      bindings.push_back({term, "x", sb::TermKind::Entity});
    }
    if (bindings.empty()) continue;
    ++used;
    round_trips(item.gold_query, bindings, sb::util::derive_seed(42, "qald9plus", item.id), notes,
                "gold " + item.id);
  }
  std::ostringstream d;
  d << "500 random term sets + " << used << " gold queries, " << notes.failures << " failures"
    << notes.summary();
  return {notes.failures == 0 && used == 200, d.str()};
}

// ---------------------------------------------------------------- runs

sb::RunConfig offline_config(const fs::path& out, const std::string& mock) {
  sb::RunConfig c = sb::RunConfig::load(kFixtures / "offline_config.json");
  sb::ConfigOverrides o;
  o.output_dir = out;
  o.mock_model = mock;
  sb::apply_overrides(c, o);
  return c;
}

Outcome masked_hygiene(const fs::path& scratch) {
  sb::RunConfig config = offline_config(scratch / "hygiene", "gold");
  auto annotations = sb::cmd_annotate(config);
  std::map<std::string, const sb::BenchmarkItem*> by_id;
  auto items = retained_qald();
  for (const auto& it : items) by_id[it.id] = &it;
  std::size_t prompts = 0, violations = 0;
  std::string first;
  for (const auto& a : annotations) {
    if (!a.bindings) continue;
    const sb::BenchmarkItem* item = by_id.at(a.item_id);
    sb::PromptText p = sb::build_prompt(*item, sb::PromptStrategy::MaskedInjection, *a.bindings,
                                        sb::util::derive_seed(config.seed, a.dataset, item->id));
    ++prompts;
    auto v = sb::prompt_hygiene_violations(p.body);
    if (!v.empty()) {
      violations += v.size();
      if (first.empty()) first = "; item " + item->id + ": " + v.front();
    }
  }
  std::ostringstream d;
  d << prompts << " masked prompts, " << violations << " violations" << first;
  return {violations == 0 && prompts > 0, d.str()};
}

Outcome validator_on_gold() {
  auto items = sb::load_dataset(kFixtures / "qald9plus_synthetic.json", sb::DatasetFormat::QaldJson);
  std::size_t ok = 0;
  std::string first;
  for (const auto& it : items) {
    auto v = sb::validate_syntax(it.gold_query);
    if (v.syntactically_valid) {
      ++ok;
    } else if (first.empty()) {
      first = "; first failure " + it.id + ": " + v.syntax_error.value_or("");
    }
  }
  bool fig3a_rejected =
      !sb::validate_syntax("SELECT ?resource \nWHERE { >// Instance of film").syntactically_valid;
  std::ostringstream d;
  d << ok << "/" << items.size() << " gold queries valid; invalid-format example "
    << (fig3a_rejected ? "rejected" : "ACCEPTED") << first;
  return {ok == items.size() && fig3a_rejected, d.str()};
}

// ---------------------------------------------------------------- comparator

sb::RdfTerm random_term(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return sb::RdfTerm::iri(kWd + "Q" + std::to_string(rng() % 50));
    case 1:
      return sb::RdfTerm::literal(std::to_string(rng() % 40),
                                  "http://www.w3.org/2001/XMLSchema#integer");
    case 2:
      return sb::RdfTerm::literal("label" + std::to_string(rng() % 30));
    default:
      return sb::RdfTerm::literal("name" + std::to_string(rng() % 30), "", "en");
  }
}

// Same term, different surface form.
sb::RdfTerm respell(const sb::RdfTerm& t, std::mt19937_64& rng) {
  if (t.type == sb::TermType::Literal && t.datatype.ends_with("#integer") && rng() % 2) {
    return sb::RdfTerm::literal("+0" + t.value, t.datatype);
  }
  if (t.type == sb::TermType::Literal && t.datatype.empty() && t.lang.empty() && rng() % 2) {
    return sb::RdfTerm::literal(t.value, std::string(sb::kXsdString));
  }
  if (t.type == sb::TermType::Literal && !t.lang.empty() && rng() % 2) {
    return sb::RdfTerm::literal(t.value, "", "EN");
  }
  return t;
}

sb::ExecutionResult as_result(const std::vector<sb::RdfTerm>& terms) {
  sb::ExecutionResult r;
  r.kind = sb::ResultKind::Bindings;
  r.answer = sb::AnswerSet::terms(terms);
  r.row_count = terms.size();
  return r;
}

Outcome comparator_properties() {
  Notes notes;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    std::vector<sb::RdfTerm> gold;
    std::size_t n = 1 + rng() % 15;
    for (std::size_t k = 0; k < n; ++k) gold.push_back(random_term(rng));
    std::vector<sb::RdfTerm> produced;
    for (const auto& t : gold) {
      std::size_t copies = 1 + rng() % 3;
      for (std::size_t c = 0; c < copies; ++c) produced.push_back(respell(t, rng));
    }
    std::shuffle(produced.begin(), produced.end(), rng);
    sb::AnswerSet gold_set = sb::AnswerSet::terms(gold);
    if (!sb::compare(as_result(produced), gold_set)) notes.fail("pair " + std::to_string(i) + " equal sets unequal");
    // Perturbed copy: one extra term not in the gold set.
    std::vector<sb::RdfTerm> extra = produced;
    extra.push_back(sb::RdfTerm::iri(kWd + "Q999999"));
    if (sb::compare(as_result(extra), gold_set)) notes.fail("pair " + std::to_string(i) + " superset equal");
    if (sb::compare(as_result({}), gold_set)) notes.fail("empty result equals non-empty gold");
    if (sb::compare(as_result(produced), sb::AnswerSet::terms({}))) notes.fail("non-empty equals empty gold");
  }
  for (bool a : {true, false}) {
    for (bool b : {true, false}) {
      sb::ExecutionResult r;
      r.kind = sb::ResultKind::Boolean;
      r.answer = sb::AnswerSet::boolean(a);
      if (sb::compare(r, sb::AnswerSet::boolean(b)) != (a == b)) notes.fail("boolean table");
    }
    sb::ExecutionResult r;
    r.kind = sb::ResultKind::Boolean;
    r.answer = sb::AnswerSet::boolean(a);
    if (sb::compare(r, sb::AnswerSet::terms({sb::RdfTerm::iri(kWd + "Q1")}))) notes.fail("boolean vs set");
  }
  std::ostringstream d;
  d << "1000 randomized pairs, boolean table 2x2, " << notes.failures << " failures" << notes.summary();
  return {notes.failures == 0, d.str()};
}

// ---------------------------------------------------------------- classifier

std::string categories(const sb::CategorySet& s) {
  std::string out = "{";
  for (auto c : s) {
    if (out.size() > 1) out += ",";
    out += std::to_string(static_cast<int>(c));
  }
  return out + "}";
}

sb::GenerationRecord score(const std::string& response, sb::PromptStrategy strategy,
                           sb::SparqlEndpoint& ep, const sb::AnswerSet& gold,
                           const sb::MaskMapping* mapping = nullptr,
                           const std::string& item = "1") {
  sb::GenerationRecord r;
  r.item_id = item;
  r.model = "m";
  r.dataset = "d";
  r.strategy = strategy;
  r.raw_response = response;
  sb::ScoringContext ctx;
  ctx.endpoint = &ep;
  sb::score_record(r, gold, mapping, false, ctx);
  return r;
}

Outcome classifier_fixtures() {
  using C = sb::ErrorCategory;
  Notes notes;
  std::ostringstream d;
  sb::ReplayEndpoint empty_ep;
  sb::AnswerSet gold = sb::AnswerSet::terms({sb::RdfTerm::iri(kWd + "Q5")});

  // Invalid format.
  auto a = score("SELECT ?resource \nWHERE { >// Instance of film", sb::PromptStrategy::ZeroShot,
                 empty_ep, gold);
  if (a.error_categories != sb::CategorySet{C::InvalidFormatOrQuery}) notes.fail("cat1 example");
  d << "cat1 example " << categories(a.error_categories);

  // Empty answer. As printed, ORDER BY sits inside the group braces, which
  // the grammar rejects; the repaired query closes the group first.
  const std::string b_printed =
      "SELECT ?newSeriesEpisodes ?oldSeriesEpisodes \nWHERE { \n"
      "    wd:Q162594 wdt:P1113 ?newSeriesEpisodes .\n"
      "    wd:Q180755 wdt:P1113 ?oldSeriesEpisodes . \n"
      "ORDER BY DESC(?newSeriesEpisodes) \nLIMIT 1\n}";
  const std::string b_repaired =
      "SELECT ?newSeriesEpisodes ?oldSeriesEpisodes \nWHERE { \n"
      "    wd:Q162594 wdt:P1113 ?newSeriesEpisodes .\n"
      "    wd:Q180755 wdt:P1113 ?oldSeriesEpisodes . \n"
      "}\nORDER BY DESC(?newSeriesEpisodes) \nLIMIT 1";
  bool b_printed_valid = sb::validate_syntax(b_printed).syntactically_valid;
  auto bp = score(b_printed, sb::PromptStrategy::ZeroShot, empty_ep, gold);
  auto br = score(b_repaired, sb::PromptStrategy::ZeroShot, empty_ep, gold);
  sb::CategorySet bp_expected = b_printed_valid ? sb::CategorySet{C::EmptyAnswer}
                                                : sb::CategorySet{C::InvalidFormatOrQuery};
  if (bp.error_categories != bp_expected) notes.fail("cat2 example printed");
  if (br.error_categories != sb::CategorySet{C::EmptyAnswer} || !br.execution ||
      br.execution->row_count != 0) {
    notes.fail("cat2 example repaired");
  }
  d << "; cat2 example as printed " << (b_printed_valid ? "valid " : "invalid ")
    << categories(bp.error_categories) << ", repaired " << categories(br.error_categories);

  // Incorrect set of entities, asserted against the validator's verdict.
  const std::string c_printed =
      "SELECT ?mountain \nWHERE  ?mountain wdt:P31 wd:Q8502 .\n"
      "SELECT (MAX(?elevation) AS ?maxElevation) ";
  bool c_valid = sb::validate_syntax(c_printed).syntactically_valid;
  auto c = score(c_printed, sb::PromptStrategy::ZeroShot, empty_ep, gold);
  sb::CategorySet c_expected = c_valid ? sb::CategorySet{C::IncorrectEntitySet}
                                       : sb::CategorySet{C::InvalidFormatOrQuery};
  if (c.error_categories != c_expected) notes.fail("cat3 example");
  d << "; cat3 example " << (c_valid ? "valid " : "invalid ") << categories(c.error_categories);

  // KG URIs under masked injection. The invented kg: names are not mask
  // tokens, so the unmasked query keeps them and the endpoint, which does
  // not know the kg: prefix, rejects it.
  const std::string d_text =
      "SELECT ?moon\nWHERE { ?moon kg:is_moon_of_Jupiter wd:Q61702557 .\n"
      "?moon kg:is_mass wdt:P2067\n}";
  sb::MaskMapping m;
  m.pairs = {{"wd:Q2", "kg:4821"}, {"wdt:P397", "kg:9120"}};
  auto dd = score(d_text, sb::PromptStrategy::MaskedInjection, empty_ep, gold, &m);
  sb::CategorySet d_exec;
  if (!dd.validation.executable) d_exec.insert(C::InvalidFormatOrQuery);
  else if (dd.execution && dd.execution->row_count == 0) d_exec.insert(C::EmptyAnswer);
  else if (!dd.answer_matches) d_exec.insert(C::IncorrectEntitySet);
  sb::CategorySet d_expected = d_exec;
  d_expected.insert(C::KGUriLeak);
  if (!dd.error_categories.count(C::KGUriLeak) || dd.error_categories != d_expected ||
      dd.leaked_terms != std::vector<std::string>{"wd:Q61702557", "wdt:P2067"}) {
    notes.fail("cat4 example");
  }
  d << "; cat4 example " << categories(dd.error_categories);

  // Ten hand-counted trials: expected frequencies 1: 0.3, 2: 0.2, 3: 0.2, 4: 0.2.
  sb::ReplayEndpoint ep;
  auto bindings = [&](const std::vector<std::string>& qids) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& q : qids) rows.push_back({{"x", {{"type", "uri"}, {"value", kWd + q}}}});
    return nlohmann::json{{"head", {{"vars", {"x"}}}}, {"results", {{"bindings", rows}}}};
  };
  ep.record("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", bindings({"Q5"}));
  ep.record("SELECT ?x WHERE { wd:Q2 wdt:P31 ?x }", bindings({"Q6"}));
  sb::MaskMapping mm;
  mm.pairs = {{"wd:Q1", "kg:1000"}, {"wdt:P31", "kg:1001"}, {"wd:Q2", "kg:1002"}};
  using S = sb::PromptStrategy;
  std::vector<sb::GenerationRecord> ten = {
      score("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", S::ZeroShot, ep, gold, nullptr, "1"),
      score("No idea, sorry.", S::ZeroShot, ep, gold, nullptr, "2"),
      score("SELECT ?x WHERE { wd:Q3 wdt:P31 ?x }", S::ZeroShot, ep, gold, nullptr, "3"),
      score("SELECT ?x WHERE { wd:Q2 wdt:P31 ?x }", S::ZeroShot, ep, gold, nullptr, "4"),
      score("SELECT ?x WHERE { wd:Q1 wdt:P31 ", S::ZeroShot, ep, gold, nullptr, "5"),
      score("SELECT ?x WHERE { kg:1000 kg:1001 ?x }", S::MaskedInjection, ep, gold, &mm, "6"),
      score("SELECT ?x WHERE { kg:1002 wdt:P279 ?x }", S::MaskedInjection, ep, gold, &mm, "7"),
      score("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", S::MaskedInjection, ep, gold, &mm, "8"),
      score("SELECT ?x WHERE { kg:77 kg:1001 ?x }", S::MaskedInjection, ep, gold, &mm, "9"),
      score("SELECT ?x WHERE { kg:1002 kg:1001 ?x }", S::MaskedInjection, ep, gold, &mm, "10"),
  };
  auto rows = sb::category_frequencies(ten);
  const std::map<C, double> hand = {{C::InvalidFormatOrQuery, 0.3},
                                    {C::EmptyAnswer, 0.2},
                                    {C::IncorrectEntitySet, 0.2},
                                    {C::KGUriLeak, 0.2}};
  if (rows.empty() || rows[0].strategy != sb::kAllStrategies || rows[0].total != 10) {
    notes.fail("10-trial aggregate row missing");
  } else {
    for (const auto& [cat, f] : hand) {
      double got = rows[0].frequency(cat).value_or(-1);
      if (std::abs(got - f) > 0.005) {
        notes.fail("10-trial category " + std::to_string(static_cast<int>(cat)) + " = " +
                   std::to_string(got));
      }
    }
  }
  d << "; 10-trial set " << sb::format_ratio(rows.empty() ? 0 : rows[0].counts[C::InvalidFormatOrQuery], 10)
    << "/" << sb::format_ratio(rows.empty() ? 0 : rows[0].counts[C::EmptyAnswer], 10) << "/"
    << sb::format_ratio(rows.empty() ? 0 : rows[0].counts[C::IncorrectEntitySet], 10) << "/"
    << sb::format_ratio(rows.empty() ? 0 : rows[0].counts[C::KGUriLeak], 10);

  // A cell where every trial is invalid.
  std::vector<sb::GenerationRecord> all_bad;
  for (int i = 0; i < 155; ++i) {
    all_bad.push_back(score("I cannot do that.", all_bad.size() % 3 == 0 ? S::ZeroShot
                                                 : all_bad.size() % 3 == 1 ? S::KnowledgeInjection
                                                                           : S::MaskedInjection,
                            empty_ep, gold, &mm, std::to_string(i)));
  }
  auto bad_rows = sb::category_frequencies(all_bad);
  std::string bad_freq = sb::format_ratio(bad_rows[0].counts[C::InvalidFormatOrQuery], bad_rows[0].total);
  if (bad_freq != "1.00") notes.fail("all-invalid cell = " + bad_freq);
  d << "; all-invalid cell " << bad_freq;
  return {notes.failures == 0, d.str() + notes.summary()};
}

// ---------------------------------------------------------------- end to end

struct GridRun {
  fs::path dir;
  std::vector<sb::GenerationRecord> records;
  std::size_t trials = 0;
  double seconds = 0;
};

GridRun run_grid(const fs::path& scratch, const std::string& mock) {
  GridRun g;
  g.dir = scratch / ("grid-" + mock);
  auto start = Clock::now();
  sb::RunConfig config = offline_config(g.dir, mock);
  sb::RunSummary rs = sb::cmd_run(config);
  sb::cmd_score(g.dir);
  sb::cmd_report(g.dir);
  g.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  g.trials = rs.generated + rs.skipped;
  g.records = sb::RunStore(g.dir).load_records();
  return g;
}

std::vector<GridRun> g_grids;

Outcome end_to_end(const fs::path& scratch) {
  Notes notes;
  std::ostringstream d;
  for (const char* mock : {"gold", "garbage", "leaky"}) {
    GridRun g = run_grid(scratch, mock);
    auto reports = sb::compute_all_metrics(g.records);
    auto freqs = sb::category_frequencies(g.records);
    std::string m = mock;
    if (g.seconds >= 60) notes.fail(m + " grid took " + std::to_string(g.seconds) + " s");
    if (reports.size() != 3) notes.fail(m + ": expected 3 groups");
    for (const auto& r : reports) {
      std::string tag = m + "/" + std::string(sb::to_string(r.group.strategy));
      if (m == "gold" && (sb::format_ratio(r.correct, r.total) != "1.00" ||
                          sb::format_ratio(r.valid, r.total) != "1.00")) {
        notes.fail(tag + " P=" + sb::format_ratio(r.correct, r.total));
      }
      if (m == "garbage" && sb::format_ratio(r.valid, r.total) != "0.00") {
        notes.fail(tag + " P_val=" + sb::format_ratio(r.valid, r.total));
      }
    }
    std::string leak_freq = "n/a";
    for (const auto& row : freqs) {
      if (m == "garbage" &&
          sb::format_ratio(row.counts.count(sb::ErrorCategory::InvalidFormatOrQuery)
                               ? row.counts.at(sb::ErrorCategory::InvalidFormatOrQuery)
                               : 0,
                           row.total) != "1.00") {
        notes.fail("garbage/" + row.strategy + " category 1 below 1.00");
      }
      if (m == "leaky" && row.strategy == sb::to_string(sb::PromptStrategy::MaskedInjection)) {
        std::size_t n = row.counts.count(sb::ErrorCategory::KGUriLeak)
                            ? row.counts.at(sb::ErrorCategory::KGUriLeak)
                            : 0;
        leak_freq = sb::format_ratio(n, row.total);
        if (leak_freq != "1.00") notes.fail("leaky masked category 4 = " + leak_freq);
      }
    }
    if (m == "leaky" && leak_freq == "n/a") notes.fail("leaky: no masked group");
    d << (d.tellp() > 0 ? "; " : "") << m << ": " << g.trials << " trials in " << g.seconds << " s";
    if (m == "leaky") d << ", masked category 4 = " << leak_freq;
    g_grids.push_back(std::move(g));
  }
  return {notes.failures == 0, d.str() + notes.summary()};
}

Outcome invariant_sweep() {
  Notes notes;
  std::size_t groups = 0;
  if (g_grids.empty()) return {false, "no stored runs (end-to-end criterion did not run)"};
  for (const auto& g : g_grids) {
    for (const auto& r : sb::compute_all_metrics(sb::RunStore(g.dir).load_records())) {
      ++groups;
      if (!(r.correct <= r.valid && r.valid <= r.total && r.p <= r.p_val)) {
        notes.fail(g.dir.filename().string() + " group invariant");
      }
    }
    std::string before = sb::util::read_file(g.dir / "records.jsonl");
    sb::cmd_score(g.dir);
    if (sb::util::read_file(g.dir / "records.jsonl") != before) {
      notes.fail(g.dir.filename().string() + " score not idempotent");
    }
  }
  std::ostringstream d;
  d << groups << " groups over " << g_grids.size() << " stored runs, score re-run byte-identical"
    << notes.summary();
  return {notes.failures == 0, d.str()};
}

}  // namespace

int main() {
  sb::util::set_log_level(sb::util::LogLevel::Warn);
  fs::path scratch = fs::temp_directory_path() /
                     ("sparqlbench-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  int failed = 0;
  failed += run_criterion(1, "metric oracle against published counts", 1, metric_oracle);
  failed += run_criterion(2, "prompt goldens", 1, prompt_goldens);
  failed += run_criterion(3, "masking round trip", 5, masking_round_trip);
  failed += run_criterion(4, "masked-prompt hygiene", 5, [&] { return masked_hygiene(scratch); });
  failed += run_criterion(5, "validator on gold", 10, validator_on_gold);
  failed += run_criterion(6, "comparator properties", 5, comparator_properties);
  failed += run_criterion(7, "classifier fixtures", 5, classifier_fixtures);
  failed += run_criterion(8, "end to end with mock models", 180, [&] { return end_to_end(scratch); });
  failed += run_criterion(9, "invariant sweep on stored runs", 60, invariant_sweep);

  fs::remove_all(scratch);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
