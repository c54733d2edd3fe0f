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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sparqlbench/errors.h"
#include "sparqlbench/metrics_report.h"

namespace sparqlbench {
namespace {

GroupKey key(const std::string& model, PromptStrategy s, const std::string& ds) {
  return {model, s, ds};
}

TEST(FormatRatio, HalfUpOnExactIntegers) {
  EXPECT_EQ(format_ratio(447, 471), "0.95");
  EXPECT_EQ(format_ratio(30, 471), "0.06");
  EXPECT_EQ(format_ratio(135, 155), "0.87");
  EXPECT_EQ(format_ratio(1, 155), "0.01");
  EXPECT_EQ(format_ratio(1, 200), "0.01");  // 0.005 rounds up
  EXPECT_EQ(format_ratio(1, 8), "0.13");    // 0.125 rounds up
  EXPECT_EQ(format_ratio(0, 155), "0.00");
  EXPECT_EQ(format_ratio(5, 5), "1.00");
  EXPECT_EQ(format_ratio(0, 0), "n/a");
}

TEST(MakeReport, Ratios) {
  auto r = make_report(key("m", PromptStrategy::ZeroShot, "q"), 471, 447, 30);
  EXPECT_NEAR(r.p_val, 447.0 / 471.0, 1e-12);
  EXPECT_NEAR(r.p, 30.0 / 471.0, 1e-12);
  auto e = make_report(key("m", PromptStrategy::ZeroShot, "q"), 0, 0, 0);
  EXPECT_TRUE(e.empty());
  EXPECT_EQ(e.p, 0.0);
  EXPECT_EQ(e.p_val, 0.0);
}

std::vector<GenerationRecord> sample_records() {
  std::vector<GenerationRecord> recs;
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    GenerationRecord r;
    r.item_id = std::to_string(i % 20);
    r.model = i % 3 == 0 ? "a" : "b";
    r.strategy = all_strategies()[i % 3];
    r.dataset = i < 20 ? "qald" : "mcwq";
    r.scored = true;
    r.extracted_query = "ASK {}";
    r.validation.syntactically_valid = rng() % 4 != 0;
    r.validation.executable = r.validation.syntactically_valid && rng() % 5 != 0;
    r.correct = r.validation.executable && rng() % 2 == 0;
    recs.push_back(r);
  }
  return recs;
}

TEST(ComputeMetrics, FoldIsPermutationInvariantAndOrdered) {
  auto recs = sample_records();
  auto reports = compute_all_metrics(recs);
  std::size_t total = 0;
  for (const auto& r : reports) {
    EXPECT_LE(r.correct, r.valid);
    EXPECT_LE(r.valid, r.total);
    EXPECT_LE(r.p, r.p_val);
    total += r.total;
    auto shuffled = recs;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(9));
    EXPECT_EQ(compute_metrics(shuffled, r.group), r);
  }
  EXPECT_EQ(total, recs.size());
}

TEST(ComputeMetrics, InvalidButCorrectFlagIsNotCounted) {
  GenerationRecord r;
  r.model = "m";
  r.dataset = "d";
  r.correct = true;  // inconsistent input; valid gate wins
  auto rep = compute_metrics({r}, key("m", PromptStrategy::ZeroShot, "d"));
  EXPECT_EQ(rep.total, 1u);
  EXPECT_EQ(rep.valid, 0u);
  EXPECT_EQ(rep.correct, 0u);
}

TEST(RenderReport, MarkdownRowShowsRoundedValues) {
  std::vector<MetricsReport> reps = {
      make_report(key("Mistral-Large", PromptStrategy::ZeroShot, "QALD-9-plus"), 471, 447, 30)};
  std::string md = render_report(reps, {}, ReportFormat::Markdown);
  auto row_start = md.find("| Mistral-Large |");
  ASSERT_NE(row_start, std::string::npos);
  std::string row = md.substr(row_start, md.find('\n', row_start) - row_start);
  EXPECT_NE(row.find("| 471 | 447 | 30 | 0.95 | 0.06 |"), std::string::npos) << row;
  EXPECT_NE(md.find("P = R = F1"), std::string::npos);
  EXPECT_EQ(render_report(reps, {}, ReportFormat::Markdown), md);
}

TEST(RenderReport, CsvRoundTrip) {
  auto reports = compute_all_metrics(sample_records());
  std::string csv = render_report(reports, {}, ReportFormat::Csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,strategy,dataset,total,valid,correct,p_val,p");
  auto back = parse_report_csv(csv);
  ASSERT_EQ(back.size(), reports.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], reports[i]);
}

TEST(RenderReport, JsonOfEmptyRun) {
  auto doc = nlohmann::json::parse(render_report({}, {}, ReportFormat::Json));
  EXPECT_TRUE(doc["groups"].is_array());
  EXPECT_TRUE(doc["groups"].empty());
}

TEST(RenderReport, JsonKeepsRawCounts) {
  auto rep = make_report(key("m", PromptStrategy::MaskedInjection, "d"), 460, 426, 212);
  auto doc = nlohmann::json::parse(render_report({rep}, {}, ReportFormat::Json));
  EXPECT_EQ(MetricsReport::from_json(doc["groups"][0]), rep);
}

TEST(RenderReport, EmptyGroupRendersNa) {
  auto rep = make_report(key("m", PromptStrategy::ZeroShot, "d"), 0, 0, 0);
  EXPECT_NE(render_report({rep}, {}, ReportFormat::Markdown).find("n/a"), std::string::npos);
}

TEST(ReportFormat, Names) {
  EXPECT_EQ(parse_report_format("markdown"), ReportFormat::Markdown);
  EXPECT_EQ(parse_report_format("CSV"), ReportFormat::Csv);
  EXPECT_THROW(parse_report_format("xml"), ConfigError);
}

}  // namespace
}  // namespace sparqlbench
