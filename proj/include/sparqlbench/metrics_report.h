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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/error_taxonomy.h"
#include "sparqlbench/record.h"

namespace sparqlbench {

struct GroupKey {
  std::string model;
  PromptStrategy strategy = PromptStrategy::ZeroShot;
  std::string dataset;

  bool operator==(const GroupKey&) const = default;
};

struct MetricsReport {
  GroupKey group;
  std::size_t total = 0;
  std::size_t valid = 0;
  std::size_t correct = 0;
  double p_val = 0;  // valid / total, 0 when total == 0
  double p = 0;      // correct / total; equals recall and F1 here

  bool empty() const { return total == 0; }
  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
  bool operator==(const MetricsReport&) const = default;
};

// Builds a report from raw counts.
MetricsReport make_report(GroupKey group, std::size_t total, std::size_t valid,
                          std::size_t correct);

// Folds the records that belong to `group` (others are ignored).
MetricsReport compute_metrics(const std::vector<GenerationRecord>& records,
                              const GroupKey& group);

// One report per (model, strategy, dataset) present, in first-occurrence
// order.
std::vector<MetricsReport> compute_all_metrics(const std::vector<GenerationRecord>& records);

// n/d rounded half-up to two decimals, computed exactly on integers.
// "n/a" when d == 0.
std::string format_ratio(std::size_t n, std::size_t d);

enum class ReportFormat { Markdown, Csv, Json };

// Throws ConfigError.
ReportFormat parse_report_format(std::string_view name);

// Markdown: per dataset, one row per model with a five-column block per
// strategy, then error-category frequency tables. CSV: one row per group.
// JSON: lossless, including raw counts and per-strategy frequencies.
std::string render_report(const std::vector<MetricsReport>& reports,
                          const std::vector<CategoryFrequencyRow>& frequencies,
                          ReportFormat format);

// errors.csv: one row per frequency row, counts and rounded frequencies.
std::string render_error_csv(const std::vector<CategoryFrequencyRow>& frequencies);

// Reads the CSV form back (rounded metrics are recomputed from the counts).
std::vector<MetricsReport> parse_report_csv(std::string_view csv);

}  // namespace sparqlbench
