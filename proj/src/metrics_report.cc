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

#include "sparqlbench/metrics_report.h"

#include <map>
#include <sstream>

#include "sparqlbench/errors.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

using nlohmann::json;

json MetricsReport::to_json() const {
  return {{"model", group.model},
          {"strategy", to_string(group.strategy)},
          {"dataset", group.dataset},
          {"total", total},
          {"valid", valid},
          {"correct", correct},
          {"p_val", p_val},
          {"p", p}};
}

MetricsReport MetricsReport::from_json(const json& j) {
  return make_report(GroupKey{j.at("model").get<std::string>(),
                              parse_strategy(j.at("strategy").get<std::string>()),
                              j.at("dataset").get<std::string>()},
                     j.at("total").get<std::size_t>(), j.at("valid").get<std::size_t>(),
                     j.at("correct").get<std::size_t>());
}

MetricsReport make_report(GroupKey group, std::size_t total, std::size_t valid,
                          std::size_t correct) {
  MetricsReport r;
  r.group = std::move(group);
  r.total = total;
  r.valid = valid;
  r.correct = correct;
  if (total > 0) {
    r.p_val = static_cast<double>(valid) / static_cast<double>(total);
    r.p = static_cast<double>(correct) / static_cast<double>(total);
  }
  return r;
}

namespace {

bool in_group(const GenerationRecord& r, const GroupKey& g) {
  return r.model == g.model && r.strategy == g.strategy && r.dataset == g.dataset;
}

bool is_valid(const GenerationRecord& r) {
  return r.extracted_query && r.validation.syntactically_valid && r.validation.executable;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<GenerationRecord>& records,
                              const GroupKey& group) {
  std::size_t total = 0, valid = 0, correct = 0;
  for (const auto& r : records) {
    if (!in_group(r, group)) continue;
    ++total;
    if (is_valid(r)) {
      ++valid;
      if (r.correct) ++correct;
    }
  }
  return make_report(group, total, valid, correct);
}

std::vector<MetricsReport> compute_all_metrics(const std::vector<GenerationRecord>& records) {
  std::vector<GroupKey> order;
  std::map<std::string, std::size_t> seen;
  for (const auto& r : records) {
    std::string k = r.dataset + "\x1f" + r.model + "\x1f" + std::string(to_string(r.strategy));
    if (seen.emplace(k, order.size()).second) order.push_back({r.model, r.strategy, r.dataset});
  }
  std::vector<MetricsReport> out;
  for (const auto& g : order) out.push_back(compute_metrics(records, g));
  return out;
}

std::string format_ratio(std::size_t n, std::size_t d) {
  if (d == 0) return "n/a";
  // hundredths, rounded half-up: floor((200n + d) / 2d)
  unsigned long long h = (200ULL * n + d) / (2ULL * d);
  std::string frac = std::to_string(h % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(h / 100) + "." + frac;
}

ReportFormat parse_report_format(std::string_view name) {
  std::string n = util::to_lower_ascii(util::trim(name));
  if (n == "markdown" || n == "md") return ReportFormat::Markdown;
  if (n == "csv") return ReportFormat::Csv;
  if (n == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

namespace {

std::string strategy_title(PromptStrategy s) {
  switch (s) {
    case PromptStrategy::ZeroShot: return "Zero-shot";
    case PromptStrategy::KnowledgeInjection: return "Knowledge injection";
    case PromptStrategy::MaskedInjection: return "Masked injection";
  }
  return "";
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  for (const auto& y : v) {
    if (y == x) return;
  }
  v.push_back(x);
}

std::string frequency_cell(const CategoryFrequencyRow* row, ErrorCategory c) {
  if (!row) return "";
  auto f = row->frequency(c);
  if (!f) return "n/a";
  return format_ratio(row->counts.at(c), row->total);
}

void render_frequency_table(std::ostringstream& out,
                            const std::vector<CategoryFrequencyRow>& rows,
                            const std::string& strategy) {
  std::vector<std::string> datasets, models;
  std::map<std::string, const CategoryFrequencyRow*> cells;
  for (const auto& r : rows) {
    if (r.strategy != strategy) continue;
    push_unique(datasets, r.dataset);
    push_unique(models, r.model);
    cells[r.model + "\x1f" + r.dataset] = &r;
  }
  if (models.empty()) return;
  out << "| Model |";
  for (const auto& d : datasets) {
    for (auto c : kAllCategories) out << " " << d << " " << static_cast<int>(c) << " |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < datasets.size() * 4; ++i) out << "---:|";
  out << "\n";
  for (const auto& m : models) {
    out << "| " << m << " |";
    for (const auto& d : datasets) {
      auto it = cells.find(m + "\x1f" + d);
      const CategoryFrequencyRow* row = it == cells.end() ? nullptr : it->second;
      for (auto c : kAllCategories) out << " " << frequency_cell(row, c) << " |";
    }
    out << "\n";
  }
  out << "\n";
}

std::string render_markdown(const std::vector<MetricsReport>& reports,
                            const std::vector<CategoryFrequencyRow>& frequencies) {
  std::ostringstream out;
  out << "# Experimental results\n\n";
  std::vector<std::string> datasets;
  for (const auto& r : reports) push_unique(datasets, r.group.dataset);
  for (const auto& dataset : datasets) {
    std::vector<std::string> models;
    std::vector<PromptStrategy> strategies;
    std::map<std::string, const MetricsReport*> cells;
    for (const auto& r : reports) {
      if (r.group.dataset != dataset) continue;
      push_unique(models, r.group.model);
      push_unique(strategies, r.group.strategy);
      cells[r.group.model + "\x1f" + std::string(to_string(r.group.strategy))] = &r;
    }
    // Table columns follow the fixed strategy order.
    std::vector<PromptStrategy> ordered;
    for (auto s : all_strategies()) {
      for (auto t : strategies) {
        if (s == t) ordered.push_back(s);
      }
    }
    out << "## " << dataset << "\n\n| Model |";
    for (auto s : ordered) {
      std::string t = strategy_title(s);
      out << " " << t << ": Total records | " << t << ": Valid queries | " << t
          << ": Correct | " << t << ": P_val | " << t << ": P = R = F1 |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < ordered.size() * 5; ++i) out << "---:|";
    out << "\n";
    for (const auto& m : models) {
      out << "| " << m << " |";
      for (auto s : ordered) {
        auto it = cells.find(m + "\x1f" + std::string(to_string(s)));
        if (it == cells.end()) {
          out << " | | | | |";
          continue;
        }
        const MetricsReport& r = *it->second;
        out << " " << r.total << " | " << r.valid << " | " << r.correct << " | "
            << format_ratio(r.valid, r.total) << " | " << format_ratio(r.correct, r.total)
            << " |";
      }
      out << "\n";
    }
    out << "\n";
  }
  if (!frequencies.empty()) {
    out << "# Error categories\n\n"
        << "Relative frequency of trials per category; a trial may fall into "
           "several categories. 1 = invalid format or query, 2 = empty answer, "
           "3 = incorrect set of entities, 4 = KG URI in a masked-run query.\n\n"
        << "## All strategies\n\n";
    render_frequency_table(out, frequencies, std::string(kAllStrategies));
    for (auto s : all_strategies()) {
      bool any = false;
      for (const auto& r : frequencies) any = any || r.strategy == to_string(s);
      if (!any) continue;
      out << "## " << strategy_title(s) << "\n\n";
      render_frequency_table(out, frequencies, std::string(to_string(s)));
    }
  }
  std::string text = out.str();
  while (text.size() >= 2 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n') {
    text.pop_back();
  }
  return text;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const std::vector<MetricsReport>& reports) {
  std::ostringstream out;
  out << "model,strategy,dataset,total,valid,correct,p_val,p\n";
  for (const auto& r : reports) {
    out << csv_field(r.group.model) << ',' << to_string(r.group.strategy) << ','
        << csv_field(r.group.dataset) << ',' << r.total << ',' << r.valid << ','
        << r.correct << ',' << format_ratio(r.valid, r.total) << ','
        << format_ratio(r.correct, r.total) << '\n';
  }
  return out.str();
}

std::string render_json(const std::vector<MetricsReport>& reports,
                        const std::vector<CategoryFrequencyRow>& frequencies) {
  json groups = json::array();
  for (const auto& r : reports) groups.push_back(r.to_json());
  json freqs = json::array();
  for (const auto& f : frequencies) {
    json counts = json::object(), values = json::object();
    for (auto c : kAllCategories) {
      std::string k = std::to_string(static_cast<int>(c));
      counts[k] = f.counts.count(c) ? f.counts.at(c) : 0;
      auto v = f.frequency(c);
      values[k] = v ? json(*v) : json(nullptr);
    }
    freqs.push_back({{"model", f.model},
                     {"dataset", f.dataset},
                     {"strategy", f.strategy},
                     {"total", f.total},
                     {"counts", counts},
                     {"frequencies", values}});
  }
  return json{{"groups", groups}, {"error_frequencies", freqs}}.dump(2) + "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace

std::string render_report(const std::vector<MetricsReport>& reports,
                          const std::vector<CategoryFrequencyRow>& frequencies,
                          ReportFormat format) {
  switch (format) {
    case ReportFormat::Markdown: return render_markdown(reports, frequencies);
    case ReportFormat::Csv: return render_csv(reports);
    case ReportFormat::Json: return render_json(reports, frequencies);
  }
  return {};
}

std::string render_error_csv(const std::vector<CategoryFrequencyRow>& frequencies) {
  std::ostringstream out;
  out << "model,dataset,strategy,total,count_1,count_2,count_3,count_4,"
         "freq_1,freq_2,freq_3,freq_4\n";
  for (const auto& f : frequencies) {
    out << csv_field(f.model) << ',' << csv_field(f.dataset) << ',' << f.strategy << ','
        << f.total;
    for (auto c : kAllCategories) out << ',' << (f.counts.count(c) ? f.counts.at(c) : 0);
    for (auto c : kAllCategories) {
      out << ',' << format_ratio(f.counts.count(c) ? f.counts.at(c) : 0, f.total);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<MetricsReport> parse_report_csv(std::string_view csv) {
  std::vector<MetricsReport> out;
  auto lines = util::split_lines(csv);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    auto f = split_csv_line(lines[i]);
    if (f.size() != 8) throw SchemaError("report CSV row " + std::to_string(i + 1) +
                                         " has " + std::to_string(f.size()) + " fields");
    try {
      out.push_back(make_report(GroupKey{f[0], parse_strategy(f[1]), f[2]}, std::stoull(f[3]),
                                std::stoull(f[4]), std::stoull(f[5])));
    } catch (const std::logic_error& e) {
      throw SchemaError("report CSV row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sparqlbench
