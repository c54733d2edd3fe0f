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

#include "sparqlbench/dataset.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "sparqlbench/errors.h"
#include "sparqlbench/sparql/parser.h"
#include "sparqlbench/util/io.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

using nlohmann::json;

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::QALD9Plus:
      return "QALD9Plus";
    case DatasetKind::MCWQ:
      return "MCWQ";
    case DatasetKind::Custom:
      return "Custom";
  }
  return "Custom";
}

std::string_view to_string(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::QaldJson:
      return "qald_json";
    case DatasetFormat::Mcwq:
      return "mcwq";
    case DatasetFormat::GenericJsonl:
      return "generic_jsonl";
  }
  return "generic_jsonl";
}

DatasetFormat parse_dataset_format(std::string_view name) {
  std::string n = util::to_lower_ascii(name);
  if (n == "qald_json" || n == "qald") return DatasetFormat::QaldJson;
  if (n == "mcwq") return DatasetFormat::Mcwq;
  if (n == "generic_jsonl" || n == "jsonl") return DatasetFormat::GenericJsonl;
  throw ConfigError("unknown dataset format: " + std::string(name));
}

DatasetKind kind_for(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::QaldJson:
      return DatasetKind::QALD9Plus;
    case DatasetFormat::Mcwq:
      return DatasetKind::MCWQ;
    case DatasetFormat::GenericJsonl:
      return DatasetKind::Custom;
  }
  return DatasetKind::Custom;
}

namespace {

std::string id_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number_unsigned()) return std::to_string(j.get<unsigned long long>());
  throw SchemaError("item id must be a string or integer");
}

// Union of several SPARQL-results documents; a boolean document wins.
AnswerSet decode_answers(const json& answers, const std::string& where) {
  try {
    if (answers.is_null()) return AnswerSet::terms({});
    if (answers.is_object()) return answer_from_results_json(answers);
    if (!answers.is_array()) throw SchemaError("answers must be an array or object");
    std::vector<RdfTerm> values;
    for (const auto& doc : answers) {
      SparqlResults r = SparqlResults::from_json(doc);
      if (r.is_boolean) return AnswerSet::boolean(r.boolean_value);
      AnswerSet flat = r.flatten();
      values.insert(values.end(), flat.values().begin(), flat.values().end());
    }
    return AnswerSet::terms(values);
  } catch (const SchemaError& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

std::vector<BenchmarkItem> parse_qald(const json& doc, std::string_view source) {
  if (!doc.is_object() || !doc.contains("questions") || !doc["questions"].is_array()) {
    throw SchemaError(std::string(source) + ": expected an object with a questions array");
  }
  std::vector<BenchmarkItem> items;
  std::size_t index = 0;
  for (const auto& q : doc["questions"]) {
    std::string where = std::string(source) + ": questions[" + std::to_string(index++) + "]";
    if (!q.is_object()) throw SchemaError(where + " is not an object");
    BenchmarkItem item;
    item.dataset = DatasetKind::QALD9Plus;
    if (!q.contains("id")) throw SchemaError(where + " has no id");
    item.id = id_string(q["id"]);
    if (!q.contains("question") || !q["question"].is_array()) {
      throw SchemaError(where + " has no question array");
    }
    bool found = false;
    for (const auto& text : q["question"]) {
      if (text.is_object() && text.value("language", "") == "en" &&
          text.contains("string") && text["string"].is_string()) {
        item.question = util::nfc(text["string"].get<std::string>());
        found = true;
        break;
      }
    }
    if (!found) {
      throw MissingLanguageError(where + " (id " + item.id + ") has no English question");
    }
    if (q.contains("query") && q["query"].is_object() && q["query"].contains("sparql") &&
        q["query"]["sparql"].is_string()) {
      item.gold_query = q["query"]["sparql"].get<std::string>();
    }
    item.gold_answer = decode_answers(q.value("answers", json()), where);
    items.push_back(std::move(item));
  }
  return items;
}

std::string strip_brackets(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != '[' && c != ']') out += c;
  }
  return out;
}

std::string instantiate(std::string pattern, const json& mapping) {
  if (!mapping.is_object()) return pattern;
  // Replace longer placeholders first so M10 is not clobbered by M1.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [k, v] : mapping.items()) {
    if (v.is_string()) pairs.emplace_back(k, v.get<std::string>());
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
  for (const auto& [placeholder, value] : pairs) {
    std::size_t pos = 0;
    while ((pos = pattern.find(placeholder, pos)) != std::string::npos) {
      pattern.replace(pos, placeholder.size(), value);
      pos += value.size();
    }
  }
  return pattern;
}

std::vector<BenchmarkItem> parse_mcwq(const json& doc, std::string_view source) {
  const json* rows = nullptr;
  const json* test_idxs = nullptr;
  if (doc.is_array()) {
    rows = &doc;
  } else if (doc.is_object()) {
    for (const char* key : {"rows", "dataset", "questions"}) {
      if (doc.contains(key) && doc[key].is_array()) {
        rows = &doc[key];
        break;
      }
    }
    if (doc.contains("testIdxs")) test_idxs = &doc["testIdxs"];
    if (doc.contains("split") && doc["split"].is_object() &&
        doc["split"].contains("testIdxs")) {
      test_idxs = &doc["split"]["testIdxs"];
    }
  }
  if (!rows) throw SchemaError(std::string(source) + ": expected an MCWQ row array");

  std::vector<std::size_t> selected;
  if (test_idxs) {
    if (!test_idxs->is_array()) throw SchemaError(std::string(source) + ": testIdxs must be an array");
    for (const auto& i : *test_idxs) {
      if (!i.is_number_unsigned() && !i.is_number_integer()) {
        throw SchemaError(std::string(source) + ": testIdxs must hold integers");
      }
      auto idx = i.get<long long>();
      if (idx < 0 || static_cast<std::size_t>(idx) >= rows->size()) {
        throw SchemaError(std::string(source) + ": test index out of range: " + std::to_string(idx));
      }
      selected.push_back(static_cast<std::size_t>(idx));
    }
  } else {
    for (std::size_t i = 0; i < rows->size(); ++i) selected.push_back(i);
  }

  std::vector<BenchmarkItem> items;
  for (std::size_t idx : selected) {
    const json& row = (*rows)[idx];
    std::string where = std::string(source) + ": row " + std::to_string(idx);
    if (!row.is_object()) throw SchemaError(where + " is not an object");
    BenchmarkItem item;
    item.dataset = DatasetKind::MCWQ;
    if (row.contains("id")) {
      item.id = id_string(row["id"]);
    } else if (row.contains("CFQquestionIdx")) {
      item.id = id_string(row["CFQquestionIdx"]);
    } else {
      item.id = std::to_string(idx);
    }

    if (row.contains("questionWithBrackets") && row["questionWithBrackets"].is_string()) {
      item.question = strip_brackets(row["questionWithBrackets"].get<std::string>());
    } else if (row.contains("question") && row["question"].is_string()) {
      item.question = row["question"].get<std::string>();
    } else if (row.contains("questionPatternModEntities") &&
               row["questionPatternModEntities"].is_string()) {
      item.question = instantiate(row["questionPatternModEntities"].get<std::string>(),
                                  row.value("entityLabels", json()));
    } else {
      throw MissingLanguageError(where + " (id " + item.id + ") has no English question");
    }
    item.question = util::nfc(item.question);

    if (row.contains("sparql") && row["sparql"].is_string()) {
      item.gold_query = row["sparql"].get<std::string>();
    } else if (row.contains("sparqlPatternModEntities") &&
               row["sparqlPatternModEntities"].is_string()) {
      item.gold_query = instantiate(row["sparqlPatternModEntities"].get<std::string>(),
                                    row.value("entities", json()));
    } else {
      throw SchemaError(where + " has neither sparql nor sparqlPatternModEntities");
    }

    json answers;
    if (row.contains("answers")) {
      answers = row["answers"];
    } else if (row.contains("expectedResponse")) {
      answers = row["expectedResponse"];
    }
    item.gold_answer = decode_answers(answers, where);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<BenchmarkItem> parse_generic_jsonl(std::string_view content,
                                               std::string_view source) {
  std::vector<BenchmarkItem> items;
  std::size_t line_no = 0;
  for (const auto& line : util::split_lines(content)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    std::string where = std::string(source) + ":" + std::to_string(line_no);
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      throw SchemaError(where + ": " + e.what());
    }
    if (!row.is_object()) throw SchemaError(where + ": expected a JSON object");
    for (const char* key : {"id", "question", "query", "answers"}) {
      if (!row.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
    }
    if (!row["question"].is_string() || !row["query"].is_string()) {
      throw SchemaError(where + ": question and query must be strings");
    }
    BenchmarkItem item;
    item.dataset = DatasetKind::Custom;
    item.id = id_string(row["id"]);
    item.question = util::nfc(row["question"].get<std::string>());
    item.gold_query = row["query"].get<std::string>();
    item.gold_answer = decode_answers(row["answers"], where);
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace

std::vector<BenchmarkItem> parse_dataset(std::string_view content,
                                         DatasetFormat format,
                                         std::string_view source_name) {
  if (format == DatasetFormat::GenericJsonl) {
    return parse_generic_jsonl(content, source_name);
  }
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    throw SchemaError(std::string(source_name) + ": " + e.what());
  }
  if (format == DatasetFormat::QaldJson) return parse_qald(doc, source_name);
  return parse_mcwq(doc, source_name);
}

std::vector<BenchmarkItem> load_dataset(const std::filesystem::path& path,
                                        DatasetFormat format) {
  std::string content = util::read_file(path);
  return parse_dataset(content, format, path.string());
}

std::string serialize_generic_jsonl(const std::vector<BenchmarkItem>& items) {
  std::string out;
  for (const auto& item : items) {
    json row;
    row["id"] = item.id;
    row["question"] = item.question;
    row["query"] = item.gold_query;
    row["answers"] = answer_to_results_json(item.gold_answer);
    out += row.dump();
    out += '\n';
  }
  return out;
}

FilterResult filter_evaluable(const std::vector<BenchmarkItem>& items) {
  FilterResult result;
  std::set<std::string> seen;
  for (const auto& item : items) {
    std::string reason;
    if (!seen.insert(item.id).second) {
      reason = "duplicate id";
    } else if (util::trim(item.question).empty()) {
      reason = "empty question";
    } else if (item.gold_answer.empty()) {
      reason = "empty gold answer";
    } else if (auto err = sparql::check_syntax(item.gold_query, validation_prefixes())) {
      reason = "gold query does not parse: " + std::string(err->what());
    }
    if (reason.empty()) {
      result.retained.push_back(item);
    } else {
      result.dropped.push_back({item.id, std::move(reason)});
    }
  }
  return result;
}

}  // namespace sparqlbench
