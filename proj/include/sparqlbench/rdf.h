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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sparqlbench {

inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kXsdString =
    "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kRdfLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
// Namespace bound to `kg:` when a masked-form query has to be parsed.
inline constexpr std::string_view kMaskNamespace = "http://example.org/kg/";

enum class TermType { Iri, Literal, BlankNode };

struct RdfTerm {
  TermType type = TermType::Iri;
  std::string value;
  std::string datatype;  // literals only; empty for plain literals
  std::string lang;      // literals only

  static RdfTerm iri(std::string v) { return {TermType::Iri, std::move(v), {}, {}}; }
  static RdfTerm literal(std::string v, std::string datatype = {},
                         std::string lang = {}) {
    return {TermType::Literal, std::move(v), std::move(datatype),
            std::move(lang)};
  }

  auto operator<=>(const RdfTerm&) const = default;
};

std::string to_string(const RdfTerm& term);

// Prefix -> namespace IRI. Prefixes are stored without the trailing colon.
class PrefixMap {
 public:
  PrefixMap() = default;
  PrefixMap(std::initializer_list<std::pair<const std::string, std::string>> init)
      : map_(init) {}

  void set(std::string prefix, std::string ns) { map_[std::move(prefix)] = std::move(ns); }
  std::optional<std::string> ns(std::string_view prefix) const;
  bool contains(std::string_view prefix) const { return ns(prefix).has_value(); }

  // "wd:Q1" -> full IRI; nullopt when the text is not a known prefixed name.
  std::optional<std::string> expand(std::string_view prefixed) const;
  // Full IRI -> "prefix:local" using the longest matching namespace.
  std::optional<std::string> compact(std::string_view iri) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return map_; }

 private:
  std::map<std::string, std::string, std::less<>> map_;
};

// Prefixes the public Wikidata endpoint predeclares.
const PrefixMap& wikidata_prefixes();
// wikidata_prefixes() plus kg: bound to kMaskNamespace.
const PrefixMap& validation_prefixes();

enum class TermKind { Entity, Property };

// The knowledge-graph namespaces whose IRIs count as KG terms.
struct KgNamespace {
  std::string prefix;
  std::string iri;
  TermKind kind;
};

struct KgConfig {
  std::vector<KgNamespace> namespaces;
  // Namespace holding the entity that carries a property's label.
  std::string label_entity_prefix = "wd";
  std::string name = "Wikidata";

  static KgConfig wikidata();

  const KgNamespace* find_prefix(std::string_view prefix) const;
  // Longest namespace that `iri` starts with.
  const KgNamespace* find_iri(std::string_view iri) const;
  PrefixMap prefix_map() const;
  // Full IRI of the entity carrying the label of `prefixed`, e.g.
  // "wdt:P178" -> "http://www.wikidata.org/entity/P178".
  std::optional<std::string> label_iri(std::string_view prefixed) const;
};

enum class AnswerKind { Resources, Literals, Boolean };

std::string_view to_string(AnswerKind kind);

class AnswerSet {
 public:
  AnswerSet() = default;
  static AnswerSet boolean(bool value);
  // Kind is Resources when every value is an IRI or blank node.
  static AnswerSet terms(const std::vector<RdfTerm>& values);

  AnswerKind kind() const { return kind_; }
  const std::set<RdfTerm>& values() const { return values_; }
  std::optional<bool> truth() const { return truth_; }
  // A boolean answer is never empty.
  bool empty() const { return kind_ != AnswerKind::Boolean && values_.empty(); }

  bool operator==(const AnswerSet&) const = default;

 private:
  AnswerKind kind_ = AnswerKind::Resources;
  std::set<RdfTerm> values_;
  std::optional<bool> truth_;
};

// Decoded SPARQL 1.1 Query Results JSON document.
struct SparqlResults {
  bool is_boolean = false;
  bool boolean_value = false;
  std::vector<std::string> vars;
  std::vector<std::map<std::string, RdfTerm>> rows;

  // Throws SchemaError on malformed documents.
  static SparqlResults from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
  // All bound values across all rows and variables.
  AnswerSet flatten() const;
};

nlohmann::json answer_to_results_json(const AnswerSet& answer);
AnswerSet answer_from_results_json(const nlohmann::json& doc);

bool is_numeric_datatype(std::string_view datatype_iri);
// Exact canonical decimal form of an xsd numeric lexical value ("+042.50" ->
// "42.5", "1.5E3" -> "1500"). nullopt for non-numeric text, NaN or INF.
std::optional<std::string> canonical_decimal(std::string_view lexical);

// Comparison form of a term: prefixed IRIs expanded, xsd:string folded into
// plain literals, numerics canonicalized, language tags lower-cased.
RdfTerm normalize_term(const RdfTerm& term, const PrefixMap& prefixes);

}  // namespace sparqlbench
