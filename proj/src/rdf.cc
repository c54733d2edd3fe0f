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

#include "sparqlbench/rdf.h"

#include <algorithm>
#include <cctype>

#include "sparqlbench/errors.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

std::string to_string(const RdfTerm& term) {
  switch (term.type) {
    case TermType::Iri:
      return "<" + term.value + ">";
    case TermType::BlankNode:
      return "_:" + term.value;
    case TermType::Literal: {
      std::string out = "\"" + term.value + "\"";
      if (!term.lang.empty()) return out + "@" + term.lang;
      if (!term.datatype.empty()) return out + "^^<" + term.datatype + ">";
      return out;
    }
  }
  return term.value;
}

std::optional<std::string> PrefixMap::ns(std::string_view prefix) const {
  auto it = map_.find(prefix);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> PrefixMap::expand(std::string_view prefixed) const {
  auto colon = prefixed.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto base = ns(prefixed.substr(0, colon));
  if (!base) return std::nullopt;
  return *base + std::string(prefixed.substr(colon + 1));
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : map_) {
    if (iri.starts_with(entry.second) &&
        (!best || entry.second.size() > best->second.size())) {
      best = &entry;
    }
  }
  if (!best) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

const PrefixMap& wikidata_prefixes() {
  static const PrefixMap kPrefixes{
      {"wd", "http://www.wikidata.org/entity/"},
      {"wds", "http://www.wikidata.org/entity/statement/"},
      {"wdv", "http://www.wikidata.org/value/"},
      {"wdref", "http://www.wikidata.org/reference/"},
      {"wdt", "http://www.wikidata.org/prop/direct/"},
      {"wdtn", "http://www.wikidata.org/prop/direct-normalized/"},
      {"wdno", "http://www.wikidata.org/prop/novalue/"},
      {"p", "http://www.wikidata.org/prop/"},
      {"ps", "http://www.wikidata.org/prop/statement/"},
      {"psv", "http://www.wikidata.org/prop/statement/value/"},
      {"psn", "http://www.wikidata.org/prop/statement/value-normalized/"},
      {"pq", "http://www.wikidata.org/prop/qualifier/"},
      {"pqv", "http://www.wikidata.org/prop/qualifier/value/"},
      {"pqn", "http://www.wikidata.org/prop/qualifier/value-normalized/"},
      {"pr", "http://www.wikidata.org/prop/reference/"},
      {"prv", "http://www.wikidata.org/prop/reference/value/"},
      {"prov", "http://www.w3.org/ns/prov#"},
      {"wikibase", "http://wikiba.se/ontology#"},
      {"bd", "http://www.bigdata.com/rdf#"},
      {"schema", "http://schema.org/"},
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"owl", "http://www.w3.org/2002/07/owl#"},
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
      {"skos", "http://www.w3.org/2004/02/skos/core#"},
      {"geo", "http://www.opengis.net/ont/geosparql#"},
      {"geof", "http://www.opengis.net/def/geosparql/function/"},
      {"ontolex", "http://www.w3.org/ns/lemon/ontolex#"},
      {"dct", "http://purl.org/dc/terms/"},
  };
  return kPrefixes;
}

const PrefixMap& validation_prefixes() {
  static const PrefixMap kPrefixes = [] {
    PrefixMap m = wikidata_prefixes();
    m.set("kg", std::string(kMaskNamespace));
    return m;
  }();
  return kPrefixes;
}

KgConfig KgConfig::wikidata() {
  KgConfig cfg;
  cfg.namespaces = {
      {"wd", "http://www.wikidata.org/entity/", TermKind::Entity},
      {"wdt", "http://www.wikidata.org/prop/direct/", TermKind::Property},
      {"p", "http://www.wikidata.org/prop/", TermKind::Property},
      {"ps", "http://www.wikidata.org/prop/statement/", TermKind::Property},
      {"pq", "http://www.wikidata.org/prop/qualifier/", TermKind::Property},
  };
  return cfg;
}

const KgNamespace* KgConfig::find_prefix(std::string_view prefix) const {
  for (const auto& ns : namespaces) {
    if (ns.prefix == prefix) return &ns;
  }
  return nullptr;
}

const KgNamespace* KgConfig::find_iri(std::string_view iri) const {
  const KgNamespace* best = nullptr;
  for (const auto& ns : namespaces) {
    if (iri.starts_with(ns.iri) && (!best || ns.iri.size() > best->iri.size())) {
      best = &ns;
    }
  }
  return best;
}

PrefixMap KgConfig::prefix_map() const {
  PrefixMap m;
  for (const auto& ns : namespaces) m.set(ns.prefix, ns.iri);
  return m;
}

std::optional<std::string> KgConfig::label_iri(std::string_view prefixed) const {
  auto colon = prefixed.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const KgNamespace* ns = find_prefix(prefixed.substr(0, colon));
  if (!ns) return std::nullopt;
  std::string local(prefixed.substr(colon + 1));
  if (ns->kind == TermKind::Property) {
    const KgNamespace* entity = find_prefix(label_entity_prefix);
    if (entity) return entity->iri + local;
  }
  return ns->iri + local;
}

std::string_view to_string(AnswerKind kind) {
  switch (kind) {
    case AnswerKind::Resources:
      return "resources";
    case AnswerKind::Literals:
      return "literals";
    case AnswerKind::Boolean:
      return "boolean";
  }
  return "resources";
}

AnswerSet AnswerSet::boolean(bool value) {
  AnswerSet a;
  a.kind_ = AnswerKind::Boolean;
  a.truth_ = value;
  return a;
}

AnswerSet AnswerSet::terms(const std::vector<RdfTerm>& values) {
  AnswerSet a;
  a.values_.insert(values.begin(), values.end());
  bool all_resources = std::all_of(
      values.begin(), values.end(),
      [](const RdfTerm& t) { return t.type != TermType::Literal; });
  a.kind_ = all_resources ? AnswerKind::Resources : AnswerKind::Literals;
  return a;
}

namespace {

RdfTerm term_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.contains("value") ||
      !j["type"].is_string() || !j["value"].is_string()) {
    throw SchemaError("binding value must be an object with type and value");
  }
  const std::string type = j["type"].get<std::string>();
  std::string value = j["value"].get<std::string>();
  if (type == "uri") return RdfTerm::iri(std::move(value));
  if (type == "bnode") return {TermType::BlankNode, std::move(value), {}, {}};
  if (type == "literal" || type == "typed-literal") {
    std::string datatype = j.value("datatype", std::string());
    std::string lang = j.value("xml:lang", std::string());
    return RdfTerm::literal(std::move(value), std::move(datatype),
                            std::move(lang));
  }
  throw SchemaError("unknown binding type: " + type);
}

nlohmann::json term_to_json(const RdfTerm& t) {
  nlohmann::json j;
  switch (t.type) {
    case TermType::Iri:
      j["type"] = "uri";
      break;
    case TermType::BlankNode:
      j["type"] = "bnode";
      break;
    case TermType::Literal:
      j["type"] = "literal";
      if (!t.datatype.empty()) j["datatype"] = t.datatype;
      if (!t.lang.empty()) j["xml:lang"] = t.lang;
      break;
  }
  j["value"] = t.value;
  return j;
}

}  // namespace

SparqlResults SparqlResults::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("results document must be an object");
  SparqlResults out;
  if (doc.contains("boolean")) {
    if (!doc["boolean"].is_boolean()) throw SchemaError("boolean must be a bool");
    out.is_boolean = true;
    out.boolean_value = doc["boolean"].get<bool>();
    return out;
  }
  if (doc.contains("head") && doc["head"].is_object() &&
      doc["head"].contains("vars")) {
    for (const auto& v : doc["head"]["vars"]) {
      if (v.is_string()) out.vars.push_back(v.get<std::string>());
    }
  }
  if (!doc.contains("results") || !doc["results"].is_object() ||
      !doc["results"].contains("bindings") ||
      !doc["results"]["bindings"].is_array()) {
    throw SchemaError("results document has neither boolean nor bindings");
  }
  for (const auto& row : doc["results"]["bindings"]) {
    if (!row.is_object()) throw SchemaError("binding row must be an object");
    std::map<std::string, RdfTerm> decoded;
    for (const auto& [var, value] : row.items()) {
      decoded.emplace(var, term_from_json(value));
    }
    out.rows.push_back(std::move(decoded));
  }
  return out;
}

nlohmann::json SparqlResults::to_json() const {
  nlohmann::json doc;
  if (is_boolean) {
    doc["head"] = nlohmann::json::object();
    doc["boolean"] = boolean_value;
    return doc;
  }
  doc["head"]["vars"] = vars;
  nlohmann::json bindings = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [var, term] : row) r[var] = term_to_json(term);
    bindings.push_back(std::move(r));
  }
  doc["results"]["bindings"] = std::move(bindings);
  return doc;
}

AnswerSet SparqlResults::flatten() const {
  if (is_boolean) return AnswerSet::boolean(boolean_value);
  std::vector<RdfTerm> values;
  for (const auto& row : rows) {
    for (const auto& [var, term] : row) values.push_back(term);
  }
  return AnswerSet::terms(values);
}

nlohmann::json answer_to_results_json(const AnswerSet& answer) {
  SparqlResults r;
  if (answer.kind() == AnswerKind::Boolean) {
    r.is_boolean = true;
    r.boolean_value = answer.truth().value_or(false);
    return r.to_json();
  }
  r.vars = {"value"};
  for (const auto& term : answer.values()) r.rows.push_back({{"value", term}});
  return r.to_json();
}

AnswerSet answer_from_results_json(const nlohmann::json& doc) {
  return SparqlResults::from_json(doc).flatten();
}

bool is_numeric_datatype(std::string_view dt) {
  if (!dt.starts_with(kXsd)) return false;
  static const std::set<std::string, std::less<>> kNumeric = {
      "integer",         "decimal",          "double",
      "float",           "int",              "long",
      "short",           "byte",             "nonNegativeInteger",
      "positiveInteger", "negativeInteger",  "nonPositiveInteger",
      "unsignedLong",    "unsignedInt",      "unsignedShort",
      "unsignedByte"};
  return kNumeric.contains(dt.substr(kXsd.size()));
}

std::optional<std::string> canonical_decimal(std::string_view text) {
  text = util::trim(text);
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long exponent = 0;  // value = digits * 10^exponent
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return std::nullopt;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return std::nullopt;
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i >= text.size()) return std::nullopt;
    long e = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
      if (e < 100000) e = e * 10 + (text[i] - '0');
    }
    exponent += exp_negative ? -e : e;
  }
  auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return "0";
  digits.erase(0, first);
  while (digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
    ++exponent;
  }
  if (digits == "0") return "0";
  std::string out;
  if (exponent >= 0) {
    out = digits + std::string(static_cast<std::size_t>(exponent), '0');
  } else {
    long frac = -exponent;
    if (static_cast<long>(digits.size()) > frac) {
      out = digits.substr(0, digits.size() - frac) + "." +
            digits.substr(digits.size() - frac);
    } else {
      out = "0." + std::string(static_cast<std::size_t>(frac - digits.size()), '0') +
            digits;
    }
  }
  return negative ? "-" + out : out;
}

RdfTerm normalize_term(const RdfTerm& term, const PrefixMap& prefixes) {
  RdfTerm out = term;
  switch (term.type) {
    case TermType::Iri:
      if (term.value.find("://") == std::string::npos &&
          term.value.rfind("urn:", 0) != 0) {
        if (auto full = prefixes.expand(term.value)) out.value = *full;
      }
      break;
    case TermType::BlankNode:
      break;
    case TermType::Literal:
      if (!term.lang.empty()) {
        out.lang = util::to_lower_ascii(term.lang);
        out.datatype.clear();
      } else if (term.datatype == kXsdString) {
        out.datatype.clear();
      } else if (is_numeric_datatype(term.datatype)) {
        if (auto canon = canonical_decimal(term.value)) {
          out.value = *canon;
          out.datatype = std::string(kXsd) + "decimal";
        }
      } else if (!term.datatype.empty() &&
                 term.datatype.find("://") == std::string::npos) {
        if (auto full = prefixes.expand(term.datatype)) out.datatype = *full;
      }
      break;
  }
  return out;
}

}  // namespace sparqlbench
