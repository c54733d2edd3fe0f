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

#include "sparqlbench/prompting.h"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>

#include "sparqlbench/errors.h"
#include "sparqlbench/sparql/lexer.h"
#include "sparqlbench/util/io.h"
#include "sparqlbench/util/text.h"

namespace sparqlbench {

using nlohmann::json;

std::string_view to_string(PromptStrategy strategy) {
  switch (strategy) {
    case PromptStrategy::ZeroShot: return "zero_shot";
    case PromptStrategy::KnowledgeInjection: return "knowledge_injection";
    case PromptStrategy::MaskedInjection: return "masked_injection";
  }
  return "unknown";
}

PromptStrategy parse_strategy(std::string_view name) {
  std::string n = util::to_lower_ascii(util::trim(name));
  std::replace(n.begin(), n.end(), '-', '_');
  for (auto s : all_strategies()) {
    if (n == to_string(s)) return s;
  }
  throw ConfigError("unknown prompt strategy '" + std::string(name) + "'");
}

const std::vector<PromptStrategy>& all_strategies() {
  static const std::vector<PromptStrategy> kAll = {
      PromptStrategy::ZeroShot, PromptStrategy::KnowledgeInjection,
      PromptStrategy::MaskedInjection};
  return kAll;
}

bool uses_injection(PromptStrategy strategy) {
  return strategy != PromptStrategy::ZeroShot;
}

// ---- masking ---------------------------------------------------------------

namespace {

constexpr std::string_view kMaskPrefix = "kg:";

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Uniform draw from [lo, hi] by rejection; independent of the standard
// library's distribution implementation so mappings are portable.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + x % span;
}

}  // namespace

std::optional<std::string> MaskMapping::masked_for(std::string_view original) const {
  for (const auto& [o, m] : pairs) {
    if (o == original) return m;
  }
  return std::nullopt;
}

std::optional<std::string> MaskMapping::original_for(std::string_view masked) const {
  for (const auto& [o, m] : pairs) {
    if (m == masked) return o;
  }
  return std::nullopt;
}

bool MaskMapping::is_valid_bijection() const {
  std::set<std::string> originals, masked;
  for (const auto& [o, m] : pairs) {
    if (!originals.insert(o).second || !masked.insert(m).second) return false;
    if (m.rfind(kMaskPrefix, 0) != 0) return false;
    std::string_view digits = std::string_view(m).substr(kMaskPrefix.size());
    if (!all_digits(digits) || digits.size() > 7 || digits[0] == '0') return false;
    std::uint64_t n = std::stoull(std::string(digits));
    if (n < kMaskMin || n > kMaskMax) return false;
  }
  return true;
}

json MaskMapping::to_json() const {
  json p = json::array();
  for (const auto& [o, m] : pairs) p.push_back({{"original", o}, {"masked", m}});
  return {{"seed", seed}, {"pairs", std::move(p)}};
}

MaskMapping MaskMapping::from_json(const json& j) {
  MaskMapping m;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& p : j.at("pairs")) {
      m.pairs.emplace_back(p.at("original").get<std::string>(),
                           p.at("masked").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed mask mapping: ") + e.what());
  }
  if (!m.is_valid_bijection()) throw SchemaError("mask mapping is not a bijection");
  return m;
}

MaskedBindings mask_terms(const std::vector<TermBinding>& bindings,
                          std::uint64_t seed) {
  MaskedBindings out;
  out.mapping.seed = seed;
  std::mt19937_64 rng(seed);
  std::set<std::uint64_t> used;
  for (const auto& b : bindings) {
    auto existing = out.mapping.masked_for(b.term);
    std::string token;
    if (existing) {
      token = *existing;
    } else {
      std::uint64_t n;
      do {
        n = draw(rng, kMaskMin, kMaskMax);
      } while (!used.insert(n).second);
      token = std::string(kMaskPrefix) + std::to_string(n);
      out.mapping.pairs.emplace_back(b.term, token);
    }
    out.bindings.push_back(TermBinding{token, b.label, b.kind});
  }
  return out;
}

std::string mask_rewrite(std::string_view query, const MaskMapping& mapping) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& tok : sparql::tokenize(query, /*tolerant=*/true)) {
    if (tok.kind != sparql::TokenKind::PnameLn) continue;
    auto masked = mapping.masked_for(tok.text);
    if (!masked) continue;
    out.append(query.substr(pos, tok.offset - pos));
    out += *masked;
    pos = tok.offset + tok.text.size();
  }
  out.append(query.substr(pos));
  return out;
}

UnmaskResult unmask_query(std::string_view query, const MaskMapping& mapping) {
  UnmaskResult result;
  std::set<std::string> reported;
  std::size_t pos = 0;
  for (const auto& tok : sparql::tokenize(query, /*tolerant=*/true)) {
    std::string local;
    if (tok.kind == sparql::TokenKind::PnameLn &&
        tok.text.substr(0, kMaskPrefix.size()) == kMaskPrefix) {
      local = std::string(tok.text.substr(kMaskPrefix.size()));
    } else if (tok.kind == sparql::TokenKind::IriRef &&
               tok.value.rfind(kMaskNamespace, 0) == 0) {
      local = tok.value.substr(kMaskNamespace.size());
    } else {
      continue;
    }
    if (!all_digits(local)) continue;
    std::string masked = std::string(kMaskPrefix) + local;
    auto original = mapping.original_for(masked);
    if (!original) {
      if (reported.insert(masked).second) result.unknown_tokens.push_back(masked);
      continue;
    }
    result.query.append(query.substr(pos, tok.offset - pos));
    result.query += *original;
    pos = tok.offset + tok.text.size();
  }
  result.query.append(query.substr(pos));
  return result;
}

// ---- templates -------------------------------------------------------------

namespace {

constexpr std::string_view kZeroShot =
    "Translate the question \"{question}\" into a SPARQL query\n"
    "using the Wikidata Knowledge Graph.\n"
    "Have the query return only resources.\n"
    "Provide only the generated SPARQL query.\n";

constexpr std::string_view kKnowledgeInjection =
    "Translate the question \"{question}\" into a SPARQL query\n"
    "using the Wikidata Knowledge Graph.\n"
    "Have the query return only resources.\n"
    "Provide only the generated SPARQL query.\n"
    "The possible entities and properties are:\n"
    "{pairs}\n";

constexpr std::string_view kMaskedInjection =
    "Translate the question \"{question}\" into a SPARQL query\n"
    "using a Knowledge Graph.\n"
    "Have the query return only resources.\n"
    "Provide only the generated SPARQL query.\n"
    "The possible entities and properties are:\n"
    "{pairs}\n";

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string render(const std::string& tmpl, std::string_view question,
                   const std::vector<TermBinding>& bindings) {
  std::string pairs;
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (i) pairs += '\n';
    pairs += bindings[i].term + " is " + bindings[i].label;
  }
  if (!pairs.empty()) pairs += '.';
  // {pairs} first so that a question containing "{pairs}" is left verbatim.
  std::string body = tmpl;
  replace_all(body, "{pairs}", pairs);
  replace_all(body, "{question}", question);
  return body;
}

}  // namespace

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates kBuiltin{std::string(kZeroShot),
                                        std::string(kKnowledgeInjection),
                                        std::string(kMaskedInjection)};
  return kBuiltin;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t;
  t.zero_shot = util::read_file(dir / "zero_shot.txt");
  t.knowledge_injection = util::read_file(dir / "knowledge_injection.txt");
  t.masked_injection = util::read_file(dir / "masked_injection.txt");
  return t;
}

const std::string& PromptTemplates::get(PromptStrategy strategy) const {
  switch (strategy) {
    case PromptStrategy::KnowledgeInjection: return knowledge_injection;
    case PromptStrategy::MaskedInjection: return masked_injection;
    case PromptStrategy::ZeroShot: break;
  }
  return zero_shot;
}

PromptText build_prompt(const BenchmarkItem& item, PromptStrategy strategy,
                        const std::vector<TermBinding>& bindings,
                        std::uint64_t seed, const PromptTemplates& templates) {
  if (strategy == PromptStrategy::MaskedInjection) {
    if (bindings.empty()) throw EmptyBindings("item " + item.id + " has no bindings");
    auto ordered = order_for_injection(bindings);
    return build_prompt(item, ordered, mask_terms(ordered, seed).mapping, templates);
  }
  PromptText p;
  p.strategy = strategy;
  p.item_id = item.id;
  if (strategy == PromptStrategy::ZeroShot) {
    p.body = render(templates.zero_shot, item.question, {});
  } else {
    if (bindings.empty()) throw EmptyBindings("item " + item.id + " has no bindings");
    p.body = render(templates.knowledge_injection, item.question,
                    order_for_injection(bindings));
  }
  return p;
}

PromptText build_prompt(const BenchmarkItem& item,
                        const std::vector<TermBinding>& bindings,
                        const MaskMapping& mapping,
                        const PromptTemplates& templates) {
  if (bindings.empty()) throw EmptyBindings("item " + item.id + " has no bindings");
  std::vector<TermBinding> masked;
  for (const auto& b : order_for_injection(bindings)) {
    auto token = mapping.masked_for(b.term);
    if (!token) throw EmptyBindings("mask mapping lacks term " + b.term);
    masked.push_back(TermBinding{*token, b.label, b.kind});
  }
  PromptText p;
  p.strategy = PromptStrategy::MaskedInjection;
  p.item_id = item.id;
  p.mapping = mapping;
  p.body = render(templates.masked_injection, item.question, masked);
  return p;
}

std::vector<std::string> prompt_hygiene_violations(std::string_view body,
                                                   const KgConfig& kg) {
  std::vector<std::string> found;
  if (!kg.name.empty() && body.find(kg.name) != std::string_view::npos) {
    found.push_back(kg.name);
  }
  for (const auto& ns : kg.namespaces) {
    if (body.find(ns.iri) != std::string_view::npos) found.push_back(ns.iri);
    const std::string token = ns.prefix + ":";
    for (std::size_t pos = body.find(token); pos != std::string_view::npos;
         pos = body.find(token, pos + 1)) {
      char before = pos == 0 ? ' ' : body[pos - 1];
      bool boundary = !(std::isalnum(static_cast<unsigned char>(before)) ||
                        before == '_' || before == '-' || before == '.');
      if (boundary) {
        found.push_back(token);
        break;
      }
    }
  }
  return found;
}

}  // namespace sparqlbench
