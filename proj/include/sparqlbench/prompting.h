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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparqlbench/dataset.h"
#include "sparqlbench/gold_analysis.h"
#include "sparqlbench/rdf.h"

namespace sparqlbench {

enum class PromptStrategy { ZeroShot, KnowledgeInjection, MaskedInjection };

std::string_view to_string(PromptStrategy strategy);
// Accepts "zero_shot", "knowledge_injection", "masked_injection" (also with
// dashes, case-insensitive). Throws ConfigError.
PromptStrategy parse_strategy(std::string_view name);
const std::vector<PromptStrategy>& all_strategies();
bool uses_injection(PromptStrategy strategy);

inline constexpr std::uint64_t kMaskMin = 1000;
inline constexpr std::uint64_t kMaskMax = 999999;

// Original prefixed term <-> kg:<n>, in binding order.
struct MaskMapping {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> pairs;  // (original, masked)

  std::optional<std::string> masked_for(std::string_view original) const;
  std::optional<std::string> original_for(std::string_view masked) const;
  // Both directions injective and every token is kg:<n> with n in range.
  bool is_valid_bijection() const;

  nlohmann::json to_json() const;
  static MaskMapping from_json(const nlohmann::json& j);
  bool operator==(const MaskMapping&) const = default;
};

struct MaskedBindings {
  std::vector<TermBinding> bindings;
  MaskMapping mapping;
};

// Replaces each distinct term with kg:<n>, n drawn without replacement from
// [kMaskMin, kMaskMax] by a generator seeded with `seed`. Labels are kept.
MaskedBindings mask_terms(const std::vector<TermBinding>& bindings,
                          std::uint64_t seed);

// Rewrites prefixed names that appear in the mapping to their masked tokens.
// Strings, comments and full IRIs are left alone.
std::string mask_rewrite(std::string_view query, const MaskMapping& mapping);

struct UnmaskResult {
  std::string query;
  std::vector<std::string> unknown_tokens;  // masked tokens absent from the mapping
};

// Replaces kg:<n> and <http://example.org/kg/<n>> tokens by their originals.
UnmaskResult unmask_query(std::string_view query, const MaskMapping& mapping);

struct PromptTemplates {
  std::string zero_shot;
  std::string knowledge_injection;
  std::string masked_injection;

  static const PromptTemplates& builtin();
  // Reads zero_shot.txt, knowledge_injection.txt, masked_injection.txt.
  static PromptTemplates load(const std::filesystem::path& dir);
  const std::string& get(PromptStrategy strategy) const;
};

struct PromptText {
  std::string body;
  PromptStrategy strategy = PromptStrategy::ZeroShot;
  std::string item_id;
  std::optional<MaskMapping> mapping;
};

// Instantiates the strategy's template. Injection variants list the
// bindings entities first; the masked variant masks them with `seed`.
// Throws EmptyBindings for an injection strategy without bindings.
PromptText build_prompt(const BenchmarkItem& item, PromptStrategy strategy,
                        const std::vector<TermBinding>& bindings,
                        std::uint64_t seed,
                        const PromptTemplates& templates = PromptTemplates::builtin());

// Masked variant with a caller-supplied mapping (e.g. one restored from disk).
PromptText build_prompt(const BenchmarkItem& item,
                        const std::vector<TermBinding>& bindings,
                        const MaskMapping& mapping,
                        const PromptTemplates& templates = PromptTemplates::builtin());

// Substrings in a masked prompt that reveal the underlying KG.
std::vector<std::string> prompt_hygiene_violations(
    std::string_view body, const KgConfig& kg = KgConfig::wikidata());

}  // namespace sparqlbench
