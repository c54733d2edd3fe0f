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

#include <random>
#include <set>

#include "sparqlbench/errors.h"
#include "sparqlbench/gold_analysis.h"
#include "sparqlbench/prompting.h"
#include "sparqlbench/util/io.h"
#include "support.h"

namespace sparqlbench {
namespace {

using testing::golden;
using testing::skype_item;

std::vector<TermBinding> skype_bindings() {
  return {{"wdt:P178", "developer", TermKind::Property},
          {"wd:Q40984", "Skype", TermKind::Entity}};
}

TEST(Prompting, ZeroShotGolden) {
  PromptText p = build_prompt(skype_item(), PromptStrategy::ZeroShot, {}, 1);
  EXPECT_EQ(p.body, util::read_file(golden("skype_zero_shot.txt")));
  EXPECT_FALSE(p.mapping.has_value());
}

TEST(Prompting, KnowledgeInjectionGolden) {
  PromptText p = build_prompt(skype_item(), PromptStrategy::KnowledgeInjection,
                              skype_bindings(), 1);
  EXPECT_EQ(p.body, util::read_file(golden("skype_knowledge_injection.txt")));
}

TEST(Prompting, MaskedInjectionGoldenWithPinnedMapping) {
  MaskMapping m;
  m.seed = 0;
  m.pairs = {{"wd:Q40984", "kg:6211"}, {"wdt:P178", "kg:1548"}};
  PromptText p = build_prompt(skype_item(), order_for_injection(skype_bindings()), m);
  EXPECT_EQ(p.body, util::read_file(golden("skype_masked_injection.txt")));
  EXPECT_TRUE(prompt_hygiene_violations(p.body).empty());
}

TEST(Prompting, MaskedInjectionSeededMatchesGoldenStructure) {
  PromptText p = build_prompt(skype_item(), PromptStrategy::MaskedInjection,
                              skype_bindings(), 42);
  ASSERT_TRUE(p.mapping.has_value());
  std::string expected = util::read_file(golden("skype_masked_injection.txt"));
  auto replace = [&](const std::string& from, const std::string& to) {
    expected.replace(expected.find(from), from.size(), to);
  };
  replace("kg:6211", *p.mapping->masked_for("wd:Q40984"));
  replace("kg:1548", *p.mapping->masked_for("wdt:P178"));
  EXPECT_EQ(p.body, expected);
}

TEST(Prompting, SeedDeterminesMapping) {
  auto a = mask_terms(skype_bindings(), 7);
  auto b = mask_terms(skype_bindings(), 7);
  auto c = mask_terms(skype_bindings(), 8);
  EXPECT_EQ(a.mapping, b.mapping);
  EXPECT_NE(a.mapping.pairs, c.mapping.pairs);
}

TEST(Prompting, InjectionWithoutBindingsThrows) {
  EXPECT_THROW(build_prompt(skype_item(), PromptStrategy::KnowledgeInjection, {}, 1),
               EmptyBindings);
  EXPECT_THROW(build_prompt(skype_item(), PromptStrategy::MaskedInjection, {}, 1),
               EmptyBindings);
}

TEST(Prompting, BuiltinTemplatesMatchTemplateFiles) {
  PromptTemplates files = PromptTemplates::load(SPARQLBENCH_TEMPLATE_DIR);
  const PromptTemplates& builtin = PromptTemplates::builtin();
  EXPECT_EQ(files.zero_shot, builtin.zero_shot);
  EXPECT_EQ(files.knowledge_injection, builtin.knowledge_injection);
  EXPECT_EQ(files.masked_injection, builtin.masked_injection);
}

TEST(Prompting, StrategyNames) {
  for (auto s : all_strategies()) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_EQ(parse_strategy("Masked-Injection"), PromptStrategy::MaskedInjection);
  EXPECT_THROW(parse_strategy("few_shot"), ConfigError);
}

TEST(Masking, MappingsAreBijectionsInRange) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 20;
    std::vector<TermBinding> b;
    for (std::size_t i = 0; i < n; ++i) {
      b.push_back({"wd:Q" + std::to_string(i + 1), "l", TermKind::Entity});
    }
    auto masked = mask_terms(b, rng());
    EXPECT_TRUE(masked.mapping.is_valid_bijection());
    EXPECT_EQ(masked.mapping.pairs.size(), n);
    for (const auto& [orig, tok] : masked.mapping.pairs) {
      std::uint64_t v = std::stoull(tok.substr(3));
      EXPECT_GE(v, kMaskMin);
      EXPECT_LE(v, kMaskMax);
    }
  }
}

TEST(Masking, DuplicateTermsShareOneToken) {
  std::vector<TermBinding> b = {{"wd:Q1", "x", TermKind::Entity},
                                {"wd:Q1", "x", TermKind::Entity}};
  EXPECT_EQ(mask_terms(b, 1).mapping.pairs.size(), 1u);
}

TEST(Masking, RewriteLeavesStringsCommentsAndIrisAlone) {
  MaskMapping m;
  m.pairs = {{"wd:Q1", "kg:1000"}, {"wdt:P31", "kg:1001"}};
  std::string q =
      "SELECT ?x WHERE { wd:Q1 wdt:P31 ?x . ?x rdfs:label \"wd:Q1\" } # wd:Q1\n"
      "<http://www.wikidata.org/entity/Q1>";
  std::string r = mask_rewrite(q, m);
  EXPECT_EQ(r,
            "SELECT ?x WHERE { kg:1000 kg:1001 ?x . ?x rdfs:label \"wd:Q1\" } # wd:Q1\n"
            "<http://www.wikidata.org/entity/Q1>");
  EXPECT_EQ(unmask_query(r, m).query, q);
}

TEST(Masking, UnmaskHandlesFullIrisAndReportsUnknownTokens) {
  MaskMapping m;
  m.pairs = {{"wd:Q1", "kg:1000"}};
  auto r = unmask_query("ASK { <http://example.org/kg/1000> wdt:P31 kg:4242 }", m);
  EXPECT_EQ(r.query, "ASK { wd:Q1 wdt:P31 kg:4242 }");
  EXPECT_EQ(r.unknown_tokens, std::vector<std::string>{"kg:4242"});
}

TEST(Masking, MappingJsonRoundTrip) {
  auto m = mask_terms(skype_bindings(), 99).mapping;
  EXPECT_EQ(MaskMapping::from_json(m.to_json()), m);
}

TEST(Hygiene, DetectsLeaks) {
  EXPECT_FALSE(prompt_hygiene_violations("using the Wikidata Knowledge Graph").empty());
  EXPECT_FALSE(prompt_hygiene_violations("(wd:Q1, Skype)").empty());
  EXPECT_FALSE(prompt_hygiene_violations("http://www.wikidata.org/entity/Q1").empty());
  EXPECT_TRUE(prompt_hygiene_violations("(kg:1000, Skype) kwd:x").empty());
}

}  // namespace
}  // namespace sparqlbench
