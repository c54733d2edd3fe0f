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

#include "sparqlbench/endpoint.h"
#include "sparqlbench/sparql_eval.h"
#include "support.h"

namespace sparqlbench {
namespace {

using nlohmann::json;
using testing::StubServer;
using testing::TempDir;

const std::string kWd = "http://www.wikidata.org/entity/";

json bindings_doc(const std::vector<std::string>& qids) {
  json rows = json::array();
  for (const auto& q : qids) rows.push_back({{"x", {{"type", "uri"}, {"value", kWd + q}}}});
  return {{"head", {{"vars", {"x"}}}}, {"results", {{"bindings", rows}}}};
}

AnswerSet iris(const std::vector<std::string>& qids) {
  std::vector<RdfTerm> t;
  for (const auto& q : qids) t.push_back(RdfTerm::iri(kWd + q));
  return AnswerSet::terms(t);
}

TEST(ValidateSyntax, StandardPrefixesAreBound) {
  EXPECT_TRUE(validate_syntax("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }").syntactically_valid);
  EXPECT_TRUE(validate_syntax("SELECT ?x WHERE { ?x kg:1 kg:2 }").syntactically_valid);
  auto bad = validate_syntax("SELECT ?resource\nWHERE { >// Instance of film");
  EXPECT_FALSE(bad.syntactically_valid);
  EXPECT_FALSE(bad.executable);
  EXPECT_TRUE(bad.syntax_error.has_value());
}

TEST(Execute, ReplayBindingsAndBoolean) {
  ReplayEndpoint ep;
  ep.record("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", bindings_doc({"Q5", "Q6"}));
  ep.record("ASK { wd:Q1 wdt:P31 wd:Q5 }", json{{"head", json::object()}, {"boolean", true}});
  auto r = execute("PREFIX wd: <http://www.wikidata.org/entity/>\n"
                   "select ?x where { wd:Q1 wdt:P31 ?x }   # same query",
                   ep);
  EXPECT_EQ(r.kind, ResultKind::Bindings);
  EXPECT_EQ(r.row_count, 2u);
  EXPECT_TRUE(compare(r, iris({"Q6", "Q5"})));
  auto b = execute("ASK { wd:Q1 wdt:P31 wd:Q5 }", ep);
  EXPECT_EQ(b.kind, ResultKind::Boolean);
  EXPECT_TRUE(compare(b, AnswerSet::boolean(true)));
  EXPECT_FALSE(compare(b, AnswerSet::boolean(false)));
}

TEST(Execute, UnknownQueriesGiveEmptyResultAndBadOnesFail) {
  ReplayEndpoint ep;
  auto r = execute("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", ep);
  EXPECT_EQ(r.kind, ResultKind::Bindings);
  EXPECT_EQ(r.row_count, 0u);
  auto f = execute("SELECT ?x WHERE { ?x kg:1 kg:2 }", ep);
  EXPECT_EQ(f.kind, ResultKind::Failed);
  EXPECT_NE(f.diagnostic.find("400"), std::string::npos);
}

TEST(Execute, RowCapTruncatesAndNeverMatches) {
  ReplayEndpoint ep;
  ep.record("SELECT ?x WHERE { ?x wdt:P31 wd:Q5 }", bindings_doc({"Q1", "Q2", "Q3"}));
  auto r = execute("SELECT ?x WHERE { ?x wdt:P31 wd:Q5 }", ep, 2);
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(compare(r, iris({"Q1", "Q2", "Q3"})));
}

TEST(Execute, CachePersistsButSkipsTransportFailures) {
  TempDir dir;
  int calls = 0;
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    if (req.get_param_value("query").find("P999") != std::string::npos) {
      res.status = 503;
      return;
    }
    res.set_content(bindings_doc({"Q5"}).dump(), "application/sparql-results+json");
  });
  EndpointConfig cfg;
  cfg.url = server.url("/sparql");
  cfg.requests_per_second = 0;
  cfg.max_retries = 0;
  HttpSparqlEndpoint ep(cfg);
  {
    ExecutionCache cache(dir / "exec.jsonl");
    execute("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", ep, 100, &cache);
    auto failed = execute("SELECT ?x WHERE { wd:Q1 wdt:P999 ?x }", ep, 100, &cache);
    EXPECT_TRUE(failed.transport_failure);
    EXPECT_EQ(cache.size(), 1u);
  }
  ExecutionCache reopened(dir / "exec.jsonl");
  auto again = execute("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", ep, 100, &reopened);
  EXPECT_EQ(calls, 2);
  EXPECT_TRUE(compare(again, iris({"Q5"})));
  ExecutionResult back = ExecutionResult::from_json(again.to_json());
  EXPECT_EQ(back, again);
}

TEST(Compare, TermNormalization) {
  ExecutionResult r;
  r.kind = ResultKind::Bindings;
  r.answer = AnswerSet::terms({RdfTerm::literal("+042.50", "http://www.w3.org/2001/XMLSchema#decimal"),
                               RdfTerm::literal("Berlin", std::string(kXsdString)),
                               RdfTerm::literal("Haus", "", "DE")});
  r.row_count = 3;
  AnswerSet gold = AnswerSet::terms({RdfTerm::literal("42.5", "http://www.w3.org/2001/XMLSchema#decimal"),
                                     RdfTerm::literal("Berlin"),
                                     RdfTerm::literal("Haus", "", "de")});
  EXPECT_TRUE(compare(r, gold));
}

TEST(Compare, OrderAndDuplicationInvariance) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<RdfTerm> terms;
    std::size_t n = 1 + rng() % 12;
    for (std::size_t k = 0; k < n; ++k) terms.push_back(RdfTerm::iri(kWd + "Q" + std::to_string(rng() % 30)));
    std::vector<RdfTerm> shuffled = terms;
    shuffled.insert(shuffled.end(), terms.begin(), terms.begin() + rng() % n);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    ExecutionResult r;
    r.kind = ResultKind::Bindings;
    r.answer = AnswerSet::terms(shuffled);
    r.row_count = shuffled.size();
    EXPECT_TRUE(compare(r, AnswerSet::terms(terms)));
  }
}

TEST(Compare, EmptyAndKindMismatches) {
  ExecutionResult empty;
  empty.kind = ResultKind::Bindings;
  EXPECT_FALSE(compare(empty, iris({"Q1"})));
  ExecutionResult yes;
  yes.kind = ResultKind::Boolean;
  yes.answer = AnswerSet::boolean(true);
  EXPECT_FALSE(compare(yes, iris({"Q1"})));
  ExecutionResult failed;
  EXPECT_FALSE(compare(failed, iris({"Q1"})));
}

TEST(CanonicalKey, IgnoresSpellingDifferences) {
  const PrefixMap& p = wikidata_prefixes();
  EXPECT_EQ(canonical_query_key("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", p),
            canonical_query_key("PREFIX e: <http://www.wikidata.org/entity/>\nselect ?x\n"
                                "where { e:Q1 <http://www.wikidata.org/prop/direct/P31> ?x } # c",
                                p));
  EXPECT_NE(canonical_query_key("SELECT ?x WHERE { wd:Q1 wdt:P31 ?x }", p),
            canonical_query_key("SELECT ?y WHERE { wd:Q1 wdt:P31 ?y }", p));
}

}  // namespace
}  // namespace sparqlbench
