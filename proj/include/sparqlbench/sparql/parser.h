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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlbench/rdf.h"
#include "sparqlbench/sparql/lexer.h"

namespace sparqlbench::sparql {

enum class QueryForm { Select, Construct, Describe, Ask };

std::string_view to_string(QueryForm form);

// One IRI written in the query body (PREFIX/BASE declarations excluded).
struct IriReference {
  std::string written;  // as it appears in the text
  std::string iri;      // resolved full IRI
  std::size_t offset = 0;
  std::size_t length = 0;
  bool prefixed = false;
};

struct ParsedQuery {
  QueryForm form = QueryForm::Select;
  PrefixMap declared_prefixes;
  std::vector<IriReference> iris;
  std::vector<std::string> projected_vars;
  bool select_star = false;
};

// Parses a SPARQL 1.1 query (the Query production; updates are rejected).
// `predeclared` supplies prefixes the query may use without declaring them;
// the query's own PREFIX declarations take precedence. Beyond the grammar,
// the parser rejects undeclared prefixes, aggregates outside SELECT/HAVING/
// ORDER BY, SELECT * with GROUP BY, ungrouped projected variables in
// aggregate queries, duplicate projection names, and VALUES rows whose
// width differs from the variable list.
// Throws SyntaxError.
ParsedQuery parse_query(std::string_view text, const PrefixMap& predeclared);

// Non-throwing form; returns the diagnostic on failure.
std::optional<SyntaxError> check_syntax(std::string_view text,
                                        const PrefixMap& predeclared);

}  // namespace sparqlbench::sparql
