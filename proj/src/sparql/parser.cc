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

#include "sparqlbench/sparql/parser.h"

#include <algorithm>
#include <map>
#include <set>

#include "sparqlbench/util/text.h"

namespace sparqlbench::sparql {

std::string_view to_string(QueryForm form) {
  switch (form) {
    case QueryForm::Select:
      return "SELECT";
    case QueryForm::Construct:
      return "CONSTRUCT";
    case QueryForm::Describe:
      return "DESCRIBE";
    case QueryForm::Ask:
      return "ASK";
  }
  return "SELECT";
}

namespace {

constexpr int kUnbounded = 1 << 20;

struct BuiltinArity {
  int min;
  int max;
  bool nil_ok;  // "F()" written as NIL
};

const std::map<std::string, BuiltinArity>& builtin_arities() {
  static const std::map<std::string, BuiltinArity> kTable = {
      {"STR", {1, 1, false}},        {"LANG", {1, 1, false}},
      {"LANGMATCHES", {2, 2, false}}, {"DATATYPE", {1, 1, false}},
      {"IRI", {1, 1, false}},        {"URI", {1, 1, false}},
      {"BNODE", {0, 1, true}},       {"RAND", {0, 0, true}},
      {"ABS", {1, 1, false}},        {"CEIL", {1, 1, false}},
      {"FLOOR", {1, 1, false}},      {"ROUND", {1, 1, false}},
      {"CONCAT", {0, kUnbounded, true}},
      {"SUBSTR", {2, 3, false}},     {"STRLEN", {1, 1, false}},
      {"REPLACE", {3, 4, false}},    {"UCASE", {1, 1, false}},
      {"LCASE", {1, 1, false}},      {"ENCODE_FOR_URI", {1, 1, false}},
      {"CONTAINS", {2, 2, false}},   {"STRSTARTS", {2, 2, false}},
      {"STRENDS", {2, 2, false}},    {"STRBEFORE", {2, 2, false}},
      {"STRAFTER", {2, 2, false}},   {"YEAR", {1, 1, false}},
      {"MONTH", {1, 1, false}},      {"DAY", {1, 1, false}},
      {"HOURS", {1, 1, false}},      {"MINUTES", {1, 1, false}},
      {"SECONDS", {1, 1, false}},    {"TIMEZONE", {1, 1, false}},
      {"TZ", {1, 1, false}},         {"NOW", {0, 0, true}},
      {"UUID", {0, 0, true}},        {"STRUUID", {0, 0, true}},
      {"MD5", {1, 1, false}},        {"SHA1", {1, 1, false}},
      {"SHA256", {1, 1, false}},     {"SHA384", {1, 1, false}},
      {"SHA512", {1, 1, false}},     {"COALESCE", {0, kUnbounded, true}},
      {"IF", {3, 3, false}},         {"STRLANG", {2, 2, false}},
      {"STRDT", {2, 2, false}},      {"SAMETERM", {2, 2, false}},
      {"ISIRI", {1, 1, false}},      {"ISURI", {1, 1, false}},
      {"ISBLANK", {1, 1, false}},    {"ISLITERAL", {1, 1, false}},
      {"ISNUMERIC", {1, 1, false}},  {"REGEX", {2, 3, false}},
  };
  return kTable;
}

const std::set<std::string>& aggregate_names() {
  static const std::set<std::string> kNames = {
      "COUNT", "SUM", "MIN", "MAX", "AVG", "SAMPLE", "GROUP_CONCAT"};
  return kNames;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, const PrefixMap& predeclared)
      : src_(src), tokens_(tokenize(src)), predeclared_(predeclared) {}

  ParsedQuery run() {
    parse_prologue();
    const Token& t = peek();
    if (t.is_word("SELECT")) {
      out_.form = QueryForm::Select;
      parse_select_query(/*top_level=*/true);
    } else if (t.is_word("CONSTRUCT")) {
      out_.form = QueryForm::Construct;
      parse_construct_query();
    } else if (t.is_word("DESCRIBE")) {
      out_.form = QueryForm::Describe;
      parse_describe_query();
    } else if (t.is_word("ASK")) {
      out_.form = QueryForm::Ask;
      parse_ask_query();
    } else {
      fail("expected SELECT, CONSTRUCT, DESCRIBE or ASK");
    }
    parse_values_clause();
    if (peek().kind != TokenKind::End) fail("unexpected trailing input");
    return std::move(out_);
  }

 private:
  // ---- token helpers -----------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).is_punct(p);
  }
  bool at_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).is_word(w);
  }
  bool accept_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    advance();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!at_word(w)) return false;
    advance();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected " + std::string(w));
  }

  [[noreturn]] void fail(const std::string& message) const {
    fail_at(message, peek().offset);
  }
  [[noreturn]] void fail_at(const std::string& message, std::size_t offset) const {
    std::string found;
    const Token& t = peek();
    if (t.kind == TokenKind::End) {
      found = "end of query";
    } else {
      found = "'" + std::string(t.text.substr(0, 40)) + "'";
    }
    throw SyntaxError(message + ", found " + found, offset,
                      position_of(src_, offset));
  }

  // NIL and ANON allow whitespace between the brackets.
  bool at_nil() const { return at_punct("(") && at_punct(")", 1); }
  bool at_anon() const { return at_punct("[") && at_punct("]", 1); }

  // ---- prologue ------------------------------------------------------------

  void parse_prologue() {
    for (;;) {
      if (accept_word("BASE")) {
        if (peek().kind != TokenKind::IriRef) fail("expected IRI after BASE");
        base_ = advance().value;
      } else if (accept_word("PREFIX")) {
        if (peek().kind != TokenKind::PnameNs) fail("expected prefix name after PREFIX");
        std::string prefix = advance().value;
        if (peek().kind != TokenKind::IriRef) fail("expected IRI in PREFIX declaration");
        std::string iri = resolve_relative(advance().value);
        declared_.set(prefix, iri);
        out_.declared_prefixes.set(prefix, iri);
      } else {
        break;
      }
    }
  }

  std::string resolve_relative(const std::string& iri) const {
    if (base_.empty() || iri.find(':') != std::string::npos) return iri;
    return base_ + iri;
  }

  // ---- query forms ---------------------------------------------------------

  struct Projection {
    std::string var;
    bool is_expression = false;
    std::vector<std::string> free_vars;  // outside aggregates
    bool has_aggregate = false;
    std::size_t offset = 0;
  };

  struct SelectInfo {
    bool star = false;
    std::vector<Projection> projections;
  };

  SelectInfo parse_select_clause() {
    expect_word("SELECT");
    if (!accept_word("DISTINCT")) accept_word("REDUCED");
    SelectInfo info;
    if (accept_punct("*")) {
      info.star = true;
      return info;
    }
    std::set<std::string> seen;
    for (;;) {
      const Token& t = peek();
      if (t.kind == TokenKind::Var) {
        Projection p;
        p.var = t.value;
        p.offset = t.offset;
        advance();
        if (!seen.insert(p.var).second) fail_at("duplicate projected variable ?" + p.var, p.offset);
        info.projections.push_back(std::move(p));
      } else if (at_punct("(") && !at_nil()) {
        advance();
        Projection p;
        p.is_expression = true;
        p.offset = peek().offset;
        ExprScope scope(*this, /*aggregates_allowed=*/true);
        parse_expression();
        p.free_vars = std::move(scope.free_vars);
        p.has_aggregate = scope.saw_aggregate;
        scope.release();
        expect_word("AS");
        if (peek().kind != TokenKind::Var) fail("expected variable after AS");
        p.var = peek().value;
        std::size_t var_offset = peek().offset;
        advance();
        expect_punct(")");
        if (!seen.insert(p.var).second) {
          fail_at("variable ?" + p.var + " is already projected", var_offset);
        }
        info.projections.push_back(std::move(p));
      } else {
        break;
      }
    }
    if (info.projections.empty()) fail("expected projection variables or '*'");
    return info;
  }

  void parse_select_query(bool top_level) {
    SelectInfo info = parse_select_clause();
    if (top_level) {
      out_.select_star = info.star;
      for (const auto& p : info.projections) out_.projected_vars.push_back(p.var);
    }
    while (at_word("FROM")) parse_dataset_clause();
    parse_where_clause(/*where_required=*/false);
    SolutionInfo mods = parse_solution_modifier();
    check_aggregation(info, mods);
  }

  void parse_subselect() {
    // Shares parser state; save the expression scope of the enclosing query.
    auto saved_scope = scope_;
    scope_ = nullptr;
    SelectInfo info = parse_select_clause();
    parse_where_clause(/*where_required=*/false);
    SolutionInfo mods = parse_solution_modifier();
    check_aggregation(info, mods);
    parse_values_clause();
    scope_ = saved_scope;
  }

  void parse_construct_query() {
    expect_word("CONSTRUCT");
    if (at_punct("{")) {
      parse_construct_template();
      while (at_word("FROM")) parse_dataset_clause();
      parse_where_clause(false);
      parse_solution_modifier();
      return;
    }
    while (at_word("FROM")) parse_dataset_clause();
    expect_word("WHERE");
    expect_punct("{");
    if (!at_punct("}")) parse_triples_template();
    expect_punct("}");
    parse_solution_modifier();
  }

  void parse_describe_query() {
    expect_word("DESCRIBE");
    if (!accept_punct("*")) {
      int n = 0;
      while (peek().kind == TokenKind::Var || is_iri_start()) {
        parse_var_or_iri();
        ++n;
      }
      if (n == 0) fail("expected variables, IRIs or '*' after DESCRIBE");
    }
    while (at_word("FROM")) parse_dataset_clause();
    if (at_word("WHERE") || at_punct("{")) parse_where_clause(false);
    parse_solution_modifier();
  }

  void parse_ask_query() {
    expect_word("ASK");
    while (at_word("FROM")) parse_dataset_clause();
    parse_where_clause(false);
    parse_solution_modifier();
  }

  void parse_dataset_clause() {
    expect_word("FROM");
    accept_word("NAMED");
    parse_iri();
  }

  void parse_where_clause(bool where_required) {
    if (!accept_word("WHERE") && where_required) fail("expected WHERE");
    if (!at_punct("{")) fail("expected '{' to open the WHERE clause");
    parse_group_graph_pattern();
  }

  struct SolutionInfo {
    bool has_group_by = false;
    bool has_having = false;
    std::set<std::string> group_vars;
    bool having_or_order_aggregate = false;
  };

  SolutionInfo parse_solution_modifier() {
    SolutionInfo info;
    if (at_word("GROUP")) {
      advance();
      expect_word("BY");
      info.has_group_by = true;
      int n = 0;
      for (;;) {
        if (peek().kind == TokenKind::Var) {
          info.group_vars.insert(advance().value);
        } else if (at_punct("(") && !at_nil()) {
          advance();
          {
            ExprScope scope(*this, false);
            parse_expression();
          }
          if (accept_word("AS")) {
            if (peek().kind != TokenKind::Var) fail("expected variable after AS");
            info.group_vars.insert(advance().value);
          }
          expect_punct(")");
        } else if (is_builtin_start() || is_iri_start()) {
          ExprScope scope(*this, false);
          if (is_builtin_start()) {
            parse_builtin_call();
          } else {
            parse_iri();
            parse_arg_list();
          }
        } else {
          break;
        }
        ++n;
      }
      if (n == 0) fail("expected GROUP BY condition");
    }
    if (at_word("HAVING")) {
      advance();
      info.has_having = true;
      int n = 0;
      while (is_constraint_start()) {
        ExprScope scope(*this, true);
        parse_constraint();
        if (scope.saw_aggregate) info.having_or_order_aggregate = true;
        ++n;
      }
      if (n == 0) fail("expected HAVING condition");
    }
    if (at_word("ORDER")) {
      advance();
      expect_word("BY");
      int n = 0;
      for (;;) {
        ExprScope scope(*this, true);
        if (at_word("ASC") || at_word("DESC")) {
          advance();
          if (!at_punct("(")) fail("expected '(' after ASC/DESC");
          parse_bracketted_expression();
        } else if (peek().kind == TokenKind::Var) {
          advance();
        } else if (is_constraint_start()) {
          parse_constraint();
        } else {
          break;
        }
        if (scope.saw_aggregate) info.having_or_order_aggregate = true;
        ++n;
      }
      if (n == 0) fail("expected ORDER BY condition");
    }
    bool limit = false;
    bool offset = false;
    for (int i = 0; i < 2; ++i) {
      if (!limit && accept_word("LIMIT")) {
        if (peek().kind != TokenKind::Integer) fail("expected integer after LIMIT");
        advance();
        limit = true;
      } else if (!offset && accept_word("OFFSET")) {
        if (peek().kind != TokenKind::Integer) fail("expected integer after OFFSET");
        advance();
        offset = true;
      }
    }
    return info;
  }

  void check_aggregation(const SelectInfo& select, const SolutionInfo& mods) {
    bool projection_aggregates = std::any_of(
        select.projections.begin(), select.projections.end(),
        [](const Projection& p) { return p.has_aggregate; });
    bool aggregate_query = mods.has_group_by || mods.has_having ||
                           projection_aggregates;
    if (!aggregate_query) return;
    if (select.star) {
      fail_at("SELECT * is not allowed in an aggregate query",
              peek().offset);
    }
    std::set<std::string> allowed = mods.group_vars;
    for (const auto& p : select.projections) {
      if (!p.is_expression) {
        if (!allowed.contains(p.var)) {
          throw_semantic("variable ?" + p.var +
                             " is projected but neither grouped nor aggregated",
                         p.offset);
        }
      } else {
        for (const auto& v : p.free_vars) {
          if (!allowed.contains(v)) {
            throw_semantic("variable ?" + v +
                               " is used outside an aggregate but not grouped",
                           p.offset);
          }
        }
        allowed.insert(p.var);
      }
    }
  }

  [[noreturn]] void throw_semantic(const std::string& message, std::size_t offset) const {
    throw SyntaxError(message, offset, position_of(src_, offset));
  }

  void parse_values_clause() {
    if (accept_word("VALUES")) parse_data_block();
  }

  // ---- graph patterns ------------------------------------------------------

  void parse_group_graph_pattern() {
    expect_punct("{");
    if (at_word("SELECT")) {
      parse_subselect();
      expect_punct("}");
      return;
    }
    bool need_separator = false;
    for (;;) {
      if (accept_punct("}")) return;
      if (is_graph_pattern_not_triples_start()) {
        parse_graph_pattern_not_triples();
        accept_punct(".");
        need_separator = false;
        continue;
      }
      if (is_triples_start()) {
        if (need_separator) fail("expected '.' or '}' between triple patterns");
        parse_triples_same_subject(/*path=*/true);
        need_separator = !accept_punct(".");
        continue;
      }
      if (peek().kind == TokenKind::End) fail("unterminated group pattern, expected '}'");
      fail("unexpected token in group pattern");
    }
  }

  bool is_graph_pattern_not_triples_start() const {
    return at_punct("{") || at_word("OPTIONAL") || at_word("MINUS") ||
           at_word("GRAPH") || at_word("SERVICE") || at_word("FILTER") ||
           at_word("BIND") || at_word("VALUES");
  }

  void parse_graph_pattern_not_triples() {
    if (at_punct("{")) {
      parse_group_graph_pattern();
      while (accept_word("UNION")) {
        if (!at_punct("{")) fail("expected '{' after UNION");
        parse_group_graph_pattern();
      }
    } else if (accept_word("OPTIONAL") || accept_word("MINUS")) {
      if (!at_punct("{")) fail("expected '{'");
      parse_group_graph_pattern();
    } else if (accept_word("GRAPH")) {
      parse_var_or_iri();
      parse_group_graph_pattern();
    } else if (accept_word("SERVICE")) {
      accept_word("SILENT");
      parse_var_or_iri();
      if (!at_punct("{")) fail("expected '{' after SERVICE target");
      parse_group_graph_pattern();
    } else if (accept_word("FILTER")) {
      ExprScope scope(*this, false);
      parse_constraint();
    } else if (accept_word("BIND")) {
      expect_punct("(");
      {
        ExprScope scope(*this, false);
        parse_expression();
      }
      expect_word("AS");
      if (peek().kind != TokenKind::Var) fail("expected variable after AS");
      advance();
      expect_punct(")");
    } else if (accept_word("VALUES")) {
      parse_data_block();
    }
  }

  void parse_data_block() {
    if (peek().kind == TokenKind::Var) {
      advance();
      expect_punct("{");
      while (!at_punct("}")) parse_data_block_value();
      expect_punct("}");
      return;
    }
    std::size_t width = 0;
    if (at_nil()) {
      advance();
      advance();
    } else {
      expect_punct("(");
      while (peek().kind == TokenKind::Var) {
        advance();
        ++width;
      }
      expect_punct(")");
    }
    expect_punct("{");
    while (!at_punct("}")) {
      std::size_t row_offset = peek().offset;
      std::size_t n = 0;
      if (at_nil()) {
        advance();
        advance();
      } else {
        expect_punct("(");
        while (!at_punct(")")) {
          parse_data_block_value();
          ++n;
        }
        expect_punct(")");
      }
      if (n != width) {
        throw_semantic("VALUES row has " + std::to_string(n) +
                           " values but " + std::to_string(width) +
                           " variables",
                       row_offset);
      }
    }
    expect_punct("}");
  }

  void parse_data_block_value() {
    if (accept_word("UNDEF")) return;
    if (is_iri_start()) {
      parse_iri();
      return;
    }
    if (peek().kind == TokenKind::String) {
      parse_rdf_literal();
      return;
    }
    if (is_numeric_start()) {
      parse_numeric_literal();
      return;
    }
    if (at_word("true") || at_word("false")) {
      advance();
      return;
    }
    fail("expected a data value");
  }

  // ---- triples ---------------------------------------------------------------

  bool is_iri_start() const {
    auto k = peek().kind;
    return k == TokenKind::IriRef || k == TokenKind::PnameLn ||
           k == TokenKind::PnameNs;
  }

  bool is_numeric_start() const {
    auto k = peek().kind;
    if (k == TokenKind::Integer || k == TokenKind::Decimal || k == TokenKind::Double) {
      return true;
    }
    if (at_punct("+") || at_punct("-")) {
      auto k1 = peek(1).kind;
      // Signed numeric literals must be adjacent to their sign.
      return (k1 == TokenKind::Integer || k1 == TokenKind::Decimal ||
              k1 == TokenKind::Double) &&
             peek(1).offset == peek().offset + 1;
    }
    return false;
  }

  bool is_triples_start() const {
    auto k = peek().kind;
    return k == TokenKind::Var || is_iri_start() || k == TokenKind::String ||
           k == TokenKind::BlankNodeLabel || is_numeric_start() ||
           at_word("true") || at_word("false") || at_punct("[") || at_punct("(");
  }

  void parse_triples_template() {
    for (;;) {
      parse_triples_same_subject(/*path=*/false);
      if (!accept_punct(".")) return;
      if (!is_triples_start()) return;
    }
  }

  void parse_construct_template() {
    expect_punct("{");
    if (!at_punct("}")) parse_triples_template();
    expect_punct("}");
  }

  void parse_triples_same_subject(bool path) {
    if (at_punct("[") && !at_anon()) {
      parse_blank_node_property_list(path);
      if (is_verb_start(path)) parse_property_list_not_empty(path);
      return;
    }
    if (at_punct("(") && !at_nil()) {
      parse_collection(path);
      if (is_verb_start(path)) parse_property_list_not_empty(path);
      return;
    }
    parse_var_or_term();
    if (!is_verb_start(path)) fail("expected a predicate");
    parse_property_list_not_empty(path);
  }

  bool is_verb_start(bool path) const {
    if (peek().kind == TokenKind::Var || is_iri_start() || at_word("a")) return true;
    if (path) return at_punct("!") || at_punct("^") || (at_punct("(") && !at_nil());
    return false;
  }

  void parse_property_list_not_empty(bool path) {
    parse_verb(path);
    parse_object_list(path);
    while (accept_punct(";")) {
      if (is_verb_start(path)) {
        parse_verb(path);
        parse_object_list(path);
      }
    }
  }

  void parse_verb(bool path) {
    if (peek().kind == TokenKind::Var) {
      advance();
      return;
    }
    if (path) {
      parse_path_alternative();
      return;
    }
    if (accept_a()) return;
    parse_iri();
  }

  bool accept_a() {
    // 'a' is case-sensitive.
    if (peek().kind == TokenKind::Word && peek().text == "a") {
      advance();
      return true;
    }
    return false;
  }

  void parse_object_list(bool path) {
    parse_graph_node(path);
    while (accept_punct(",")) parse_graph_node(path);
  }

  void parse_graph_node(bool path) {
    if (at_punct("[") && !at_anon()) {
      parse_blank_node_property_list(path);
      return;
    }
    if (at_punct("(") && !at_nil()) {
      parse_collection(path);
      return;
    }
    parse_var_or_term();
  }

  void parse_blank_node_property_list(bool path) {
    expect_punct("[");
    parse_property_list_not_empty(path);
    expect_punct("]");
  }

  void parse_collection(bool path) {
    expect_punct("(");
    int n = 0;
    while (!at_punct(")")) {
      if (peek().kind == TokenKind::End) fail("unterminated collection");
      parse_graph_node(path);
      ++n;
    }
    if (n == 0) fail("empty collection");
    expect_punct(")");
  }

  void parse_path_alternative() {
    parse_path_sequence();
    while (accept_punct("|")) parse_path_sequence();
  }

  void parse_path_sequence() {
    parse_path_elt_or_inverse();
    while (accept_punct("/")) parse_path_elt_or_inverse();
  }

  void parse_path_elt_or_inverse() {
    accept_punct("^");
    parse_path_primary();
    // PathMod binds only when directly attached; '?' never starts a var here
    // because the lexer already claimed "?name".
    if (at_punct("?") || at_punct("*") || at_punct("+")) {
      if (!(at_punct("+") && is_numeric_start())) advance();
    }
  }

  void parse_path_primary() {
    if (accept_a()) return;
    if (is_iri_start()) {
      parse_iri();
      return;
    }
    if (accept_punct("!")) {
      parse_negated_property_set();
      return;
    }
    if (at_punct("(") && !at_nil()) {
      advance();
      parse_path_alternative();
      expect_punct(")");
      return;
    }
    fail("expected a property path");
  }

  void parse_negated_property_set() {
    auto one = [this] {
      accept_punct("^");
      if (accept_a()) return;
      parse_iri();
    };
    if (at_punct("(")) {
      advance();
      if (!at_punct(")")) {
        one();
        while (accept_punct("|")) one();
      }
      expect_punct(")");
      return;
    }
    one();
  }

  void parse_var_or_iri() {
    if (peek().kind == TokenKind::Var) {
      advance();
      return;
    }
    parse_iri();
  }

  void parse_var_or_term() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Var:
      case TokenKind::BlankNodeLabel:
        note_var(t);
        advance();
        return;
      case TokenKind::IriRef:
      case TokenKind::PnameLn:
      case TokenKind::PnameNs:
        parse_iri();
        return;
      case TokenKind::String:
        parse_rdf_literal();
        return;
      default:
        break;
    }
    if (is_numeric_start()) {
      parse_numeric_literal();
      return;
    }
    if (at_word("true") || at_word("false")) {
      advance();
      return;
    }
    if (at_nil() || at_anon()) {
      advance();
      advance();
      return;
    }
    fail("expected a variable or RDF term");
  }

  void note_var(const Token&) {}

  void parse_iri() {
    const Token& t = peek();
    IriReference ref;
    ref.offset = t.offset;
    ref.length = t.text.size();
    ref.written = std::string(t.text);
    if (t.kind == TokenKind::IriRef) {
      ref.iri = resolve_relative(t.value);
    } else if (t.kind == TokenKind::PnameLn || t.kind == TokenKind::PnameNs) {
      const std::string& prefix = t.value;
      auto ns = declared_.ns(prefix);
      if (!ns) ns = predeclared_.ns(prefix);
      if (!ns) {
        fail_at("undefined prefix '" + prefix + ":'", t.offset);
      }
      std::string local(t.text.substr(prefix.size() + 1));
      ref.iri = *ns + unescape_local(local);
      ref.prefixed = true;
    } else {
      fail("expected an IRI");
    }
    out_.iris.push_back(std::move(ref));
    advance();
  }

  static std::string unescape_local(const std::string& local) {
    std::string out;
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (local[i] == '\\' && i + 1 < local.size()) {
        out += local[++i];
      } else {
        out += local[i];
      }
    }
    return out;
  }

  void parse_rdf_literal() {
    if (peek().kind != TokenKind::String) fail("expected a string literal");
    advance();
    if (peek().kind == TokenKind::LangTag) {
      advance();
    } else if (accept_punct("^^")) {
      parse_iri();
    }
  }

  void parse_numeric_literal() {
    if (at_punct("+") || at_punct("-")) advance();
    auto k = peek().kind;
    if (k != TokenKind::Integer && k != TokenKind::Decimal && k != TokenKind::Double) {
      fail("expected a number");
    }
    advance();
  }

  // ---- expressions -----------------------------------------------------------

  // Tracks aggregate permission and the variables referenced outside
  // aggregates while an expression is parsed.
  struct ExprScope {
    ExprScope(Parser& p, bool aggregates_allowed)
        : parser(p), previous(p.scope_), allowed(aggregates_allowed) {
      parser.scope_ = this;
    }
    ~ExprScope() { release(); }
    void release() {
      if (active) {
        parser.scope_ = previous;
        active = false;
      }
    }
    Parser& parser;
    ExprScope* previous;
    bool allowed;
    bool active = true;
    int aggregate_depth = 0;
    bool saw_aggregate = false;
    std::vector<std::string> free_vars;
  };

  bool is_constraint_start() const {
    return at_punct("(") || is_builtin_start() || is_iri_start();
  }

  void parse_constraint() {
    if (at_punct("(")) {
      parse_bracketted_expression();
    } else if (is_builtin_start()) {
      parse_builtin_call();
    } else if (is_iri_start()) {
      parse_iri();
      parse_arg_list();
    } else {
      fail("expected a constraint");
    }
  }

  void parse_bracketted_expression() {
    expect_punct("(");
    parse_expression();
    expect_punct(")");
  }

  void parse_expression() {
    parse_and_expression();
    while (accept_punct("||")) parse_and_expression();
  }

  void parse_and_expression() {
    parse_relational_expression();
    while (accept_punct("&&")) parse_relational_expression();
  }

  void parse_relational_expression() {
    parse_additive_expression();
    static constexpr std::string_view kOps[] = {"=", "!=", "<", ">", "<=", ">="};
    for (auto op : kOps) {
      if (accept_punct(op)) {
        parse_additive_expression();
        return;
      }
    }
    if (accept_word("IN")) {
      parse_expression_list();
    } else if (at_word("NOT") && at_word("IN", 1)) {
      advance();
      advance();
      parse_expression_list();
    }
  }

  void parse_expression_list() {
    if (at_nil()) {
      advance();
      advance();
      return;
    }
    expect_punct("(");
    parse_expression();
    while (accept_punct(",")) parse_expression();
    expect_punct(")");
  }

  void parse_additive_expression() {
    parse_multiplicative_expression();
    while (at_punct("+") || at_punct("-")) {
      advance();
      parse_multiplicative_expression();
    }
  }

  void parse_multiplicative_expression() {
    parse_unary_expression();
    while (at_punct("*") || at_punct("/")) {
      advance();
      parse_unary_expression();
    }
  }

  void parse_unary_expression() {
    if (at_punct("!") || at_punct("+") || at_punct("-")) advance();
    parse_primary_expression();
  }

  void parse_primary_expression() {
    const Token& t = peek();
    if (at_punct("(")) {
      if (at_nil()) fail("expected an expression");
      parse_bracketted_expression();
      return;
    }
    if (t.kind == TokenKind::Var) {
      if (scope_ && scope_->aggregate_depth == 0) scope_->free_vars.push_back(t.value);
      advance();
      return;
    }
    if (is_builtin_start()) {
      parse_builtin_call();
      return;
    }
    if (is_iri_start()) {
      parse_iri();
      if (at_punct("(")) parse_arg_list();
      return;
    }
    if (t.kind == TokenKind::String) {
      parse_rdf_literal();
      return;
    }
    if (t.kind == TokenKind::Integer || t.kind == TokenKind::Decimal ||
        t.kind == TokenKind::Double) {
      advance();
      return;
    }
    if (at_word("true") || at_word("false")) {
      advance();
      return;
    }
    fail("expected an expression");
  }

  void parse_arg_list() {
    if (at_nil()) {
      advance();
      advance();
      return;
    }
    expect_punct("(");
    accept_word("DISTINCT");
    parse_expression();
    while (accept_punct(",")) parse_expression();
    expect_punct(")");
  }

  bool is_builtin_start() const {
    const Token& t = peek();
    if (t.kind != TokenKind::Word) return false;
    std::string name = upper(t.text);
    if (builtin_arities().contains(name) || aggregate_names().contains(name)) {
      return true;
    }
    if (name == "BOUND" || name == "EXISTS") return true;
    return name == "NOT" && at_word("EXISTS", 1);
  }

  void parse_builtin_call() {
    std::size_t offset = peek().offset;
    std::string name = upper(advance().text);
    if (aggregate_names().contains(name)) {
      parse_aggregate(name, offset);
      return;
    }
    if (name == "BOUND") {
      expect_punct("(");
      if (peek().kind != TokenKind::Var) fail("BOUND expects a variable");
      if (scope_ && scope_->aggregate_depth == 0) scope_->free_vars.push_back(peek().value);
      advance();
      expect_punct(")");
      return;
    }
    if (name == "NOT") {
      expect_word("EXISTS");
      name = "EXISTS";
    }
    if (name == "EXISTS") {
      auto saved = scope_;
      scope_ = nullptr;
      if (!at_punct("{")) fail("expected '{' after EXISTS");
      parse_group_graph_pattern();
      scope_ = saved;
      return;
    }
    const BuiltinArity& arity = builtin_arities().at(name);
    if (at_nil()) {
      if (!arity.nil_ok) fail(name + " requires arguments");
      advance();
      advance();
      return;
    }
    expect_punct("(");
    int n = 0;
    if (!at_punct(")")) {
      parse_expression();
      ++n;
      while (accept_punct(",")) {
        parse_expression();
        ++n;
      }
    }
    expect_punct(")");
    if (n < arity.min || n > arity.max) {
      throw_semantic(name + " called with " + std::to_string(n) + " argument(s)",
                     offset);
    }
  }

  void parse_aggregate(const std::string& name, std::size_t offset) {
    if (!scope_ || !scope_->allowed) {
      throw_semantic("aggregate " + name +
                         " is only allowed in SELECT, HAVING or ORDER BY",
                     offset);
    }
    if (scope_->aggregate_depth > 0) {
      throw_semantic("aggregates cannot be nested", offset);
    }
    scope_->saw_aggregate = true;
    ++scope_->aggregate_depth;
    expect_punct("(");
    accept_word("DISTINCT");
    if (name == "COUNT" && accept_punct("*")) {
      // COUNT(*)
    } else {
      parse_expression();
    }
    if (name == "GROUP_CONCAT" && accept_punct(";")) {
      expect_word("SEPARATOR");
      expect_punct("=");
      if (peek().kind != TokenKind::String) fail("expected separator string");
      advance();
    }
    expect_punct(")");
    --scope_->aggregate_depth;
  }

  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const PrefixMap& predeclared_;
  PrefixMap declared_;
  std::string base_;
  ExprScope* scope_ = nullptr;
  ParsedQuery out_;
};

}  // namespace

ParsedQuery parse_query(std::string_view text, const PrefixMap& predeclared) {
  return Parser(text, predeclared).run();
}

std::optional<SyntaxError> check_syntax(std::string_view text,
                                        const PrefixMap& predeclared) {
  try {
    parse_query(text, predeclared);
    return std::nullopt;
  } catch (const SyntaxError& e) {
    return e;
  }
}

}  // namespace sparqlbench::sparql
