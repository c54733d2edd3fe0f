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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sparqlbench::sparql {

enum class TokenKind {
  IriRef,          // <...>; value holds the unescaped IRI
  PnameNs,         // prefix:   ; value holds the prefix
  PnameLn,         // prefix:local
  BlankNodeLabel,  // _:label
  Var,             // ?name / $name; value holds the name
  LangTag,         // @en-GB; value holds the tag
  Integer,
  Decimal,
  Double,
  String,   // value holds the unescaped content
  Word,     // keywords, 'a', true/false; text as written
  Punct,    // { } ( ) [ ] ; , . = != < > <= >= && || ! + - * / ^ ^^ | ?
  Unknown,  // tolerant mode only: a byte sequence the grammar rejects
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;  // slice of the source
  std::string value;
  std::size_t offset = 0;

  bool is_punct(std::string_view p) const {
    return kind == TokenKind::Punct && text == p;
  }
  // Case-insensitive keyword match.
  bool is_word(std::string_view kw) const;
};

struct SourcePosition {
  int line = 1;
  int column = 1;
};

SourcePosition position_of(std::string_view source, std::size_t offset);

class SyntaxError : public std::exception {
 public:
  SyntaxError(std::string message, std::size_t offset, SourcePosition pos);
  const char* what() const noexcept override { return rendered_.c_str(); }
  const std::string& message() const { return message_; }
  std::size_t offset() const { return offset_; }
  SourcePosition position() const { return pos_; }

 private:
  std::string message_;
  std::size_t offset_;
  SourcePosition pos_;
  std::string rendered_;
};

// Strict mode throws SyntaxError on the first lexical error. Tolerant mode
// never throws: unlexable input becomes Unknown tokens and an unterminated
// string or IRI swallows the rest of the input. Comments are skipped in both.
std::vector<Token> tokenize(std::string_view source, bool tolerant = false);

}  // namespace sparqlbench::sparql
