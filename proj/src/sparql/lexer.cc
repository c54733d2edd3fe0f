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

#include "sparqlbench/sparql/lexer.h"

#include <cstdint>
#include <optional>

#include "sparqlbench/util/text.h"

namespace sparqlbench::sparql {

bool Token::is_word(std::string_view kw) const {
  return kind == TokenKind::Word && util::iequals(text, kw);
}

SourcePosition position_of(std::string_view source, std::size_t offset) {
  SourcePosition pos;
  for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else if ((static_cast<unsigned char>(source[i]) & 0xC0) != 0x80) {
      ++pos.column;
    }
  }
  return pos;
}

SyntaxError::SyntaxError(std::string message, std::size_t offset,
                         SourcePosition pos)
    : message_(std::move(message)), offset_(offset), pos_(pos) {
  rendered_ = "line " + std::to_string(pos_.line) + ", column " +
              std::to_string(pos_.column) + ": " + message_;
}

namespace {

struct CodePoint {
  int32_t value;  // -1 when invalid
  std::size_t length;
};

CodePoint decode(std::string_view s, std::size_t i) {
  auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  int len = (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || i + len > s.size()) return {-1, 1};
  int32_t cp = b0 & (0x7F >> len);
  for (int k = 1; k < len; ++k) {
    auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {-1, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, static_cast<std::size_t>(len)};
}

bool is_pn_chars_base(int32_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= 0x00C0 && c <= 0x00D6) || (c >= 0x00D8 && c <= 0x00F6) ||
         (c >= 0x00F8 && c <= 0x02FF) || (c >= 0x0370 && c <= 0x037D) ||
         (c >= 0x037F && c <= 0x1FFF) || (c >= 0x200C && c <= 0x200D) ||
         (c >= 0x2070 && c <= 0x218F) || (c >= 0x2C00 && c <= 0x2FEF) ||
         (c >= 0x3001 && c <= 0xD7FF) || (c >= 0xF900 && c <= 0xFDCF) ||
         (c >= 0xFDF0 && c <= 0xFFFD) || (c >= 0x10000 && c <= 0xEFFFF);
}
bool is_pn_chars_u(int32_t c) { return is_pn_chars_base(c) || c == '_'; }
bool is_digit(int32_t c) { return c >= '0' && c <= '9'; }
bool is_pn_chars(int32_t c) {
  return is_pn_chars_u(c) || c == '-' || is_digit(c) || c == 0x00B7 ||
         (c >= 0x0300 && c <= 0x036F) || (c >= 0x203F && c <= 0x2040);
}
bool is_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
         (c >= 'A' && c <= 'F');
}
bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

constexpr std::string_view kLocalEscapable = "_~.-!$&'()*+,;=/?#@%";

class Lexer {
 public:
  Lexer(std::string_view src, bool tolerant) : src_(src), tolerant_(tolerant) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws_and_comments();
      if (pos_ >= src_.size()) break;
      std::size_t start = pos_;
      std::optional<Token> tok = lex_one();
      if (!tok) {
        if (!tolerant_) fail(error_, error_pos_);
        // Swallow one code point and keep going.
        pos_ = start + decode(src_, start).length;
        Token unknown;
        unknown.kind = TokenKind::Unknown;
        unknown.offset = start;
        unknown.text = src_.substr(start, pos_ - start);
        out.push_back(std::move(unknown));
        continue;
      }
      tok->offset = start;
      tok->text = src_.substr(start, pos_ - start);
      out.push_back(std::move(*tok));
    }
    Token end;
    end.kind = TokenKind::End;
    end.offset = src_.size();
    out.push_back(end);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t at) {
    throw SyntaxError(message, at, position_of(src_, at));
  }

  // Records a lexical error and signals "no token".
  std::optional<Token> reject(std::string message, std::size_t at) {
    error_ = std::move(message);
    error_pos_ = at;
    return std::nullopt;
  }

  char peek(std::size_t k = 0) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }

  void skip_ws_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (is_ws(c)) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::optional<Token> lex_one() {
    char c = peek();
    std::size_t start = pos_;
    if (c == '<') {
      if (auto iri = lex_iriref()) return iri;
      pos_ = start;
      if (peek(1) == '=') return punct(2);
      return punct(1);
    }
    if (c == '?' || c == '$') {
      if (auto v = lex_var()) return v;
      pos_ = start;
      if (c == '?') return punct(1);
      return reject("'$' must start a variable", start);
    }
    if (c == '"' || c == '\'') return lex_string();
    if (c == '@') return lex_langtag();
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return lex_number();
    if (c == '_' && peek(1) == ':') return lex_blank_node();
    if (c == ':') return lex_pname(start);
    CodePoint cp = decode(src_, pos_);
    if (cp.value >= 0 && is_pn_chars_base(cp.value)) return lex_word_or_pname();
    switch (c) {
      case '{': case '}': case '(': case ')': case '[': case ']':
      case ';': case ',': case '.': case '*': case '/': case '+':
      case '-':
        return punct(1);
      case '=':
        return punct(1);
      case '!':
        return punct(peek(1) == '=' ? 2 : 1);
      case '>':
        return punct(peek(1) == '=' ? 2 : 1);
      case '&':
        if (peek(1) == '&') return punct(2);
        break;
      case '|':
        return punct(peek(1) == '|' ? 2 : 1);
      case '^':
        return punct(peek(1) == '^' ? 2 : 1);
      default:
        break;
    }
    return reject("unexpected character '" +
                      std::string(src_.substr(pos_, cp.length)) + "'",
                  start);
  }

  Token punct(std::size_t len) {
    Token t;
    t.kind = TokenKind::Punct;
    pos_ += len;
    return t;
  }

  // Reads \uXXXX or \UXXXXXXXX at pos_ (pointing at the backslash).
  std::optional<uint32_t> read_uchar() {
    char kind = peek(1);
    std::size_t digits = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
    if (digits == 0 || pos_ + 2 + digits > src_.size()) return std::nullopt;
    uint32_t cp = 0;
    for (std::size_t k = 0; k < digits; ++k) {
      char h = src_[pos_ + 2 + k];
      if (!is_hex(h)) return std::nullopt;
      cp = cp * 16 + static_cast<uint32_t>(std::stoi(std::string(1, h), nullptr, 16));
    }
    pos_ += 2 + digits;
    return cp;
  }

  std::optional<Token> lex_iriref() {
    std::size_t start = pos_;
    ++pos_;
    Token t;
    t.kind = TokenKind::IriRef;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '>') {
        ++pos_;
        return t;
      }
      if (c == '\\') {
        auto cp = read_uchar();
        if (!cp) return reject("bad escape in IRI", pos_);
        append_utf8(t.value, *cp);
        continue;
      }
      auto uc = static_cast<unsigned char>(c);
      if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`') {
        return reject("invalid character in IRI", start);
      }
      t.value += c;
      ++pos_;
    }
    if (tolerant_) {
      // Unterminated IRI: treat as IRI up to end of input.
      return t;
    }
    return reject("unterminated IRI", start);
  }

  std::optional<Token> lex_var() {
    ++pos_;
    std::size_t name_start = pos_;
    bool first = true;
    while (pos_ < src_.size()) {
      CodePoint cp = decode(src_, pos_);
      if (cp.value < 0) break;
      bool ok = is_pn_chars_u(cp.value) || is_digit(cp.value) ||
                (!first && (cp.value == 0x00B7 ||
                            (cp.value >= 0x0300 && cp.value <= 0x036F) ||
                            (cp.value >= 0x203F && cp.value <= 0x2040)));
      if (!ok) break;
      pos_ += cp.length;
      first = false;
    }
    if (pos_ == name_start) return std::nullopt;
    Token t;
    t.kind = TokenKind::Var;
    t.value = std::string(src_.substr(name_start, pos_ - name_start));
    return t;
  }

  std::optional<Token> lex_string() {
    std::size_t start = pos_;
    char q = peek();
    bool long_form = peek(1) == q && peek(2) == q;
    pos_ += long_form ? 3 : 1;
    Token t;
    t.kind = TokenKind::String;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (long_form) {
        if (c == q && peek(1) == q && peek(2) == q) {
          // A long string may end with up to two extra quote chars.
          while (peek(3) == q) {
            t.value += q;
            ++pos_;
          }
          pos_ += 3;
          return t;
        }
      } else {
        if (c == q) {
          ++pos_;
          return t;
        }
        if (c == '\n' || c == '\r') {
          if (tolerant_) break;
          return reject("newline in string literal", start);
        }
      }
      if (c == '\\') {
        char e = peek(1);
        switch (e) {
          case 't': t.value += '\t'; pos_ += 2; continue;
          case 'b': t.value += '\b'; pos_ += 2; continue;
          case 'n': t.value += '\n'; pos_ += 2; continue;
          case 'r': t.value += '\r'; pos_ += 2; continue;
          case 'f': t.value += '\f'; pos_ += 2; continue;
          case '"': case '\'': case '\\':
            t.value += e;
            pos_ += 2;
            continue;
          case 'u': case 'U': {
            auto cp = read_uchar();
            if (!cp) return reject("bad unicode escape in string", pos_);
            append_utf8(t.value, *cp);
            continue;
          }
          default:
            if (tolerant_) {
              t.value += c;
              ++pos_;
              continue;
            }
            return reject("bad escape in string literal", pos_);
        }
      }
      t.value += c;
      ++pos_;
    }
    if (tolerant_) {
      pos_ = src_.size();
      return t;
    }
    return reject("unterminated string literal", start);
  }

  std::optional<Token> lex_langtag() {
    std::size_t start = pos_;
    ++pos_;
    std::size_t tag_start = pos_;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    while (alpha(peek())) ++pos_;
    if (pos_ == tag_start) return reject("bad language tag", start);
    while (peek() == '-') {
      std::size_t seg = pos_ + 1;
      std::size_t k = seg;
      while (k < src_.size() && (alpha(src_[k]) || is_digit(src_[k]))) ++k;
      if (k == seg) break;
      pos_ = k;
    }
    Token t;
    t.kind = TokenKind::LangTag;
    t.value = std::string(src_.substr(tag_start, pos_ - tag_start));
    return t;
  }

  std::optional<Token> lex_number() {
    Token t;
    t.kind = TokenKind::Integer;
    while (is_digit(peek())) ++pos_;
    if (peek() == '.' && (is_digit(peek(1)) ||
                          ((peek(1) == 'e' || peek(1) == 'E') && exponent_at(pos_ + 1)))) {
      ++pos_;
      t.kind = TokenKind::Decimal;
      while (is_digit(peek())) ++pos_;
    }
    if ((peek() == 'e' || peek() == 'E') && exponent_at(pos_)) {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      while (is_digit(peek())) ++pos_;
      t.kind = TokenKind::Double;
    }
    return t;
  }

  bool exponent_at(std::size_t i) const {
    if (i >= src_.size() || (src_[i] != 'e' && src_[i] != 'E')) return false;
    ++i;
    if (i < src_.size() && (src_[i] == '+' || src_[i] == '-')) ++i;
    return i < src_.size() && is_digit(src_[i]);
  }

  std::optional<Token> lex_blank_node() {
    std::size_t start = pos_;
    pos_ += 2;
    CodePoint cp = pos_ < src_.size() ? decode(src_, pos_) : CodePoint{-1, 1};
    if (cp.value < 0 || !(is_pn_chars_u(cp.value) || is_digit(cp.value))) {
      return reject("bad blank node label", start);
    }
    pos_ += cp.length;
    scan_name_tail(/*allow_colon=*/false);
    Token t;
    t.kind = TokenKind::BlankNodeLabel;
    t.value = std::string(src_.substr(start + 2, pos_ - start - 2));
    return t;
  }

  // Scans (PN_CHARS | '.')* not ending in '.', plus ':' and PLX when
  // allow_colon is set (local-name rules).
  void scan_name_tail(bool allow_colon) {
    std::size_t last_good = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (allow_colon && c == ':') {
        ++pos_;
        last_good = pos_;
        continue;
      }
      if (allow_colon && c == '%' && is_hex(peek(1)) && is_hex(peek(2))) {
        pos_ += 3;
        last_good = pos_;
        continue;
      }
      if (allow_colon && c == '\\' &&
          kLocalEscapable.find(peek(1)) != std::string_view::npos && peek(1) != '\0') {
        pos_ += 2;
        last_good = pos_;
        continue;
      }
      if (c == '.') {
        ++pos_;
        continue;
      }
      CodePoint cp = decode(src_, pos_);
      if (cp.value < 0 || !is_pn_chars(cp.value)) break;
      pos_ += cp.length;
      last_good = pos_;
    }
    pos_ = last_good;
  }

  std::optional<Token> lex_pname(std::size_t start) {
    // pos_ is at the ':' terminating the prefix.
    std::string prefix(src_.substr(start, pos_ - start));
    ++pos_;
    std::size_t local_start = pos_;
    if (pos_ < src_.size()) {
      char c = src_[pos_];
      CodePoint cp = decode(src_, pos_);
      bool starts_local =
          (cp.value >= 0 && (is_pn_chars_u(cp.value) || is_digit(cp.value))) ||
          c == ':' || (c == '%' && is_hex(peek(1)) && is_hex(peek(2))) ||
          (c == '\\' && peek(1) != '\0' &&
           kLocalEscapable.find(peek(1)) != std::string_view::npos);
      if (starts_local) {
        if (c == '%') {
          pos_ += 3;
        } else if (c == '\\') {
          pos_ += 2;
        } else {
          pos_ += cp.length;
        }
        scan_name_tail(/*allow_colon=*/true);
      }
    }
    Token t;
    t.kind = pos_ == local_start ? TokenKind::PnameNs : TokenKind::PnameLn;
    t.value = prefix;
    return t;
  }

  std::optional<Token> lex_word_or_pname() {
    std::size_t start = pos_;
    // Try PN_PREFIX followed by ':'.
    CodePoint first = decode(src_, pos_);
    pos_ += first.length;
    scan_name_tail(/*allow_colon=*/false);
    if (peek() == ':') return lex_pname(start);
    // Plain word: letters, digits, underscore.
    pos_ = start;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || is_digit(c) ||
          c == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) {
      pos_ = start + first.length;
      return reject("unexpected character '" +
                        std::string(src_.substr(start, first.length)) + "'",
                    start);
    }
    Token t;
    t.kind = TokenKind::Word;
    return t;
  }

  std::string_view src_;
  bool tolerant_;
  std::size_t pos_ = 0;
  std::string error_;
  std::size_t error_pos_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, bool tolerant) {
  return Lexer(source, tolerant).run();
}

}  // namespace sparqlbench::sparql
