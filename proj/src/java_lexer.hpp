#pragma once

// Lexical view of Java source: enough structure (comments, literals, words,
// punctuation) to locate methods, count statements and link inner comments
// without a grammar.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sumeval::java {

enum class TokenKind {
  word,           // identifier, keyword or numeric literal
  punct,          // single character, or "->"
  string_literal, // "..." or a """ text block
  char_literal,
  line_comment,
  block_comment,
  javadoc,
};

struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t offset;  // byte offset of the first character
  int line;            // 1-based line of the first character
  int end_line;        // 1-based line of the last character

  bool is_comment() const {
    return kind == TokenKind::line_comment || kind == TokenKind::block_comment ||
           kind == TokenKind::javadoc;
  }
  bool is(std::string_view s) const {
    return (kind == TokenKind::punct || kind == TokenKind::word) && text == s;
  }
};

struct LexResult {
  std::vector<Token> tokens;
  std::optional<std::string> error;  // unterminated comment or literal
};

/// Tokens reference `source`, which must outlive the result.
LexResult lex(std::string_view source);

/// Comment body without its markers: "//", "/*", "/**", "*/" and leading
/// '*' gutters removed, whitespace collapsed.
std::string comment_text(const Token& comment);

}  // namespace sumeval::java
