#include "java_lexer.hpp"

#include <cctype>

namespace sumeval::java {
namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0 || c == '_' || c == '$' || c >= 0x80; }

}  // namespace

LexResult lex(std::string_view src) {
  LexResult result;
  std::size_t i = 0;
  int line = 1;

  auto emit = [&](TokenKind kind, std::size_t start, int start_line) {
    result.tokens.push_back({kind, src.substr(start, i - start), start, start_line, line});
  };
  auto advance = [&] {
    if (src[i] == '\n') ++line;
    ++i;
  };

  while (i < src.size()) {
    const char c = src[i];
    const std::size_t start = i;
    const int start_line = line;

    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') ++i;
      emit(TokenKind::line_comment, start, start_line);
    } else if (src.substr(i, 2) == "/*") {
      const bool doc = src.substr(i, 3) == "/**" && src.substr(i, 4) != "/**/";
      i += 2;
      while (i < src.size() && src.substr(i, 2) != "*/") advance();
      if (i >= src.size()) {
        result.error = "unterminated block comment starting on line " + std::to_string(start_line);
        return result;
      }
      i += 2;
      emit(doc ? TokenKind::javadoc : TokenKind::block_comment, start, start_line);
    } else if (src.substr(i, 3) == "\"\"\"") {
      i += 3;
      while (i < src.size() && src.substr(i, 3) != "\"\"\"") {
        if (src[i] == '\\') advance();
        if (i < src.size()) advance();
      }
      if (i >= src.size()) {
        result.error = "unterminated text block starting on line " + std::to_string(start_line);
        return result;
      }
      i += 3;
      emit(TokenKind::string_literal, start, start_line);
    } else if (c == '"' || c == '\'') {
      ++i;
      while (i < src.size() && src[i] != c && src[i] != '\n') {
        if (src[i] == '\\') ++i;
        ++i;
      }
      if (i >= src.size() || src[i] != c) {
        result.error = "unterminated literal on line " + std::to_string(start_line);
        return result;
      }
      ++i;
      emit(c == '"' ? TokenKind::string_literal : TokenKind::char_literal, start, start_line);
    } else if (is_word_char(static_cast<unsigned char>(c))) {
      while (i < src.size() && is_word_char(static_cast<unsigned char>(src[i]))) ++i;
      emit(TokenKind::word, start, start_line);
    } else {
      i += src.substr(i, 2) == "->" ? 2 : 1;
      emit(TokenKind::punct, start, start_line);
    }
  }
  return result;
}

std::string comment_text(const Token& comment) {
  std::string_view body = comment.text;
  if (comment.kind == TokenKind::line_comment) {
    body.remove_prefix(2);
  } else {
    body.remove_prefix(comment.kind == TokenKind::javadoc ? 3 : 2);
    body.remove_suffix(2);
  }

  std::string out;
  bool line_start = true;
  for (char ch : body) {
    const auto u = static_cast<unsigned char>(ch);
    if (ch == '\n') {
      line_start = true;
      if (!out.empty() && out.back() != ' ') out += ' ';
      continue;
    }
    if (line_start && (std::isspace(u) || ch == '*')) continue;
    line_start = false;
    if (std::isspace(u)) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += ch;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace sumeval::java
