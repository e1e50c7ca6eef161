#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sumeval {

enum class TokenOrigin { summary, code };

/// Lowercase tokens without empty entries.
struct TokenStream {
  std::vector<std::string> tokens;
  TokenOrigin origin = TokenOrigin::summary;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const TokenStream&) const = default;
};

/// Splits on whitespace and punctuation, drops punctuation, lowercases ASCII.
/// Bytes >= 0x80 count as word characters so UTF-8 words stay intact.
TokenStream tokenize_summary(std::string_view text);

/// Like tokenize_summary, but identifiers are further split on camelCase and
/// snake_case boundaries. Literal contents survive as words; operators vanish.
TokenStream tokenize_code(std::string_view text);

/// Classic Porter (1980) stemmer. Expects a lowercase token; tokens of
/// length <= 2 are returned unchanged.
std::string porter_stem(std::string_view token);

/// First sentence of a Javadoc comment: markup and @-tag lines removed, first
/// paragraph only, cut before the first period followed by whitespace or end.
std::string first_sentence(std::string_view doc);

/// ASCII case folding plus whitespace collapsing (runs become one space,
/// leading/trailing whitespace removed). Input to character-level metrics.
std::string fold_and_collapse(std::string_view text);

/// Number of summary tokens under the code tokenizer's identifier splitting.
int summary_token_count(std::string_view summary);

std::string join_tokens(const TokenStream& stream, char sep = ' ');

}  // namespace sumeval
