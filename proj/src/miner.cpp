#include "sumeval/miner.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "java_lexer.hpp"
#include "sumeval/error.hpp"
#include "sumeval/text.hpp"

namespace sumeval {
namespace {

using java::Token;
using java::TokenKind;

constexpr std::size_t npos = static_cast<std::size_t>(-1);

bool is_reserved(std::string_view w) {
  static const std::set<std::string_view> words{
      "if",     "for",  "while", "switch", "catch", "synchronized", "return", "new",
      "throw",  "else", "do",    "try",    "finally", "case",       "default", "assert",
      "super",  "this", "class", "interface", "enum"};
  return words.contains(w);
}

bool is_identifier(const Token& t) {
  return t.kind == TokenKind::word && !std::isdigit(static_cast<unsigned char>(t.text.front())) &&
         !is_reserved(t.text);
}

// Significant (non-comment) token view over a lexed file.
class SignificantTokens {
 public:
  explicit SignificantTokens(const std::vector<Token>& all) : all_(all) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!all[i].is_comment()) index_.push_back(i);
    }
  }
  std::size_t size() const { return index_.size(); }
  const Token& operator[](std::size_t p) const { return all_[index_[p]]; }
  std::size_t raw_index(std::size_t p) const { return index_[p]; }

 private:
  const std::vector<Token>& all_;
  std::vector<std::size_t> index_;
};

std::optional<std::string> check_balanced(const SignificantTokens& sig) {
  int depth = 0;
  for (std::size_t p = 0; p < sig.size(); ++p) {
    if (sig[p].is("{")) {
      ++depth;
    } else if (sig[p].is("}")) {
      if (--depth < 0) return "unmatched '}' on line " + std::to_string(sig[p].line);
    }
  }
  if (depth != 0) return "unbalanced braces: " + std::to_string(depth) + " unclosed '{'";
  return std::nullopt;
}

std::size_t matching_brace(const SignificantTokens& sig, std::size_t open) {
  int depth = 0;
  for (std::size_t p = open; p < sig.size(); ++p) {
    if (sig[p].is("{")) ++depth;
    if (sig[p].is("}") && --depth == 0) return p;
  }
  return npos;
}

using Header = std::vector<const Token*>;

std::optional<std::string> type_declaration_name(const Header& h) {
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const auto& t = *h[k];
    const bool after_dot = k > 0 && h[k - 1]->is(".");
    if (t.kind != TokenKind::word || after_dot) continue;
    if ((t.text == "class" || t.text == "interface" || t.text == "enum") &&
        h[k + 1]->kind == TokenKind::word) {
      return std::string(h[k + 1]->text);
    }
    if (t.text == "record" && k + 2 < h.size() && h[k + 1]->kind == TokenKind::word &&
        (h[k + 2]->is("(") || h[k + 2]->is("<"))) {
      return std::string(h[k + 1]->text);
    }
  }
  return std::nullopt;
}

// Index of the method name inside a member header, or npos when the header
// does not declare a method or constructor.
std::size_t method_name_index(const Header& h, std::string_view enclosing_type) {
  if (h.size() < 3) return npos;
  std::size_t close = h.size() - 1;
  int depth = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k]->is("(")) ++depth;
    if (h[k]->is(")")) --depth;
    if (depth == 0 && h[k]->is("throws")) {
      if (k == 0) return npos;
      close = k - 1;
      break;
    }
  }
  if (!h[close]->is(")")) return npos;
  depth = 0;
  std::size_t open = npos;
  for (std::size_t k = close + 1; k-- > 0;) {
    if (h[k]->is(")")) ++depth;
    if (h[k]->is("(") && --depth == 0) {
      open = k;
      break;
    }
  }
  if (open == npos || open == 0) return npos;
  const std::size_t name = open - 1;
  if (!is_identifier(*h[name])) return npos;

  // Everything before the name, minus annotations, is modifiers and the
  // return type.
  std::size_t remaining = 0;
  for (std::size_t k = 0; k < name;) {
    if (h[k]->is("@") && k + 1 < name && h[k + 1]->text != "interface") {
      k += 2;
      while (k + 1 < name && h[k]->is(".") && h[k + 1]->kind == TokenKind::word) k += 2;
      if (k < name && h[k]->is("(")) {
        int d = 0;
        for (; k < name; ++k) {
          if (h[k]->is("(")) ++d;
          if (h[k]->is(")") && --d == 0) {
            ++k;
            break;
          }
        }
      }
      continue;
    }
    const auto& t = *h[k];
    if (t.is("=") || t.is("new") || t.is("->") || t.is("(") || t.is(")") || t.is(",")) {
      // a comma can only appear inside generic arguments of the return type
      if (!t.is(",")) return npos;
    }
    ++remaining;
    ++k;
  }
  if (remaining == 0 && h[name]->text != enclosing_type) return npos;
  return name;
}

struct MethodBody {
  std::vector<Token> tokens;
  std::size_t open = npos;   // raw index of the body's '{'
  std::size_t close = npos;  // raw index of the body's '}'
  std::vector<std::size_t> terminals;  // raw indices of statement-ending tokens
};

MethodBody analyze_body(std::string_view source) {
  MethodBody body;
  auto lexed = java::lex(source);
  body.tokens = std::move(lexed.tokens);
  const auto& toks = body.tokens;

  int paren = 0;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    if (toks[k].is_comment()) continue;
    if (toks[k].is("(")) ++paren;
    if (toks[k].is(")")) --paren;
    if (paren == 0 && toks[k].is("{")) {
      body.open = k;
      break;
    }
  }
  if (body.open == npos) return body;
  for (std::size_t k = toks.size(); k-- > body.open + 1;) {
    if (!toks[k].is_comment() && toks[k].is("}")) {
      body.close = k;
      break;
    }
  }
  if (body.close == npos) return body;

  std::vector<char> stack;
  const Token* prev = &toks[body.open];
  for (std::size_t k = body.open + 1; k < body.close; ++k) {
    const Token& t = toks[k];
    if (t.is_comment()) continue;
    if (t.is("{")) {
      if (prev->is(")") || prev->is("->") || prev->is("else") || prev->is("try") ||
          prev->is("finally") || prev->is("do")) {
        body.terminals.push_back(k);
      }
      stack.push_back('{');
    } else if (t.is("(") || t.is("[")) {
      stack.push_back(t.text.front());
    } else if (t.is(")") || t.is("]") || t.is("}")) {
      if (!stack.empty()) stack.pop_back();
    } else if (t.is(";") && (stack.empty() || stack.back() == '{')) {
      body.terminals.push_back(k);
    }
    prev = &t;
  }
  return body;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Unbiased draw in [0, bound) from a 64-bit engine; independent of the
// standard library's distribution implementations.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

void MinerConfig::validate() const {
  if (!(coverage_threshold > 0.0 && coverage_threshold <= 1.0)) {
    throw DataError("coverage threshold must lie in (0, 1]");
  }
  for (const auto& k : satd_keywords) {
    if (k.empty() || lowercase(k) != k) throw DataError("SATD keyword '" + k + "' must be lowercase");
  }
  if (min_summary_tokens < 0 || max_summary_tokens < min_summary_tokens) {
    throw DataError("invalid summary token bounds");
  }
}

int count_statements(std::string_view method_source) {
  return static_cast<int>(analyze_body(method_source).terminals.size());
}

std::vector<InnerComment> associate_comments(std::string_view method_source) {
  const MethodBody body = analyze_body(method_source);
  std::vector<InnerComment> out;
  if (body.open == npos || body.close == npos) return out;
  const auto& toks = body.tokens;
  const int total = static_cast<int>(body.terminals.size());
  const std::unordered_set<std::size_t> terminal(body.terminals.begin(), body.terminals.end());

  std::set<int> code_lines;
  for (std::size_t k = body.open; k <= body.close; ++k) {
    if (toks[k].is_comment()) continue;
    for (int l = toks[k].line; l <= toks[k].end_line; ++l) code_lines.insert(l);
  }

  auto emit = [&](std::string text, int covered) {
    if (text.empty()) return;
    const double ratio = total == 0 ? 0.0 : static_cast<double>(covered) / total;
    out.push_back({std::move(text), covered, ratio});
  };

  std::size_t k = body.open + 1;
  while (k < body.close) {
    const Token& t = toks[k];
    if (!t.is_comment()) {
      ++k;
      continue;
    }
    if (code_lines.contains(t.line)) {
      int covered = 0;
      for (auto term : body.terminals) covered += toks[term].line == t.line ? 1 : 0;
      emit(java::comment_text(t), covered);
      ++k;
      continue;
    }

    // Leading comment: merge directly adjacent comment-only lines.
    std::string text = java::comment_text(t);
    std::size_t last = k;
    while (last + 1 < body.close && toks[last + 1].is_comment() &&
           toks[last + 1].line <= toks[last].end_line + 1 && !code_lines.contains(toks[last + 1].line)) {
      ++last;
      const auto more = java::comment_text(toks[last]);
      if (!more.empty()) text += text.empty() ? more : " " + more;
    }

    int covered = 0;
    int prev_end = toks[last].end_line;
    for (std::size_t j = last + 1; j <= body.close; ++j) {
      if (toks[j].line > prev_end + 1) break;  // blank line
      if (j == body.close || (!toks[j].is_comment() && toks[j].is("}"))) break;
      if (terminal.contains(j)) ++covered;
      prev_end = toks[j].end_line;
    }
    emit(std::move(text), covered);
    k = last + 1;
  }
  return out;
}

ExtractionResult extract_methods(std::string_view java_source, std::string_view file_id) {
  ExtractionResult result;
  const std::string where = file_id.empty() ? std::string("<input>") : std::string(file_id);
  const auto lexed = java::lex(java_source);
  if (lexed.error) {
    result.diagnostics.push_back(where + ": skipped, " + *lexed.error);
    return result;
  }
  const auto& toks = lexed.tokens;
  const SignificantTokens sig(toks);
  if (auto problem = check_balanced(sig)) {
    result.diagnostics.push_back(where + ": skipped, " + *problem);
    return result;
  }

  enum class FrameKind { file, type, other };
  struct Frame {
    FrameKind kind;
    std::string type_name;
    std::size_t header_start;
  };
  std::vector<Frame> frames{{FrameKind::file, "", 0}};
  std::unordered_set<std::string> ids;

  for (std::size_t p = 0; p < sig.size(); ++p) {
    const Token& t = sig[p];
    if (t.is(";")) {
      frames.back().header_start = p + 1;
      continue;
    }
    if (t.is("}")) {
      if (frames.size() > 1) frames.pop_back();
      frames.back().header_start = p + 1;
      continue;
    }
    if (!t.is("{")) continue;

    Frame& frame = frames.back();
    if (frame.kind == FrameKind::other) {
      frames.push_back({FrameKind::other, "", p + 1});
      continue;
    }
    Header header;
    for (std::size_t q = frame.header_start; q < p; ++q) header.push_back(&sig[q]);

    if (auto type_name = type_declaration_name(header)) {
      frames.push_back({FrameKind::type, *type_name, p + 1});
      continue;
    }
    const std::size_t name = method_name_index(header, frame.type_name);
    if (name == npos) {
      frames.push_back({FrameKind::other, "", p + 1});
      continue;
    }
    const std::size_t close = matching_brace(sig, p);
    const Token& name_tok = *header[name];
    if (close == npos) {
      result.diagnostics.push_back(where + ": method '" + std::string(name_tok.text) + "' on line " +
                                   std::to_string(name_tok.line) + " skipped, unmatched body brace");
      frames.push_back({FrameKind::other, "", p + 1});
      continue;
    }

    CodeUnit unit;
    const std::size_t begin = sig[frame.header_start].offset;
    const std::size_t end = sig[close].offset + 1;
    unit.source_text = std::string(java_source.substr(begin, end - begin));
    std::string base = (file_id.empty() ? "" : std::string(file_id) + "#") +
                       std::string(name_tok.text) + ":" + std::to_string(name_tok.line);
    unit.id = base;
    for (int dup = 2; !ids.insert(unit.id).second; ++dup) unit.id = base + "~" + std::to_string(dup);

    for (std::size_t r = sig.raw_index(frame.header_start); r-- > 0 && toks[r].is_comment();) {
      if (toks[r].kind == TokenKind::javadoc) {
        auto summary = first_sentence(toks[r].text);
        if (!summary.empty()) {
          unit.token_count_summary = summary_token_count(summary);
          unit.summary = std::move(summary);
        }
        break;
      }
    }
    unit.statement_count = count_statements(unit.source_text);
    unit.inner_comments = associate_comments(unit.source_text);
    result.units.push_back(std::move(unit));

    p = close;
    frame.header_start = close + 1;
  }
  return result;
}

std::vector<InnerComment> filter_satd(const std::vector<InnerComment>& comments,
                                      const MinerConfig& cfg) {
  std::vector<InnerComment> kept;
  for (const auto& c : comments) {
    const auto folded = lowercase(c.text);
    const bool debt = std::any_of(cfg.satd_keywords.begin(), cfg.satd_keywords.end(),
                                  [&folded](const std::string& k) { return folded.find(k) != std::string::npos; });
    if (!debt) kept.push_back(c);
  }
  return kept;
}

bool has_valid_summary(const CodeUnit& unit, const MinerConfig& cfg) {
  return unit.summary.has_value() && unit.token_count_summary >= cfg.min_summary_tokens &&
         unit.token_count_summary <= cfg.max_summary_tokens;
}

std::vector<Triplet> mine_hard_negatives(const std::vector<CodeUnit>& units, const MinerConfig& cfg) {
  cfg.validate();
  std::vector<Triplet> out;
  for (const auto& unit : units) {
    if (!has_valid_summary(unit, cfg)) continue;
    for (const auto& c : filter_satd(unit.inner_comments, cfg)) {
      if (c.coverage_ratio < cfg.coverage_threshold && c.text != *unit.summary) {
        out.push_back({unit.id, *unit.summary, c.text, NegativeKind::hard});
      }
    }
  }
  return out;
}

std::vector<Triplet> mine_random_negatives(const std::vector<CodeUnit>& units,
                                           const MinerConfig& cfg) {
  cfg.validate();
  std::vector<const CodeUnit*> pool;
  for (const auto& u : units) {
    if (has_valid_summary(u, cfg)) pool.push_back(&u);
  }
  std::set<std::string_view> distinct;
  for (const auto* u : pool) distinct.insert(*u->summary);
  if (distinct.size() < 2) {
    throw DataError("random negatives need at least two distinct summaries, found " +
                    std::to_string(distinct.size()));
  }

  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<Triplet> out;
  out.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::string& positive = *pool[i]->summary;
    const std::string* negative = nullptr;
    do {
      auto j = static_cast<std::size_t>(draw_below(rng, pool.size() - 1));
      if (j >= i) ++j;
      negative = &*pool[j]->summary;
    } while (*negative == positive);
    out.push_back({pool[i]->id, positive, *negative, NegativeKind::random});
  }
  return out;
}

MiningResult mine_directory(const std::filesystem::path& root, const MinerConfig& cfg,
                            MiningMode mode) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw DataError("corpus directory '" + root.string() + "' not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") {
      files.push_back(fs::relative(entry.path(), root));
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

  MiningResult result;
  for (const auto& rel : files) {
    std::ifstream in(root / rel, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto extracted = extract_methods(buf.str(), rel.generic_string());
    for (auto& u : extracted.units) result.units.push_back(std::move(u));
    for (auto& d : extracted.diagnostics) result.diagnostics.push_back(std::move(d));
  }
  if (mode != MiningMode::hard_only) result.triplets = mine_random_negatives(result.units, cfg);
  if (mode != MiningMode::random_only) {
    auto hard = mine_hard_negatives(result.units, cfg);
    result.triplets.insert(result.triplets.end(), hard.begin(), hard.end());
  }
  return result;
}

}  // namespace sumeval
