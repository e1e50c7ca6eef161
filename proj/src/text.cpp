#include "sumeval/text.hpp"

#include <cctype>
#include <regex>

namespace sumeval {
namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower_or_digit(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Splits one identifier-like run on camelCase humps, e.g. "parseHTTPHeader"
// -> parse, HTTP, Header.
void split_camel(std::string_view word, std::vector<std::string>& out) {
  std::size_t start = 0;
  for (std::size_t i = 1; i < word.size(); ++i) {
    const auto prev = static_cast<unsigned char>(word[i - 1]);
    const auto cur = static_cast<unsigned char>(word[i]);
    const bool next_lower = i + 1 < word.size() && std::islower(static_cast<unsigned char>(word[i + 1]));
    const bool hump = is_upper(cur) && (is_lower_or_digit(prev) || (is_upper(prev) && next_lower));
    if (hump) {
      out.push_back(lower(word.substr(start, i - start)));
      start = i;
    }
  }
  if (start < word.size()) out.push_back(lower(word.substr(start)));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Porter stemmer over b[0..k], following the reference implementation's
// structure (including its bli->ble and logi->log departures).
class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  std::string b_;
  int k_;
  int j_ = 0;

  bool cons(int i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int measure() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_consonant(int j) const {
    return j >= 1 && b_[static_cast<std::size_t>(j)] == b_[static_cast<std::size_t>(j - 1)] && cons(j);
  }

  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = b_[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
    k_ = j_ + static_cast<int>(s.size());
    b_.resize(static_cast<std::size_t>(k_ + 1));
  }

  void replace_if_measured(std::string_view s) {
    if (measure() > 0) set_to(s);
  }

  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (at(k_ - 1) != 's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (measure() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(k_)) {
        --k_;
        const char ch = at(k_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (j_ = k_, measure() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  bool try_rules(std::initializer_list<std::pair<std::string_view, std::string_view>> rules) {
    for (const auto& [suffix, repl] : rules) {
      if (ends(suffix)) {
        replace_if_measured(repl);
        return true;
      }
    }
    return false;
  }

  void step2() {
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case 'a': try_rules({{"ational", "ate"}, {"tional", "tion"}}); break;
      case 'c': try_rules({{"enci", "ence"}, {"anci", "ance"}}); break;
      case 'e': try_rules({{"izer", "ize"}}); break;
      case 'l':
        try_rules({{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}});
        break;
      case 'o': try_rules({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}}); break;
      case 's':
        try_rules({{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}});
        break;
      case 't': try_rules({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}}); break;
      case 'g': try_rules({{"logi", "log"}}); break;
      default: break;
    }
  }

  void step3() {
    switch (at(k_)) {
      case 'e': try_rules({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}}); break;
      case 'i': try_rules({{"iciti", "ic"}}); break;
      case 'l': try_rules({{"ical", "ic"}, {"ful", ""}}); break;
      case 's': try_rules({{"ness", ""}}); break;
      default: break;
    }
  }

  bool ends_any(std::initializer_list<std::string_view> suffixes) {
    for (auto s : suffixes) {
      if (ends(s)) return true;
    }
    return false;
  }

  void step4() {
    if (k_ < 1) return;
    bool matched = false;
    switch (at(k_ - 1)) {
      case 'a': matched = ends("al"); break;
      case 'c': matched = ends_any({"ance", "ence"}); break;
      case 'e': matched = ends("er"); break;
      case 'i': matched = ends("ic"); break;
      case 'l': matched = ends_any({"able", "ible"}); break;
      case 'n': matched = ends_any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) {
          matched = true;
        } else {
          matched = ends("ou");
        }
        break;
      case 's': matched = ends("ism"); break;
      case 't': matched = ends_any({"ate", "iti"}); break;
      case 'u': matched = ends("ous"); break;
      case 'v': matched = ends("ive"); break;
      case 'z': matched = ends("ize"); break;
      default: break;
    }
    if (matched && measure() > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int a = measure();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_consonant(k_) && measure() > 1) --k_;
  }
};

}  // namespace

TokenStream tokenize_summary(std::string_view text) {
  TokenStream out{{}, TokenOrigin::summary};
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    out.tokens.push_back(lower(text.substr(start, i - start)));
  }
  return out;
}

TokenStream tokenize_code(std::string_view text) {
  TokenStream out{{}, TokenOrigin::code};
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (!is_word_byte(c) && c != '_') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() &&
           (is_word_byte(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
      ++i;
    }
    const std::string_view run = text.substr(start, i - start);
    std::size_t piece = 0;
    while (piece <= run.size()) {
      const std::size_t underscore = run.find('_', piece);
      const std::size_t end = underscore == std::string_view::npos ? run.size() : underscore;
      if (end > piece) split_camel(run.substr(piece, end - piece), out.tokens);
      piece = end + 1;
    }
  }
  return out;
}

std::string porter_stem(std::string_view token) {
  if (token.size() <= 2) return std::string(token);
  return PorterStemmer(std::string(token)).run();
}

std::string first_sentence(std::string_view doc) {
  std::string_view body = trim(doc);
  if (body.starts_with("/**")) {
    body.remove_prefix(3);
  } else if (body.starts_with("/*")) {
    body.remove_prefix(2);
  }
  if (body.ends_with("*/")) body.remove_suffix(2);

  static const std::regex inline_tag(R"(\{@[A-Za-z]+\s*([^}]*)\})");

  std::string paragraph;
  bool started = false;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t nl = body.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? body.size() : nl;
    std::string_view line = trim(body.substr(pos, end - pos));
    while (!line.empty() && line.front() == '*') line.remove_prefix(1);
    line = trim(line);
    pos = end + 1;

    if (line.empty()) {
      if (started) break;
      continue;
    }
    if (line.front() == '@') break;
    started = true;
    if (!paragraph.empty()) paragraph += ' ';
    paragraph += line;
    if (nl == std::string_view::npos) break;
  }

  paragraph = std::regex_replace(paragraph, inline_tag, "$1");
  std::string collapsed;
  for (char c : paragraph) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!collapsed.empty() && collapsed.back() != ' ') collapsed += ' ';
    } else {
      collapsed += c;
    }
  }
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    if (collapsed[i] == '.' && (i + 1 == collapsed.size() || collapsed[i + 1] == ' ')) {
      collapsed.resize(i);
      break;
    }
  }
  return std::string(trim(collapsed));
}

std::string fold_and_collapse(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += static_cast<char>(std::tolower(u));
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

int summary_token_count(std::string_view summary) {
  return static_cast<int>(tokenize_code(summary).size());
}

std::string join_tokens(const TokenStream& stream, char sep) {
  std::string out;
  for (const auto& t : stream.tokens) {
    if (!out.empty()) out += sep;
    out += t;
  }
  return out;
}

}  // namespace sumeval
