#include "sumeval/corpus.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sumeval/error.hpp"
#include "sumeval/registry.hpp"
#include "sumeval/text.hpp"

namespace sumeval {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError(fmt::format("line {}: {}", line, what));
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

// Calls fn(line_number, parsed_object) for every non-blank line.
template <class Fn>
void for_each_jsonl(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(number, std::string("parse error: ") + e.what());
    }
    if (!obj.is_object()) fail(number, "expected a JSON object");
    fn(number, obj);
  }
}

std::string require_string(const json& obj, const char* field, std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) fail(line, fmt::format("field '{}' must be a string", field));
  return it->get<std::string>();
}

long long require_integer(const json& obj, const char* field, std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end() || !it->is_number_integer()) {
    fail(line, fmt::format("field '{}' must be an integer", field));
  }
  return it->get<long long>();
}

std::optional<int> optional_rating(const json& obj, const char* field, int lo, int hi,
                                   std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) fail(line, fmt::format("field '{}' must be an integer", field));
  const auto v = it->get<long long>();
  if (v < lo || v > hi) fail(line, fmt::format("field '{}' = {} outside [{}, {}]", field, v, lo, hi));
  return static_cast<int>(v);
}

void write_line(std::ostream& out, const ordered_json& obj) { out << obj.dump() << '\n'; }

NegativeKind parse_negative_kind(const std::string& s, std::size_t line) {
  if (s == "random") return NegativeKind::random;
  if (s == "hard") return NegativeKind::hard;
  fail(line, "field 'negative_kind' must be \"random\" or \"hard\"");
}

EmbeddingKind parse_embedding_kind(const std::string& s, std::size_t line) {
  if (s == "sentence") return EmbeddingKind::sentence;
  if (s == "token_matrix") return EmbeddingKind::token_matrix;
  fail(line, "field 'kind' must be \"sentence\" or \"token_matrix\"");
}

void validate_triplet(const Triplet& t) {
  if (t.positive == t.negative) {
    throw DataError("triplet for '" + t.anchor_id + "' has identical positive and negative");
  }
}

// Minimal RFC 4180 field splitting: quoted fields may contain commas and
// doubled quotes.
std::vector<std::string> split_csv_row(const std::string& row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const char c = row[i];
    if (quoted) {
      if (c == '"' && i + 1 < row.size() && row[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

bool MetricTable::operator==(const MetricTable& other) const {
  if (pair_ids != other.pair_ids || columns != other.columns) return false;
  if (values.rows() != other.values.rows() || values.cols() != other.values.cols()) return false;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double a = values.data()[i];
    const double b = other.values.data()[i];
    if (!(a == b || (std::isnan(a) && std::isnan(b)))) return false;
  }
  return true;
}

std::string to_string(NegativeKind kind) { return kind == NegativeKind::hard ? "hard" : "random"; }

std::string to_string(EmbeddingKind kind) {
  return kind == EmbeddingKind::sentence ? "sentence" : "token_matrix";
}

std::string format_real(double value) { return fmt::format("{}", value); }

// ---------------------------------------------------------------- corpus

std::vector<CodeUnit> load_corpus(std::istream& in) {
  std::vector<CodeUnit> units;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_jsonl(in, [&](std::size_t line, const json& obj) {
    CodeUnit u;
    u.id = require_string(obj, "id", line);
    if (u.id.empty()) fail(line, "field 'id' must be non-empty");
    if (auto [it, inserted] = seen.emplace(u.id, line); !inserted) {
      fail(line, fmt::format("duplicate id '{}' (first seen on line {})", u.id, it->second));
    }
    u.source_text = require_string(obj, "source_text", line);
    if (const auto s = obj.find("summary"); s != obj.end() && !s->is_null()) {
      if (!s->is_string()) fail(line, "field 'summary' must be a string or null");
      u.summary = s->get<std::string>();
      u.token_count_summary = summary_token_count(*u.summary);
    }
    if (const auto t = obj.find("token_count_summary"); t != obj.end() && !t->is_null()) {
      if (!t->is_number_integer() || t->get<long long>() != u.token_count_summary) {
        fail(line, fmt::format("field 'token_count_summary' disagrees with the summary ({} tokens)",
                               u.token_count_summary));
      }
    }
    const auto count = require_integer(obj, "statement_count", line);
    if (count < 0) fail(line, "field 'statement_count' must be >= 0");
    u.statement_count = static_cast<int>(count);

    if (const auto c = obj.find("inner_comments"); c != obj.end() && !c->is_null()) {
      if (!c->is_array()) fail(line, "field 'inner_comments' must be an array");
      for (const auto& item : *c) {
        if (!item.is_object()) fail(line, "field 'inner_comments' must hold objects");
        InnerComment ic;
        ic.text = require_string(item, "text", line);
        if (ic.text.empty()) fail(line, "field 'inner_comments.text' must be non-empty");
        const auto covered = require_integer(item, "covered_statements", line);
        if (covered < 0 || covered > count) {
          fail(line, "field 'inner_comments.covered_statements' outside [0, statement_count]");
        }
        ic.covered_statements = static_cast<int>(covered);
        ic.coverage_ratio = count == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(count);
        if (const auto r = item.find("coverage_ratio"); r != item.end() && !r->is_null()) {
          if (!r->is_number() || r->get<double>() != ic.coverage_ratio) {
            fail(line, "field 'inner_comments.coverage_ratio' disagrees with covered_statements / statement_count");
          }
        }
        u.inner_comments.push_back(std::move(ic));
      }
    }
    units.push_back(std::move(u));
  });
  return units;
}

std::vector<CodeUnit> load_corpus(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_corpus(in);
}

void write_corpus(const std::vector<CodeUnit>& units, std::ostream& out) {
  for (const auto& u : units) {
    ordered_json obj;
    obj["id"] = u.id;
    obj["source_text"] = u.source_text;
    obj["summary"] = u.summary ? ordered_json(*u.summary) : ordered_json(nullptr);
    auto comments = ordered_json::array();
    for (const auto& c : u.inner_comments) {
      ordered_json ic;
      ic["text"] = c.text;
      ic["covered_statements"] = c.covered_statements;
      ic["coverage_ratio"] = c.coverage_ratio;
      comments.push_back(std::move(ic));
    }
    obj["inner_comments"] = std::move(comments);
    obj["statement_count"] = u.statement_count;
    obj["token_count_summary"] = u.token_count_summary;
    write_line(out, obj);
  }
}

void write_corpus(const std::vector<CodeUnit>& units, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_corpus(units, out);
}

// ---------------------------------------------------------------- triplets

std::vector<Triplet> load_triplets(std::istream& in) {
  std::vector<Triplet> triplets;
  for_each_jsonl(in, [&](std::size_t line, const json& obj) {
    Triplet t;
    t.anchor_id = require_string(obj, "anchor_id", line);
    t.positive = require_string(obj, "positive", line);
    t.negative = require_string(obj, "negative", line);
    t.negative_kind = parse_negative_kind(require_string(obj, "negative_kind", line), line);
    if (t.positive == t.negative) fail(line, "positive and negative are identical");
    triplets.push_back(std::move(t));
  });
  return triplets;
}

std::vector<Triplet> load_triplets(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_triplets(in);
}

void write_triplets(const std::vector<Triplet>& triplets, std::ostream& out) {
  for (const auto& t : triplets) validate_triplet(t);
  for (const auto& t : triplets) {
    ordered_json obj;
    obj["anchor_id"] = t.anchor_id;
    obj["positive"] = t.positive;
    obj["negative"] = t.negative;
    obj["negative_kind"] = to_string(t.negative_kind);
    write_line(out, obj);
  }
}

void write_triplets(const std::vector<Triplet>& triplets, const std::filesystem::path& path) {
  for (const auto& t : triplets) validate_triplet(t);
  auto out = open_out(path);
  write_triplets(triplets, out);
}

// ---------------------------------------------------------------- evaluations

std::vector<EvaluationRecord> load_evaluations(std::istream& in) {
  std::vector<EvaluationRecord> records;
  for_each_jsonl(in, [&](std::size_t line, const json& obj) {
    EvaluationRecord r;
    r.pair_id = require_string(obj, "pair_id", line);
    r.da_score = optional_rating(obj, "da_score", 0, 100, line);
    r.content_adequacy = optional_rating(obj, "content_adequacy", 0, 5, line);
    r.conciseness = optional_rating(obj, "conciseness", 0, 5, line);
    r.fluency = optional_rating(obj, "fluency", 0, 5, line);
    if (const auto m = obj.find("metric_values"); m != obj.end() && !m->is_null()) {
      if (!m->is_object()) fail(line, "field 'metric_values' must be an object");
      for (const auto& [name, value] : m->items()) {
        if (!is_registered_metric(name)) fail(line, fmt::format("unknown metric '{}'", name));
        if (!value.is_number() || !std::isfinite(value.get<double>())) {
          fail(line, fmt::format("metric '{}' must be a finite number", name));
        }
        r.metric_values.emplace(name, value.get<double>());
      }
    }
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<EvaluationRecord> load_evaluations(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_evaluations(in);
}

void write_evaluations(const std::vector<EvaluationRecord>& records, std::ostream& out) {
  auto rating = [](const std::optional<int>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  for (const auto& r : records) {
    ordered_json obj;
    obj["pair_id"] = r.pair_id;
    obj["da_score"] = rating(r.da_score);
    obj["content_adequacy"] = rating(r.content_adequacy);
    obj["conciseness"] = rating(r.conciseness);
    obj["fluency"] = rating(r.fluency);
    auto metrics = ordered_json::object();
    for (const auto& [name, value] : r.metric_values) metrics[name] = value;
    obj["metric_values"] = std::move(metrics);
    write_line(out, obj);
  }
}

void write_evaluations(const std::vector<EvaluationRecord>& records,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  write_evaluations(records, out);
}

// ---------------------------------------------------------------- embeddings

std::vector<EmbeddingRecord> load_embeddings(std::istream& in) {
  std::vector<EmbeddingRecord> records;
  std::unordered_map<std::string, Eigen::Index> dims;
  std::set<std::pair<std::string, std::string>> keys;
  for_each_jsonl(in, [&](std::size_t line, const json& obj) {
    EmbeddingRecord r;
    r.item_id = require_string(obj, "item_id", line);
    r.provider = require_string(obj, "provider", line);
    if (r.provider.empty()) fail(line, "field 'provider' must be non-empty");
    r.kind = parse_embedding_kind(require_string(obj, "kind", line), line);
    const auto rows = require_integer(obj, "rows", line);
    const auto cols = require_integer(obj, "cols", line);
    if (rows < 1 || cols < 1) fail(line, "fields 'rows' and 'cols' must be >= 1");
    if (r.kind == EmbeddingKind::sentence && rows != 1) fail(line, "sentence embeddings need rows = 1");
    const auto v = obj.find("values");
    if (v == obj.end() || !v->is_array()) fail(line, "field 'values' must be an array");
    if (v->size() != static_cast<std::size_t>(rows * cols)) {
      fail(line, fmt::format("field 'values' has {} entries, expected rows*cols = {}", v->size(),
                             rows * cols));
    }
    r.values.resize(rows, cols);
    Eigen::Index i = 0;
    for (const auto& x : *v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) fail(line, "field 'values' holds a non-finite entry");
      r.values.data()[i++] = x.get<double>();
    }
    if (auto [it, inserted] = dims.emplace(r.provider, cols); !inserted && it->second != cols) {
      fail(line, fmt::format("provider '{}' dimension {} differs from earlier {}", r.provider, cols,
                             it->second));
    }
    if (!keys.emplace(r.provider, r.item_id).second) {
      fail(line, fmt::format("duplicate item '{}' for provider '{}'", r.item_id, r.provider));
    }
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_embeddings(in);
}

void write_embeddings(const std::vector<EmbeddingRecord>& records, std::ostream& out) {
  for (const auto& r : records) {
    ordered_json obj;
    obj["item_id"] = r.item_id;
    obj["provider"] = r.provider;
    obj["kind"] = to_string(r.kind);
    obj["rows"] = r.values.rows();
    obj["cols"] = r.values.cols();
    auto values = ordered_json::array();
    for (Eigen::Index i = 0; i < r.values.size(); ++i) values.push_back(r.values.data()[i]);
    obj["values"] = std::move(values);
    write_line(out, obj);
  }
}

void write_embeddings(const std::vector<EmbeddingRecord>& records,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  write_embeddings(records, out);
}

// ---------------------------------------------------------------- pairs

std::vector<SummaryPair> load_pairs(std::istream& in) {
  std::vector<SummaryPair> pairs;
  std::unordered_set<std::string> seen;
  for_each_jsonl(in, [&](std::size_t line, const json& obj) {
    SummaryPair p;
    p.pair_id = require_string(obj, "pair_id", line);
    if (!seen.insert(p.pair_id).second) fail(line, fmt::format("duplicate pair_id '{}'", p.pair_id));
    p.candidate = require_string(obj, "candidate", line);
    p.reference = require_string(obj, "reference", line);
    if (obj.contains("code")) p.code = require_string(obj, "code", line);
    pairs.push_back(std::move(p));
  });
  return pairs;
}

std::vector<SummaryPair> load_pairs(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_pairs(in);
}

void write_pairs(const std::vector<SummaryPair>& pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    ordered_json obj;
    obj["pair_id"] = p.pair_id;
    obj["candidate"] = p.candidate;
    obj["reference"] = p.reference;
    obj["code"] = p.code;
    write_line(out, obj);
  }
}

// ---------------------------------------------------------------- metric CSV

MetricTable read_metric_csv(std::istream& in) {
  MetricTable table;
  std::string row;
  std::size_t line = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    auto fields = split_csv_row(row);
    if (table.columns.empty() && line == 1) {
      if (fields.empty() || fields.front() != "pair_id") fail(line, "header must start with 'pair_id'");
      table.columns.assign(fields.begin() + 1, fields.end());
      std::unordered_set<std::string> unique(table.columns.begin(), table.columns.end());
      if (unique.size() != table.columns.size()) fail(line, "duplicate column name in header");
      continue;
    }
    if (fields.size() != table.columns.size() + 1) {
      fail(line, fmt::format("expected {} fields, found {}", table.columns.size() + 1, fields.size()));
    }
    table.pair_ids.push_back(fields.front());
    std::vector<double> values;
    values.reserve(table.columns.size());
    for (std::size_t j = 1; j < fields.size(); ++j) {
      if (fields[j].empty()) {
        values.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[j], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != fields[j].size() || !std::isfinite(v)) {
        fail(line, fmt::format("column '{}' holds non-numeric '{}'", table.columns[j - 1], fields[j]));
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (line == 0) throw DataError("metric matrix is empty (no header)");
  std::unordered_set<std::string> unique(table.pair_ids.begin(), table.pair_ids.end());
  if (unique.size() != table.pair_ids.size()) throw DataError("duplicate pair_id in metric matrix");
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

MetricTable read_metric_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_metric_csv(in);
}

void write_metric_csv(const MetricTable& table, std::ostream& out) {
  out << "pair_id";
  for (const auto& c : table.columns) out << ',' << csv_field(c);
  out << '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    out << csv_field(table.pair_ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      out << ',';
      const double v = table.values(i, j);
      if (!std::isnan(v)) out << format_real(v);
    }
    out << '\n';
  }
}

// ------------------------------------------------------ checkpoint similarities

std::vector<SimilarityRow> read_similarity_csv(std::istream& in) {
  std::vector<SimilarityRow> rows;
  std::string row;
  std::size_t line = 0;
  int sim_col = -1;
  int ckpt_col = -1;
  int item_col = -1;
  std::size_t width = 0;
  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    const auto fields = split_csv_row(row);
    if (width == 0) {
      width = fields.size();
      for (std::size_t j = 0; j < fields.size(); ++j) {
        if (fields[j] == "similarity") sim_col = static_cast<int>(j);
        if (fields[j] == "checkpoint_id") ckpt_col = static_cast<int>(j);
        if (fields[j] == "item_id") item_col = static_cast<int>(j);
      }
      if (sim_col < 0) fail(line, "header must contain a 'similarity' column");
      continue;
    }
    if (fields.size() != width) fail(line, fmt::format("expected {} fields, found {}", width, fields.size()));
    SimilarityRow r;
    if (ckpt_col >= 0) r.checkpoint_id = fields[static_cast<std::size_t>(ckpt_col)];
    if (item_col >= 0) r.item_id = fields[static_cast<std::size_t>(item_col)];
    const auto& text = fields[static_cast<std::size_t>(sim_col)];
    std::size_t used = 0;
    try {
      r.similarity = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (text.empty() || used != text.size() || !std::isfinite(r.similarity)) {
      fail(line, "similarity '" + text + "' is not a finite number");
    }
    rows.push_back(std::move(r));
  }
  if (width == 0) throw DataError("similarity file is empty (no header)");
  return rows;
}

std::vector<SimilarityRow> read_similarity_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_similarity_csv(in);
}

}  // namespace sumeval
