#pragma once

// Shared data model and the line-oriented on-disk formats (JSONL records,
// CSV metric matrices) consumed by every other part of the toolkit.

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sumeval {

struct InnerComment {
  std::string text;
  int covered_statements = 0;
  /// covered_statements / statement_count of the enclosing method; 0 when the
  /// method has no statements.
  double coverage_ratio = 0.0;

  bool operator==(const InnerComment&) const = default;
};

struct CodeUnit {
  std::string id;
  std::string source_text;
  std::optional<std::string> summary;
  std::vector<InnerComment> inner_comments;
  int statement_count = 0;
  int token_count_summary = 0;

  bool operator==(const CodeUnit&) const = default;
};

enum class NegativeKind { random, hard };

struct Triplet {
  std::string anchor_id;
  std::string positive;
  std::string negative;
  NegativeKind negative_kind = NegativeKind::random;

  bool operator==(const Triplet&) const = default;
};

/// One human assessment row. Ratings are optional because not every survey
/// participant rated every aspect.
struct EvaluationRecord {
  std::string pair_id;
  std::optional<int> da_score;          // 0..100
  std::optional<int> content_adequacy;  // 0..5
  std::optional<int> conciseness;       // 0..5
  std::optional<int> fluency;           // 0..5
  std::map<std::string, double> metric_values;

  bool operator==(const EvaluationRecord&) const = default;
};

enum class EmbeddingKind { sentence, token_matrix };

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Provider-tagged embedding. Sentence embeddings are stored as a 1 x dim
/// matrix; token matrices hold one row per token.
struct EmbeddingRecord {
  std::string item_id;
  std::string provider;
  EmbeddingKind kind = EmbeddingKind::sentence;
  RowMatrix values;

  Eigen::Index dim() const { return values.cols(); }
  bool operator==(const EmbeddingRecord& other) const {
    return item_id == other.item_id && provider == other.provider && kind == other.kind &&
           values.rows() == other.values.rows() && values.cols() == other.values.cols() &&
           values == other.values;
  }
};

/// A generated summary to score, with its reference and the documented code.
struct SummaryPair {
  std::string pair_id;
  std::string candidate;
  std::string reference;
  std::string code;

  bool operator==(const SummaryPair&) const = default;
};

/// Metric matrix as stored in CSV: one row per pair, NaN marks an empty cell.
struct MetricTable {
  std::vector<std::string> pair_ids;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  bool operator==(const MetricTable& other) const;
};

std::string to_string(NegativeKind kind);
std::string to_string(EmbeddingKind kind);

// Loaders validate every record invariant and throw DataError carrying the
// 1-based line number on the first violation.

std::vector<CodeUnit> load_corpus(std::istream& in);
std::vector<CodeUnit> load_corpus(const std::filesystem::path& path);
void write_corpus(const std::vector<CodeUnit>& units, std::ostream& out);
void write_corpus(const std::vector<CodeUnit>& units, const std::filesystem::path& path);

std::vector<Triplet> load_triplets(std::istream& in);
std::vector<Triplet> load_triplets(const std::filesystem::path& path);
void write_triplets(const std::vector<Triplet>& triplets, std::ostream& out);
void write_triplets(const std::vector<Triplet>& triplets, const std::filesystem::path& path);

std::vector<EvaluationRecord> load_evaluations(std::istream& in);
std::vector<EvaluationRecord> load_evaluations(const std::filesystem::path& path);
void write_evaluations(const std::vector<EvaluationRecord>& records, std::ostream& out);
void write_evaluations(const std::vector<EvaluationRecord>& records,
                       const std::filesystem::path& path);

std::vector<EmbeddingRecord> load_embeddings(std::istream& in);
std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::vector<EmbeddingRecord>& records, std::ostream& out);
void write_embeddings(const std::vector<EmbeddingRecord>& records,
                      const std::filesystem::path& path);

std::vector<SummaryPair> load_pairs(std::istream& in);
std::vector<SummaryPair> load_pairs(const std::filesystem::path& path);
void write_pairs(const std::vector<SummaryPair>& pairs, std::ostream& out);

MetricTable read_metric_csv(std::istream& in);
MetricTable read_metric_csv(const std::filesystem::path& path);
void write_metric_csv(const MetricTable& table, std::ostream& out);

/// One validation similarity from a checkpoint CSV. The file header must
/// name a `similarity` column; `checkpoint_id` and `item_id` are optional.
struct SimilarityRow {
  std::string checkpoint_id;
  std::string item_id;
  double similarity = 0.0;
};

std::vector<SimilarityRow> read_similarity_csv(std::istream& in);
std::vector<SimilarityRow> read_similarity_csv(const std::filesystem::path& path);

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double value);

}  // namespace sumeval
