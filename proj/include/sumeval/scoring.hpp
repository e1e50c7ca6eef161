#pragma once

// Metric matrix construction: every enabled metric group for every pair,
// embedding metrics looked up by "<pair_id>:candidate", "<pair_id>:reference"
// and "<pair_id>:code" item ids.

#include <map>
#include <string>
#include <vector>

#include "sumeval/config.hpp"
#include "sumeval/corpus.hpp"

namespace sumeval {

struct SkippedMetric {
  std::string group;
  std::vector<std::string> columns;
  std::string reason;
};

struct ScoreResult {
  MetricTable table;
  std::vector<SkippedMetric> skipped;        // groups with no usable provider
  std::map<std::string, int> missing_items;  // group -> pairs left empty
};

std::string embedding_item_id(const std::string& pair_id, const char* role);

/// One row per pair, columns of the enabled groups in registry order. A
/// group whose provider is absent from `embeddings` is skipped (empty
/// cells); pairs lacking an embedding item get empty cells in that group.
/// With cfg.strict either situation throws DataError instead.
ScoreResult score_pairs(const std::vector<SummaryPair>& pairs,
                        const std::vector<EmbeddingRecord>& embeddings, const ScoringConfig& cfg);

}  // namespace sumeval
