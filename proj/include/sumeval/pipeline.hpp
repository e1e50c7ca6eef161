#pragma once

// The analysis chain over a metric matrix and its human ratings: complete-row
// filtering, min-max rescaling, correlation clustering, redundancy removal,
// PCA and one ordered logit per rating.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sumeval/artifact.hpp"
#include "sumeval/config.hpp"
#include "sumeval/corpus.hpp"
#include "sumeval/stats/data_matrix.hpp"
#include "sumeval/stats/ordered_logit.hpp"
#include "sumeval/stats/pca.hpp"
#include "sumeval/stats/redun.hpp"
#include "sumeval/stats/varclus.hpp"

namespace sumeval {

struct DependentVariable {
  std::string name;
  double lo;
  double hi;
  std::optional<int> EvaluationRecord::*field;
};

/// da_score [0, 100], content_adequacy, conciseness, fluency [0, 5].
const std::vector<DependentVariable>& dependent_variables();

struct AnalysisData {
  std::vector<std::string> pair_ids;
  DataMatrix metrics;                    // complete rows, raw values
  std::vector<EvaluationRecord> ratings;  // aligned with pair_ids; empty without evaluations
  std::vector<std::string> dropped_columns;
  std::size_t input_rows = 0;
  Warnings warnings;
};

/// Aligns the matrix with the evaluations on pair_id (both id sets must be
/// equal; DataError lists offenders), drops all-empty columns, then rows
/// with any empty cell. Throws DataError when nothing is left.
AnalysisData prepare_analysis(const MetricTable& table, const std::vector<EvaluationRecord>* evaluations);

struct ModelFit {
  std::string dependent;
  std::optional<OrderedLogitFit> fit;
  std::string skipped_reason;
};

/// One proportional-odds model per dependent variable. `predictors` are
/// rescaled to each variable's range; rows without that rating are dropped.
std::vector<ModelFit> fit_dependent_models(const DataMatrix& predictors,
                                           const std::vector<EvaluationRecord>& ratings, BhFamily family);

Json correlation_json(const DataMatrix& data, Warnings* warnings);
Json varclus_json(const Dendrogram& dendrogram);
Json redun_json(const RedunResult& result, double threshold);
Json pca_json(const PcaResult<double>& result, const std::vector<std::string>& names);
Json models_json(const std::vector<ModelFit>& models);
Json data_json(const AnalysisData& data);

/// Full chain driven by cfg.pipeline: writes report.json and
/// rescaled_metrics.csv (selected columns on [0, 1]) into the output
/// directory and returns the report.
Json run_pipeline(const Config& cfg);

}  // namespace sumeval
