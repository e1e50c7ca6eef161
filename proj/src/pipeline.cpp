#include "sumeval/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "sumeval/error.hpp"
#include "sumeval/hash.hpp"
#include "sumeval/stats/multiple_testing.hpp"
#include "sumeval/stats/rescale.hpp"
#include "sumeval/stats/spearman.hpp"

namespace sumeval {
namespace {

constexpr std::size_t kMaxListed = 10;

std::string list_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < kMaxListed; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > kMaxListed) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void warn_constant_columns(const DataMatrix& data, Warnings& warnings) {
  for (Eigen::Index j = 0; j < data.n_cols(); ++j) {
    if (data.values.col(j).minCoeff() == data.values.col(j).maxCoeff()) {
      warnings.push_back("metric '" + data.column_names[static_cast<std::size_t>(j)] + "' is constant");
    }
  }
}

}  // namespace

const std::vector<DependentVariable>& dependent_variables() {
  static const std::vector<DependentVariable> dvs{
      {"da_score", 0.0, 100.0, &EvaluationRecord::da_score},
      {"content_adequacy", 0.0, 5.0, &EvaluationRecord::content_adequacy},
      {"conciseness", 0.0, 5.0, &EvaluationRecord::conciseness},
      {"fluency", 0.0, 5.0, &EvaluationRecord::fluency},
  };
  return dvs;
}

AnalysisData prepare_analysis(const MetricTable& table, const std::vector<EvaluationRecord>* evaluations) {
  if (table.values.rows() == 0 || table.values.cols() == 0) throw DataError("metric matrix is empty");
  AnalysisData out;
  out.input_rows = table.pair_ids.size();

  std::vector<const EvaluationRecord*> aligned;
  if (evaluations != nullptr) {
    std::unordered_map<std::string, const EvaluationRecord*> by_id;
    for (const auto& e : *evaluations) by_id.emplace(e.pair_id, &e);
    std::vector<std::string> unrated;
    for (const auto& id : table.pair_ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        unrated.push_back(id);
      } else {
        aligned.push_back(it->second);
      }
    }
    const std::set<std::string> scored(table.pair_ids.begin(), table.pair_ids.end());
    std::vector<std::string> unscored;
    for (const auto& e : *evaluations) {
      if (scored.count(e.pair_id) == 0) unscored.push_back(e.pair_id);
    }
    if (!unrated.empty() || !unscored.empty()) {
      std::string msg = "metric matrix and evaluations are misaligned";
      if (!unrated.empty()) msg += "; pair ids without evaluations: " + list_ids(unrated);
      if (!unscored.empty()) msg += "; evaluated pair ids missing from the matrix: " + list_ids(unscored);
      throw DataError(msg);
    }
  }

  std::vector<std::string> kept_columns;
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    const auto& name = table.columns[static_cast<std::size_t>(j)];
    if (table.values.col(j).array().isNaN().all()) {
      out.dropped_columns.push_back(name);
    } else {
      kept_columns.push_back(name);
    }
  }
  if (kept_columns.empty()) throw DataError("metric matrix has no non-empty column");
  const DataMatrix full{table.columns, table.values};
  const DataMatrix kept = full.select(kept_columns);

  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < kept.n_rows(); ++i) {
    if (!kept.values.row(i).array().isNaN().any()) rows.push_back(i);
  }
  if (rows.empty()) throw DataError("no pair has a value for every metric");
  out.metrics.column_names = kept_columns;
  out.metrics.values.resize(static_cast<Eigen::Index>(rows.size()), kept.n_cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = rows[r];
    out.metrics.values.row(static_cast<Eigen::Index>(r)) = kept.values.row(i);
    out.pair_ids.push_back(table.pair_ids[static_cast<std::size_t>(i)]);
    if (!aligned.empty()) out.ratings.push_back(*aligned[static_cast<std::size_t>(i)]);
  }
  if (!out.dropped_columns.empty()) {
    out.warnings.push_back("dropped empty metric columns: " + list_ids(out.dropped_columns));
  }
  if (rows.size() < out.input_rows) {
    out.warnings.push_back("dropped " + std::to_string(out.input_rows - rows.size()) +
                           " pairs with incomplete metric values");
  }
  return out;
}

std::vector<ModelFit> fit_dependent_models(const DataMatrix& predictors,
                                           const std::vector<EvaluationRecord>& ratings, BhFamily family) {
  if (static_cast<Eigen::Index>(ratings.size()) != predictors.n_rows()) {
    throw DataError("ratings and predictor rows differ in count");
  }
  std::vector<ModelFit> models;
  for (const auto& dv : dependent_variables()) {
    ModelFit model{dv.name, std::nullopt, {}};
    Eigen::VectorXd y(predictors.n_rows());
    std::set<int> levels;
    for (std::size_t i = 0; i < ratings.size(); ++i) {
      const auto& value = ratings[i].*dv.field;
      y(static_cast<Eigen::Index>(i)) = value ? static_cast<double>(*value) : std::nan("");
      if (value) levels.insert(*value);
    }
    if (levels.size() < 2) {
      model.skipped_reason = "fewer than 2 distinct observed levels";
      models.push_back(std::move(model));
      continue;
    }
    const Eigen::MatrixXd x = minmax_rescale(predictors.values, dv.lo, dv.hi);
    model.fit = ordered_logit_fit(x, y, predictors.column_names);
    models.push_back(std::move(model));
  }

  if (family == BhFamily::all_models) {
    std::vector<double> pooled;
    for (const auto& m : models) {
      if (m.fit) pooled.insert(pooled.end(), m.fit->p_values_raw.data(),
                               m.fit->p_values_raw.data() + m.fit->p_values_raw.size());
    }
    const auto adjusted = benjamini_hochberg(pooled);
    std::size_t k = 0;
    for (auto& m : models) {
      if (!m.fit) continue;
      for (Eigen::Index j = 0; j < m.fit->p_values_bh.size(); ++j) m.fit->p_values_bh(j) = adjusted[k++];
    }
  }
  return models;
}

Json correlation_json(const DataMatrix& data, Warnings* warnings) {
  const Eigen::MatrixXd rho = spearman_matrix(data.values, warnings);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) rows.push_back(vector_json(rho.row(i).transpose()));
  Json out;
  out["method"] = "spearman";
  out["columns"] = data.column_names;
  out["rho"] = rows;
  return out;
}

Json varclus_json(const Dendrogram& dendrogram) {
  Json merges = Json::array();
  for (const auto& m : dendrogram.merges) {
    std::vector<std::string> members;
    for (int v : m.members) members.push_back(dendrogram.labels[static_cast<std::size_t>(v)]);
    Json j;
    j["left"] = m.left;
    j["right"] = m.right;
    j["height"] = m.height;
    j["similarity"] = 1.0 - m.height;
    j["members"] = members;
    merges.push_back(j);
  }
  Json out;
  out["similarity"] = "spearman_rho_squared";
  out["labels"] = dendrogram.labels;
  out["merges"] = merges;
  out["warnings"] = dendrogram.warnings;
  return out;
}

Json redun_json(const RedunResult& result, double threshold) {
  Json removed = Json::array();
  for (const auto& step : result.removed) removed.push_back({{"name", step.name}, {"adjusted_r2", step.adjusted_r2}});
  Json out;
  out["model"] = "ols";
  out["r2_threshold"] = threshold;
  out["kept"] = result.kept;
  out["removed"] = removed;
  out["warnings"] = result.warnings;
  return out;
}

Json pca_json(const PcaResult<double>& result, const std::vector<std::string>& names) {
  std::vector<std::string> pcs;
  for (Eigen::Index k = 0; k < result.components.cols(); ++k) pcs.push_back("PC" + std::to_string(k + 1));
  Json loadings = Json::array();
  for (Eigen::Index i = 0; i < result.components.rows(); ++i) {
    loadings.push_back({{"metric", names[static_cast<std::size_t>(i)]},
                        {"values", vector_json(result.components.row(i).transpose())}});
  }
  Json out;
  out["components"] = pcs;
  out["loadings"] = loadings;
  out["singular_values"] = vector_json(result.singular_values);
  out["proportion_of_variance"] = vector_json(result.proportion);
  out["cumulative_proportion"] = vector_json(result.cumulative);
  return out;
}

Json models_json(const std::vector<ModelFit>& models) {
  Json out = Json::array();
  for (const auto& m : models) {
    Json j;
    j["dependent"] = m.dependent;
    if (!m.fit) {
      j["skipped"] = m.skipped_reason;
      out.push_back(j);
      continue;
    }
    const auto& f = *m.fit;
    j["n_obs"] = f.n_obs;
    j["levels"] = f.levels;
    j["log_likelihood"] = f.log_likelihood;
    j["aic"] = f.aic;
    j["iterations"] = f.iterations;
    Json coefs = Json::array();
    for (Eigen::Index k = 0; k < f.coefficients.size(); ++k) {
      Json c;
      c["variable"] = f.names[static_cast<std::size_t>(k)];
      c["OR"] = f.odds_ratios(k);
      c["value"] = f.coefficients(k);
      c["std_error"] = f.std_errors(k);
      c["t_value"] = f.t_values(k);
      c["p_value"] = f.p_values_bh(k);
      c["p_value_raw"] = f.p_values_raw(k);
      coefs.push_back(c);
    }
    j["coefficients"] = coefs;
    Json cuts = Json::array();
    for (Eigen::Index k = 0; k < f.intercepts.size(); ++k) {
      const auto lo = static_cast<std::size_t>(k);
      cuts.push_back({{"threshold", format_real(f.levels[lo]) + "|" + format_real(f.levels[lo + 1])},
                      {"value", f.intercepts(k)},
                      {"std_error", f.intercept_std_errors(k)}});
    }
    j["intercepts"] = cuts;
    out.push_back(j);
  }
  return out;
}

Json data_json(const AnalysisData& data) {
  Json out;
  out["input_rows"] = data.input_rows;
  out["complete_rows"] = data.pair_ids.size();
  out["metrics"] = data.metrics.column_names;
  out["dropped_columns"] = data.dropped_columns;
  out["warnings"] = data.warnings;
  return out;
}

Json run_pipeline(const Config& cfg) {
  const auto& p = cfg.pipeline;
  if (p.matrix.empty() || p.evaluations.empty() || p.out_dir.empty()) {
    throw DataError("pipeline needs matrix, evaluations and out_dir");
  }
  const MetricTable table = read_metric_csv(std::filesystem::path(p.matrix));
  const auto evaluations = load_evaluations(std::filesystem::path(p.evaluations));
  AnalysisData data = prepare_analysis(table, &evaluations);

  // R^2, Spearman and the clustering are invariant under the per-column
  // affine rescaling, so rescaling first changes no selection.
  warn_constant_columns(data.metrics, data.warnings);
  const DataMatrix rescaled = minmax_rescale(data.metrics, 0.0, 1.0);

  Json report;
  report["manifest"] = make_manifest("pipeline", cfg, {{"matrix", p.matrix}, {"evaluations", p.evaluations}});
  Json correlation = correlation_json(rescaled, nullptr);
  Json clustering = rescaled.n_cols() >= 2 ? varclus_json(varclus(rescaled, cfg.analysis.linkage))
                                           : Json{{"skipped", "fewer than 2 metrics"}};
  const RedunResult selection = redun_select(rescaled, cfg.analysis.redun_threshold);
  const DataMatrix selected = rescaled.select(selection.kept);
  const auto components = pca(selected.values);
  const auto models = fit_dependent_models(selected, data.ratings, cfg.analysis.bh_family);

  MetricTable artifact{data.pair_ids, selected.column_names, selected.values};
  std::ostringstream csv;
  write_metric_csv(artifact, csv);
  const std::filesystem::path out_dir(p.out_dir);
  write_file_atomic(out_dir / "rescaled_metrics.csv", csv.str());

  report["data"] = data_json(data);
  report["correlation"] = correlation;
  report["varclus"] = clustering;
  report["redun"] = redun_json(selection, cfg.analysis.redun_threshold);
  report["pca"] = pca_json(components, selected.column_names);
  report["models"] = models_json(models);
  report["bh_family"] = to_string(cfg.analysis.bh_family);
  report["artifacts"] = Json::array({{{"file", "rescaled_metrics.csv"}, {"sha256", sha256_hex(csv.str())}}});
  write_file_atomic(out_dir / "report.json", dump_json(report));
  return report;
}

}  // namespace sumeval
