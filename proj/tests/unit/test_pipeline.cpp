#include <fstream>
#include <sstream>

#include "../synthetic.hpp"
#include "doctest.h"
#include "sumeval/error.hpp"
#include "sumeval/pipeline.hpp"

using namespace sumeval;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Config write_study(const std::filesystem::path& dir, const synthetic::Study& s) {
  std::ofstream(dir / "matrix.csv") << [&] {
    std::ostringstream o;
    write_metric_csv(s.table, o);
    return o.str();
  }();
  write_evaluations(s.evaluations, dir / "evals.jsonl");
  Config cfg;
  cfg.seed = 1;
  cfg.pipeline = {(dir / "matrix.csv").string(), (dir / "evals.jsonl").string(), (dir / "out").string()};
  return cfg;
}

}  // namespace

TEST_CASE("pipeline on a synthetic study") {
  TempDir tmp("sumeval_pipeline_test");
  const auto study = synthetic::make_study(200, 5);
  Config cfg = write_study(tmp.path, study);
  const Json report = run_pipeline(cfg);

  CHECK(report["data"]["complete_rows"] == 200);
  const auto& models = report["models"];
  REQUIRE(models.size() == 4);
  CHECK(models[0]["dependent"] == "da_score");
  CHECK(models[3]["dependent"] == "fluency");
  CHECK(models[3]["n_obs"] == 200 - 12);  // every 17th fluency rating is missing
  const auto kept = report["redun"]["kept"];
  CHECK(report["redun"]["removed"].size() + kept.size() == 7);
  for (const auto& m : models) {
    CHECK(m["coefficients"].size() == kept.size());
    for (const auto& c : m["coefficients"]) {
      CHECK(c["p_value"].get<double>() >= c["p_value_raw"].get<double>());
      CHECK(c["OR"].get<double>() == doctest::Approx(std::exp(c["value"].get<double>())));
    }
  }
  // ratings driven by the shared latent favour overlap metrics
  CHECK(models[1]["coefficients"][0]["value"].get<double>() > 0);
  CHECK(report["pca"]["cumulative_proportion"].back().get<double>() == doctest::Approx(1.0));
  CHECK(report["varclus"]["merges"].size() == 6);

  const auto csv = read_metric_csv(tmp.path / "out" / "rescaled_metrics.csv");
  CHECK(csv.columns.size() == kept.size());
  CHECK(csv.values.minCoeff() == 0.0);
  CHECK(csv.values.maxCoeff() == 1.0);

  const std::string first = slurp(tmp.path / "out" / "report.json");
  const std::string first_csv = slurp(tmp.path / "out" / "rescaled_metrics.csv");
  run_pipeline(cfg);
  CHECK(slurp(tmp.path / "out" / "report.json") == first);
  CHECK(slurp(tmp.path / "out" / "rescaled_metrics.csv") == first_csv);
  CHECK_FALSE(std::filesystem::exists(tmp.path / "out" / "report.json.tmp"));

  cfg.analysis.bh_family = BhFamily::all_models;
  const Json pooled = run_pipeline(cfg);
  CHECK(pooled["bh_family"] == "all-models");
}

TEST_CASE("preparation drops empty columns then incomplete rows") {
  MetricTable t;
  t.pair_ids = {"a", "b", "c", "d"};
  t.columns = {"x", "empty", "y"};
  const double nan = std::nan("");
  t.values.resize(4, 3);
  t.values << 1, nan, 2, 2, nan, nan, 3, nan, 1, 4, nan, 5;
  const auto d = prepare_analysis(t, nullptr);
  CHECK(d.dropped_columns == std::vector<std::string>{"empty"});
  CHECK(d.pair_ids == std::vector<std::string>{"a", "c", "d"});
  CHECK(d.metrics.column_names == std::vector<std::string>{"x", "y"});
  CHECK(d.input_rows == 4);
  CHECK(d.warnings.size() == 2);
}

TEST_CASE("preparation errors") {
  MetricTable empty;
  CHECK_THROWS_AS(prepare_analysis(empty, nullptr), DataError);

  const auto study = synthetic::make_study(30, 2);
  auto evals = study.evaluations;
  evals.pop_back();
  evals.push_back(EvaluationRecord{"stranger", 50, 3, 3, 3, {}});
  try {
    prepare_analysis(study.table, &evals);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("p29") != std::string::npos);
    CHECK(msg.find("stranger") != std::string::npos);
  }

  MetricTable all_nan = study.table;
  all_nan.values.setConstant(std::nan(""));
  CHECK_THROWS_AS(prepare_analysis(all_nan, nullptr), DataError);
}

TEST_CASE("models with a single observed level are skipped") {
  auto study = synthetic::make_study(40, 3);
  for (auto& e : study.evaluations) e.conciseness = 4;
  DataMatrix x{{"BLEU-1", "SIDE"}, study.table.values(Eigen::all, std::vector<Eigen::Index>{0, 6})};
  const auto models = fit_dependent_models(x, study.evaluations, BhFamily::per_model);
  REQUIRE(models.size() == 4);
  CHECK_FALSE(models[2].fit.has_value());
  CHECK(models[2].skipped_reason.find("levels") != std::string::npos);
  CHECK(models[1].fit.has_value());
  const Json j = models_json(models);
  CHECK(j[2].contains("skipped"));
}

TEST_CASE("scaling a metric column by a positive constant leaves the analysis unchanged") {
  TempDir tmp("sumeval_pipeline_scale");
  auto study = synthetic::make_study(120, 8);
  Config cfg = write_study(tmp.path, study);
  Json base = run_pipeline(cfg);
  const std::string base_csv = slurp(tmp.path / "out" / "rescaled_metrics.csv");
  base.erase("manifest");

  for (const double factor : {4.0, 0.125, 3.0}) {
    CAPTURE(factor);
    auto scaled = study;
    scaled.table.values.col(2) *= factor;
    Config c2 = write_study(tmp.path, scaled);
    Json report = run_pipeline(c2);
    report.erase("manifest");
    if (factor != 3.0) {
      // powers of two keep every rescaled value exact
      CHECK(report == base);
      CHECK(slurp(tmp.path / "out" / "rescaled_metrics.csv") == base_csv);
    } else {
      CHECK(report["redun"] == base["redun"]);
      for (std::size_t m = 0; m < base["models"].size(); ++m) {
        const auto& a = base["models"][m]["coefficients"];
        const auto& b = report["models"][m]["coefficients"];
        for (std::size_t k = 0; k < a.size(); ++k) {
          CHECK(b[k]["value"].get<double>() == doctest::Approx(a[k]["value"].get<double>()).epsilon(1e-9));
        }
      }
    }
  }
}
