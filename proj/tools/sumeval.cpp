// sumeval command-line entry point.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 numerical failure.

#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sumeval/artifact.hpp"
#include "sumeval/config.hpp"
#include "sumeval/corpus.hpp"
#include "sumeval/error.hpp"
#include "sumeval/miner.hpp"
#include "sumeval/pipeline.hpp"
#include "sumeval/scoring.hpp"
#include "sumeval/side.hpp"
#include "sumeval/stats/pca.hpp"
#include "sumeval/stats/redun.hpp"
#include "sumeval/stats/rescale.hpp"
#include "sumeval/stats/varclus.hpp"

namespace fs = std::filesystem;
using namespace sumeval;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;

  // mine
  std::string corpus;
  std::string units_out;
  std::optional<double> coverage_threshold;
  bool hard_only = false;
  bool random_only = false;

  // score / side
  std::string pairs;
  std::vector<std::string> embeddings;
  std::vector<std::string> metrics;
  std::string synonyms;
  bool strict = false;
  bool normalize = false;
  bool no_brevity_penalty = false;
  std::optional<int> threads;

  // checkpoint-score
  std::string pos;
  std::string neg;
  bool halved = false;

  // analyze / pipeline
  std::string method;
  std::string matrix;
  std::string evals;
  std::string out_dir;
  std::optional<double> threshold;
  std::string linkage;
  std::string bh_family;

  std::string out;
};

Config base_config(const Options& o) {
  Config cfg = o.config.empty() ? Config{} : load_config(o.config);
  if (o.seed) cfg.seed = cfg.miner.rng_seed = *o.seed;
  if (o.coverage_threshold) cfg.miner.coverage_threshold = *o.coverage_threshold;
  if (!o.metrics.empty()) cfg.scoring.metrics = o.metrics;
  if (!o.synonyms.empty()) cfg.scoring.synonyms = o.synonyms;
  if (o.strict) cfg.scoring.strict = true;
  if (o.normalize) cfg.scoring.normalize = true;
  if (o.no_brevity_penalty) cfg.scoring.brevity_penalty = false;
  if (o.threads) cfg.scoring.threads = *o.threads;
  if (o.halved) cfg.halved = true;
  if (o.threshold) cfg.analysis.redun_threshold = *o.threshold;
  if (!o.linkage.empty()) cfg.analysis.linkage = parse_linkage(o.linkage);
  if (!o.bh_family.empty()) cfg.analysis.bh_family = parse_bh_family(o.bh_family);
  if (!o.matrix.empty()) cfg.pipeline.matrix = o.matrix;
  if (!o.evals.empty()) cfg.pipeline.evaluations = o.evals;
  if (!o.out_dir.empty()) cfg.pipeline.out_dir = o.out_dir;
  cfg.validate();
  return cfg;
}

std::vector<EmbeddingRecord> load_all_embeddings(const std::vector<std::string>& files) {
  std::vector<EmbeddingRecord> all;
  for (const auto& f : files) {
    auto part = load_embeddings(fs::path(f));
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

int run_mine(const Options& o) {
  const Config cfg = base_config(o);
  const MiningMode mode = o.hard_only ? MiningMode::hard_only : o.random_only ? MiningMode::random_only : MiningMode::both;
  const MiningResult mined = mine_directory(o.corpus, cfg.miner, mode);
  for (const auto& d : mined.diagnostics) std::cerr << "warning: " << d << '\n';

  std::ostringstream triplets;
  write_triplets(mined.triplets, triplets);
  write_file_atomic(o.out, triplets.str());
  Json manifest = make_manifest("mine", cfg, {{"corpus", o.corpus}});
  manifest["mode"] = o.hard_only ? "hard-only" : o.random_only ? "random-only" : "both";
  manifest["units"] = mined.units.size();
  manifest["triplets"] = mined.triplets.size();
  manifest["diagnostics"] = mined.diagnostics;
  write_file_atomic(manifest_path(o.out), dump_json(manifest));
  if (!o.units_out.empty()) {
    std::ostringstream units;
    write_corpus(mined.units, units);
    write_file_atomic(o.units_out, units.str());
  }

  std::size_t hard = 0;
  for (const auto& t : mined.triplets) hard += t.negative_kind == NegativeKind::hard ? 1 : 0;
  std::cerr << fmt::format("{} methods, {} triplets ({} random, {} hard)\n", mined.units.size(),
                           mined.triplets.size(), mined.triplets.size() - hard, hard);
  return 0;
}

int write_scores(const std::string& command, const Config& cfg, const Options& o) {
  const auto pairs = load_pairs(fs::path(o.pairs));
  const auto embeddings = load_all_embeddings(o.embeddings);
  const ScoreResult result = score_pairs(pairs, embeddings, cfg.scoring);

  std::ostringstream csv;
  write_metric_csv(result.table, csv);
  std::vector<std::pair<std::string, fs::path>> inputs{{"pairs", o.pairs}};
  for (const auto& e : o.embeddings) inputs.emplace_back("embeddings", e);
  Json manifest = make_manifest(command, cfg, inputs);
  Json skipped = Json::array();
  for (const auto& s : result.skipped) {
    skipped.push_back({{"group", s.group}, {"columns", s.columns}, {"reason", s.reason}});
    std::cerr << "warning: skipped " << s.group << ": " << s.reason << '\n';
  }
  manifest["skipped_metrics"] = skipped;
  Json missing = Json::object();
  for (const auto& [group, count] : result.missing_items) {
    missing[group] = count;
    std::cerr << fmt::format("warning: {}: {} pairs lack embeddings\n", group, count);
  }
  manifest["missing_items"] = missing;
  write_file_atomic(o.out, csv.str());
  write_file_atomic(manifest_path(o.out), dump_json(manifest));
  return 0;
}

int run_score(const Options& o) { return write_scores("score", base_config(o), o); }

int run_side(const Options& o) {
  Config cfg = base_config(o);
  cfg.scoring.metrics = {"side"};
  cfg.scoring.strict = true;
  return write_scores("side", cfg, o);
}

int run_checkpoint_score(const Options& o) {
  const Config cfg = base_config(o);
  const auto ranked = evaluate_checkpoints(read_similarity_csv(fs::path(o.pos)),
                                           read_similarity_csv(fs::path(o.neg)), cfg.halved);
  std::ostringstream out;
  out << "rank,checkpoint_id,step,score\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out << fmt::format("{},{},{},{}\n", i + 1, ranked[i].checkpoint_id, ranked[i].step, format_real(ranked[i].score));
  }
  if (o.out.empty()) {
    std::cout << out.str();
  } else {
    write_file_atomic(o.out, out.str());
  }
  return 0;
}

int run_analyze(const Options& o) {
  const Config cfg = base_config(o);
  if (o.method == "polr" && o.evals.empty()) throw DataError("analyze polr needs --evals");
  const MetricTable table = read_metric_csv(fs::path(o.matrix));
  std::optional<std::vector<EvaluationRecord>> evaluations;
  if (!o.evals.empty()) evaluations = load_evaluations(fs::path(o.evals));
  const AnalysisData data = prepare_analysis(table, evaluations ? &*evaluations : nullptr);
  const DataMatrix rescaled = minmax_rescale(data.metrics, 0.0, 1.0);

  std::vector<std::pair<std::string, fs::path>> inputs{{"matrix", o.matrix}};
  if (!o.evals.empty()) inputs.emplace_back("evaluations", o.evals);
  Json report;
  report["manifest"] = make_manifest("analyze " + o.method, cfg, inputs);
  report["data"] = data_json(data);
  if (o.method == "corr") {
    Warnings warnings;
    report["correlation"] = correlation_json(rescaled, &warnings);
    report["correlation"]["warnings"] = warnings;
  } else if (o.method == "varclus") {
    report["varclus"] = varclus_json(varclus(rescaled, cfg.analysis.linkage));
  } else if (o.method == "redun") {
    report["redun"] = redun_json(redun_select(rescaled, cfg.analysis.redun_threshold), cfg.analysis.redun_threshold);
  } else if (o.method == "pca") {
    report["pca"] = pca_json(pca(rescaled.values), rescaled.column_names);
  } else {
    report["bh_family"] = to_string(cfg.analysis.bh_family);
    report["models"] = models_json(fit_dependent_models(rescaled, data.ratings, cfg.analysis.bh_family));
  }
  write_file_atomic(o.out, dump_json(report));
  return 0;
}

int run_pipeline_command(const Options& o) {
  const Config cfg = base_config(o);
  const Json report = run_pipeline(cfg);
  std::cerr << fmt::format("report written to {}\n", (fs::path(cfg.pipeline.out_dir) / "report.json").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sumeval: code summary metrics, triplet mining and statistical analysis"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;

  auto add_config = [&o](CLI::App* sub) { sub->add_option("--config", o.config, "TOML configuration file")->check(CLI::ExistingFile); };

  auto* mine = app.add_subcommand("mine", "Mine contrastive triplets from a Java source tree");
  add_config(mine);
  mine->add_option("--corpus", o.corpus, "Directory of .java files")->required()->check(CLI::ExistingDirectory);
  mine->add_option("--out", o.out, "Triplet JSONL output")->required();
  mine->add_option("--units", o.units_out, "Also write the extracted methods as corpus JSONL");
  mine->add_option("--coverage-threshold", o.coverage_threshold, "Hard negatives cover strictly less than this share");
  auto* hard = mine->add_flag("--hard-only", o.hard_only, "Only hard negatives");
  auto* random = mine->add_flag("--random-only", o.random_only, "Only random negatives");
  hard->excludes(random);

  auto add_scoring = [&o](CLI::App* sub) {
    sub->add_option("--pairs", o.pairs, "Pairs JSONL")->required()->check(CLI::ExistingFile);
    sub->add_option("--embeddings", o.embeddings, "Embedding JSONL files")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Metric CSV output")->required();
    sub->add_flag("--normalize", o.normalize, "Euclidean distance between unit vectors");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  };
  auto* score = app.add_subcommand("score", "Score summary pairs with every enabled metric");
  add_config(score);
  add_scoring(score);
  score->add_option("--metrics", o.metrics, "Metric groups to enable")->delimiter(',');
  score->add_option("--synonyms", o.synonyms, "METEOR synonym JSONL")->check(CLI::ExistingFile);
  score->add_flag("--strict", o.strict, "Fail instead of skipping metrics that lack inputs");
  score->add_flag("--no-brevity-penalty", o.no_brevity_penalty, "Disable the BLEU brevity penalty");

  auto* side = app.add_subcommand("side", "SIDE scores from side-encoder embeddings");
  add_config(side);
  add_scoring(side);

  auto* ckpt = app.add_subcommand("checkpoint-score", "Rank checkpoints by mean positive-minus-negative similarity");
  add_config(ckpt);
  ckpt->add_option("--pos", o.pos, "Positive-pair similarity CSV")->required()->check(CLI::ExistingFile);
  ckpt->add_option("--neg", o.neg, "Negative-pair similarity CSV")->required()->check(CLI::ExistingFile);
  ckpt->add_flag("--halved", o.halved, "Divide scores by two");
  ckpt->add_option("--out", o.out, "Ranking CSV (default stdout)");

  auto add_analysis = [&o](CLI::App* sub) {
    sub->add_option("--threshold", o.threshold, "redun adjusted R^2 threshold");
    sub->add_option("--linkage", o.linkage, "varclus linkage")->check(CLI::IsMember({"single", "complete", "average"}));
    sub->add_option("--bh-family", o.bh_family, "BH family")->check(CLI::IsMember({"per-model", "all-models"}));
  };
  auto* analyze = app.add_subcommand("analyze", "Run one analysis step on a metric matrix");
  add_config(analyze);
  add_analysis(analyze);
  analyze->add_option("method", o.method, "corr, varclus, redun, pca or polr")
      ->required()
      ->check(CLI::IsMember({"corr", "varclus", "redun", "pca", "polr"}));
  analyze->add_option("--matrix", o.matrix, "Metric CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--evals", o.evals, "Evaluation JSONL")->check(CLI::ExistingFile);
  analyze->add_option("--out", o.out, "Report JSON")->required();

  auto* pipeline = app.add_subcommand("pipeline", "Full analysis chain driven by a config file");
  pipeline->add_option("--config", o.config, "TOML configuration file")->required()->check(CLI::ExistingFile);
  add_analysis(pipeline);
  pipeline->add_option("--matrix", o.matrix, "Metric CSV (overrides the config)");
  pipeline->add_option("--evals", o.evals, "Evaluation JSONL (overrides the config)");
  pipeline->add_option("--out-dir", o.out_dir, "Output directory (overrides the config)");
  for (auto* sub : {mine, score, side, ckpt, analyze, pipeline}) {
    sub->add_option("--seed", o.seed, "Random seed (recorded in every manifest)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*mine) return run_mine(o);
    if (*score) return run_score(o);
    if (*side) return run_side(o);
    if (*ckpt) return run_checkpoint_score(o);
    if (*analyze) return run_analyze(o);
    return run_pipeline_command(o);
  } catch (const NumericalError& e) {
    std::cerr << "sumeval: numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "sumeval: error: " << e.what() << '\n';
    return 2;
  }
}
