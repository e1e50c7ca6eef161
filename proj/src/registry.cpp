#include "sumeval/registry.hpp"

#include <algorithm>

#include "sumeval/error.hpp"

namespace sumeval {
namespace {

std::vector<std::string> overlap_columns() {
  std::vector<std::string> cols;
  for (int n = 1; n <= 4; ++n) cols.push_back("BLEU-" + std::to_string(n));
  cols.emplace_back("BLEU-A");
  auto prf = [&cols](const std::string& stem) {
    for (const char* part : {"P", "R", "F1"}) cols.push_back(stem + "-" + part);
  };
  for (int n = 1; n <= 4; ++n) prf("ROUGE-" + std::to_string(n));
  prf("ROUGE-L");
  prf("ROUGE-W");
  for (const char* name : {"METEOR", "chrF", "Jaccard", "c_coeff"}) cols.emplace_back(name);
  return cols;
}

std::vector<MetricGroup> build_groups() {
  return {
      {"overlap", "", overlap_columns()},
      {"tfidf", "", {"TF-IDF_CS", "TF-IDF_ED"}},
      {"bertscore", "bert-token", {"BERTScore-P", "BERTScore-R", "BERTScore-F1"}},
      {"sentencebert", "sentence-bert", {"SentenceBERT_CS", "SentenceBERT_ED"}},
      {"infersent", "infersent", {"InferSent_CS", "InferSent_ED"}},
      {"use", "use", {"USE_CS", "USE_ED"}},
      {"codet5p", "codet5p", {"CodeT5-plus_CS"}},
      {"side", "side-encoder", {"SIDE"}},
  };
}

}  // namespace

const std::vector<MetricGroup>& metric_groups() {
  static const std::vector<MetricGroup> groups = build_groups();
  return groups;
}

const std::vector<std::string>& registered_metrics() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> all;
    for (const auto& g : metric_groups()) all.insert(all.end(), g.columns.begin(), g.columns.end());
    return all;
  }();
  return names;
}

bool is_registered_metric(std::string_view name) {
  const auto& names = registered_metrics();
  return std::find(names.begin(), names.end(), name) != names.end();
}

const MetricGroup& metric_group(std::string_view name) {
  for (const auto& g : metric_groups()) {
    if (g.name == name) return g;
  }
  throw DataError("unknown metric group '" + std::string(name) + "'");
}

}  // namespace sumeval
