#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sumeval {

/// A family of metric columns that is enabled or skipped as a unit.
/// `provider` is empty for natively computed groups; otherwise it names the
/// embedding provider whose records the group consumes.
struct MetricGroup {
  std::string name;
  std::string provider;
  std::vector<std::string> columns;
};

/// All metric groups in canonical CSV column order.
const std::vector<MetricGroup>& metric_groups();

/// Flattened column names of every registered metric, canonical order.
const std::vector<std::string>& registered_metrics();

bool is_registered_metric(std::string_view name);

/// Group lookup by name ("overlap", "tfidf", "bertscore", "sentencebert",
/// "infersent", "use", "codet5p", "side"). Throws DataError on unknown names.
const MetricGroup& metric_group(std::string_view name);

}  // namespace sumeval
