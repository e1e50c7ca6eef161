#pragma once

#include <string>
#include <vector>

#include "sumeval/stats/data_matrix.hpp"

namespace sumeval {

struct RedunStep {
  std::string name;
  double adjusted_r2 = 0.0;
};

struct RedunResult {
  std::vector<std::string> kept;
  std::vector<RedunStep> removed;  // in removal order
  Warnings warnings;
};

/// Adjusted R^2 of an OLS fit (with intercept) of `target` on `predictors`.
/// A rank-deficient design falls back to ridge with penalty 1e-8 and records
/// a warning; a constant target counts as perfectly predictable.
double adjusted_r2(const Eigen::VectorXd& target, const Eigen::MatrixXd& predictors,
                   Warnings* warnings = nullptr);

/// Stepwise redundancy removal: while some variable is predicted by all the
/// others with adjusted R^2 >= threshold, drop the most predictable one
/// (first in column order on ties).
RedunResult redun_select(const DataMatrix& data, double r2_threshold = 0.8);

}  // namespace sumeval
