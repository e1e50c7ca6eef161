#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sumeval {

using Warnings = std::vector<std::string>;

/// Named columns over a dense row-per-record matrix.
struct DataMatrix {
  std::vector<std::string> column_names;
  Eigen::MatrixXd values;

  Eigen::Index n_rows() const { return values.rows(); }
  Eigen::Index n_cols() const { return values.cols(); }

  /// Column subset in the given order; throws DataError on an unknown name.
  DataMatrix select(const std::vector<std::string>& names) const;
  /// Rows that hold no NaN.
  DataMatrix complete_rows() const;
  Eigen::Index column_index(const std::string& name) const;
};

}  // namespace sumeval
