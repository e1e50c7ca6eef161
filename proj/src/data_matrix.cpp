#include "sumeval/stats/data_matrix.hpp"

#include <algorithm>

#include "sumeval/error.hpp"

namespace sumeval {

Eigen::Index DataMatrix::column_index(const std::string& name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) throw DataError("unknown column '" + name + "'");
  return static_cast<Eigen::Index>(it - column_names.begin());
}

DataMatrix DataMatrix::select(const std::vector<std::string>& names) const {
  DataMatrix out;
  out.column_names = names;
  out.values.resize(values.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    out.values.col(static_cast<Eigen::Index>(j)) = values.col(column_index(names[j]));
  }
  return out;
}

DataMatrix DataMatrix::complete_rows() const {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (!values.row(i).array().isNaN().any()) keep.push_back(i);
  }
  DataMatrix out;
  out.column_names = column_names;
  out.values.resize(static_cast<Eigen::Index>(keep.size()), values.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) out.values.row(static_cast<Eigen::Index>(r)) = values.row(keep[r]);
  return out;
}

}  // namespace sumeval
