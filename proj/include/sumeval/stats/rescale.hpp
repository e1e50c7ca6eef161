#pragma once

#include <Eigen/Core>
#include <string>

#include "sumeval/stats/data_matrix.hpp"

namespace sumeval {

/// Per-column affine map of [min, max] onto [lo, hi]. Constant columns map to
/// lo and add a warning.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> minmax_rescale(
    const Eigen::MatrixBase<Derived>& data, typename Derived::Scalar lo, typename Derived::Scalar hi,
    Warnings* warnings = nullptr) {
  using Scalar = typename Derived::Scalar;
  if (!(hi > lo)) throw std::invalid_argument("min-max rescaling needs hi > lo");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(data.rows(), data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const Scalar min = data.col(j).minCoeff();
    const Scalar max = data.col(j).maxCoeff();
    if (!(max > min)) {
      out.col(j).setConstant(lo);
      if (warnings != nullptr) warnings->push_back("column " + std::to_string(j) + " is constant; rescaled to lo");
      continue;
    }
    out.col(j) = ((data.col(j).array() - min) / (max - min) * (hi - lo) + lo).matrix();
  }
  return out;
}

inline DataMatrix minmax_rescale(const DataMatrix& data, double lo, double hi, Warnings* warnings = nullptr) {
  return {data.column_names, minmax_rescale(data.values, lo, hi, warnings)};
}

}  // namespace sumeval
