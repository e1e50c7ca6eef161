#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>
#include <algorithm>
#include <limits>

#include "sumeval/error.hpp"

namespace sumeval {

template <class Scalar>
struct PcaResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector singular_values;
  Vector proportion;  // share of total variance per component
  Vector cumulative;
  Matrix components;  // column k = k-th principal axis, unit norm
};

/// PCA by SVD of the column-centred data (no further scaling). Singular
/// values below the rank tolerance are reported as 0. Each axis is signed so
/// that its largest-magnitude entry is positive.
template <class Derived>
PcaResult<typename Derived::Scalar> pca(const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  using Matrix = typename PcaResult<Scalar>::Matrix;
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  if (p < 1 || n < p) throw DataError("PCA needs n_rows >= n_cols >= 1");

  Matrix centred = data;
  centred.rowwise() -= centred.colwise().mean();
  Eigen::JacobiSVD<Matrix> svd(centred, Eigen::ComputeThinV);

  PcaResult<Scalar> out;
  out.singular_values = svd.singularValues();
  const Scalar largest = out.singular_values.size() > 0 ? out.singular_values(0) : Scalar(0);
  const Scalar tol = largest * Scalar(std::max(n, p)) * std::numeric_limits<Scalar>::epsilon();
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    if (out.singular_values(k) <= tol) out.singular_values(k) = Scalar(0);
  }

  const auto variance = out.singular_values.array().square();
  const Scalar total = variance.sum();
  out.proportion = total > Scalar(0) ? (variance / total).matrix().eval()
                                     : PcaResult<Scalar>::Vector::Zero(p).eval();
  out.cumulative.resize(p);
  Scalar running(0);
  for (Eigen::Index k = 0; k < p; ++k) out.cumulative(k) = running += out.proportion(k);

  out.components = svd.matrixV();
  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::Index pivot = 0;
    out.components.col(k).cwiseAbs().maxCoeff(&pivot);
    if (out.components(pivot, k) < Scalar(0)) out.components.col(k) *= Scalar(-1);
  }
  return out;
}

}  // namespace sumeval
