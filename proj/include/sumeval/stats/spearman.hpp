#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "sumeval/error.hpp"
#include "sumeval/stats/data_matrix.hpp"

namespace sumeval {

/// 1-based ranks; tied values share the mean of the ranks they span.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> average_ranks(
    const Eigen::MatrixBase<Derived>& column) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = column.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&column](Eigen::Index a, Eigen::Index b) { return column(a) < column(b); });
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ranks(n);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && column(order[j + 1]) == column(order[i])) ++j;
    const Scalar rank = Scalar(i + j + 2) / Scalar(2);
    for (std::size_t k = i; k <= j; ++k) ranks(order[k]) = rank;
    i = j + 1;
  }
  return ranks;
}

/// Pairwise Spearman correlation: Pearson correlation of average ranks.
/// A constant column correlates 0 with everything else (warning recorded);
/// the diagonal is exactly 1.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> spearman_matrix(
    const Eigen::MatrixBase<Derived>& data, Warnings* warnings = nullptr) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (data.rows() < 2) throw DataError("Spearman correlation needs at least 2 rows");
  const Eigen::Index p = data.cols();
  Matrix ranks(data.rows(), p);
  for (Eigen::Index j = 0; j < p; ++j) ranks.col(j) = average_ranks(data.col(j));
  ranks.rowwise() -= ranks.colwise().mean();
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> norms = ranks.colwise().norm();

  Matrix rho = Matrix::Identity(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (norms(j) == Scalar(0) && warnings != nullptr) {
      warnings->push_back("column " + std::to_string(j) + " is constant; its correlations are set to 0");
    }
    for (Eigen::Index k = j + 1; k < p; ++k) {
      Scalar r(0);
      if (norms(j) > Scalar(0) && norms(k) > Scalar(0)) {
        r = std::clamp(ranks.col(j).dot(ranks.col(k)) / (norms(j) * norms(k)), Scalar(-1), Scalar(1));
      }
      rho(j, k) = rho(k, j) = r;
    }
  }
  return rho;
}

}  // namespace sumeval
