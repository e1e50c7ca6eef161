#include "sumeval/stats/redun.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "sumeval/error.hpp"

namespace sumeval {

double adjusted_r2(const Eigen::VectorXd& target, const Eigen::MatrixXd& predictors, Warnings* warnings) {
  const auto n = static_cast<double>(target.size());
  const auto k = static_cast<double>(predictors.cols());
  const Eigen::VectorXd y = target.array() - target.mean();
  const double sst = y.squaredNorm();
  if (sst == 0.0) return 1.0;

  Eigen::MatrixXd x = predictors;
  x.rowwise() -= x.colwise().mean();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  Eigen::VectorXd beta;
  if (qr.rank() == x.cols()) {
    beta = qr.solve(y);
  } else {
    if (warnings != nullptr) {
      warnings->push_back("singular design (rank " + std::to_string(qr.rank()) + " < " +
                          std::to_string(x.cols()) + "); ridge fallback with penalty 1e-8");
    }
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += 1e-8;
    beta = gram.ldlt().solve(x.transpose() * y);
  }
  const double sse = (y - x * beta).squaredNorm();
  const double r2 = 1.0 - sse / sst;
  return 1.0 - (1.0 - r2) * (n - 1.0) / (n - k - 1.0);
}

RedunResult redun_select(const DataMatrix& data, double r2_threshold) {
  if (!(r2_threshold > 0.0 && r2_threshold < 1.0)) throw DataError("redun threshold must lie in (0, 1)");
  if (data.n_rows() <= data.n_cols() + 1) {
    throw DataError("redun needs more rows than columns + 1 (" + std::to_string(data.n_rows()) + " rows, " +
                    std::to_string(data.n_cols()) + " columns)");
  }
  RedunResult out;
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < data.n_cols(); ++j) active.push_back(j);

  while (active.size() > 1) {
    std::size_t best = 0;
    double best_r2 = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      Eigen::MatrixXd others(data.n_rows(), static_cast<Eigen::Index>(active.size() - 1));
      Eigen::Index c = 0;
      for (std::size_t b = 0; b < active.size(); ++b) {
        if (b != a) others.col(c++) = data.values.col(active[b]);
      }
      Warnings local;
      const double r2 = adjusted_r2(data.values.col(active[a]), others, &local);
      for (auto& w : local) out.warnings.push_back(data.column_names[static_cast<std::size_t>(active[a])] + ": " + w);
      if (r2 > best_r2) {
        best_r2 = r2;
        best = a;
      }
    }
    if (best_r2 < r2_threshold) break;
    out.removed.push_back({data.column_names[static_cast<std::size_t>(active[best])], best_r2});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
  }
  for (auto j : active) out.kept.push_back(data.column_names[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace sumeval
