#include "sumeval/stats/ordered_logit.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sumeval/error.hpp"
#include "sumeval/stats/multiple_testing.hpp"

namespace sumeval {
namespace {

double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

struct Derivatives {
  double log_likelihood = 0.0;
  Eigen::VectorXd gradient;  // with respect to (coefficients, cutpoints)
  Eigen::MatrixXd hessian;
};

// Log-likelihood, and optionally its gradient and Hessian, in the natural
// (coefficients, cutpoints) parameterization.
class Likelihood {
 public:
  Likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXi& level, int n_levels)
      : x_(x), level_(level), n_levels_(n_levels) {}

  Eigen::Index n_coef() const { return x_.cols(); }
  Eigen::Index n_cut() const { return n_levels_ - 1; }

  Derivatives evaluate(const Eigen::VectorXd& coef, const Eigen::VectorXd& cut, bool derivatives) const {
    const Eigen::Index n = x_.rows();
    const Eigen::Index p = n_coef();
    const Eigen::Index q = n_cut();
    const Eigen::VectorXd eta = x_ * coef;

    Derivatives d;
    Eigen::VectorXd grad_weight;
    Eigen::VectorXd hess_weight;
    Eigen::MatrixXd cross;  // p x q block of mixed coefficient/cutpoint terms
    if (derivatives) {
      d.gradient = Eigen::VectorXd::Zero(p + q);
      d.hessian = Eigen::MatrixXd::Zero(p + q, p + q);
      grad_weight.resize(n);
      hess_weight.resize(n);
      cross = Eigen::MatrixXd::Zero(p, q);
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      const int k = level_(i);
      const bool has_upper = k < q;
      const bool has_lower = k > 0;
      const double a = has_upper ? cut(k) - eta(i) : 0.0;
      const double b = has_lower ? cut(k - 1) - eta(i) : 0.0;
      const double fa_cdf = has_upper ? logistic(a) : 1.0;
      const double fb_cdf = has_lower ? logistic(b) : 0.0;

      double prob = 0.0;
      if (has_upper && has_lower) {
        prob = b > 0.0 ? logistic(-b) - logistic(-a) : fa_cdf - fb_cdf;
      } else if (has_upper) {
        prob = fa_cdf;
      } else {
        prob = logistic(-b);
      }
      prob = std::max(prob, std::numeric_limits<double>::min());
      d.log_likelihood += std::log(prob);
      if (!derivatives) continue;

      const double fa = has_upper ? fa_cdf * (1.0 - fa_cdf) : 0.0;
      const double fb = has_lower ? fb_cdf * (1.0 - fb_cdf) : 0.0;
      const double la = fa / prob;
      const double lb = -fb / prob;
      const double laa = fa * (1.0 - 2.0 * fa_cdf) / prob - la * la;
      const double lbb = -fb * (1.0 - 2.0 * fb_cdf) / prob - lb * lb;
      const double lab = -la * lb;

      grad_weight(i) = -(la + lb);
      hess_weight(i) = laa + lbb + 2.0 * lab;
      if (has_upper) {
        d.gradient(p + k) += la;
        d.hessian(p + k, p + k) += laa;
        cross.col(k) -= (laa + lab) * x_.row(i).transpose();
      }
      if (has_lower) {
        d.gradient(p + k - 1) += lb;
        d.hessian(p + k - 1, p + k - 1) += lbb;
        cross.col(k - 1) -= (lbb + lab) * x_.row(i).transpose();
      }
      if (has_upper && has_lower) {
        d.hessian(p + k, p + k - 1) += lab;
        d.hessian(p + k - 1, p + k) += lab;
      }
    }
    if (derivatives && p > 0) {
      d.gradient.head(p) = x_.transpose() * grad_weight;
      d.hessian.topLeftCorner(p, p) = x_.transpose() * hess_weight.asDiagonal() * x_;
      d.hessian.topRightCorner(p, q) = cross;
      d.hessian.bottomLeftCorner(q, p) = cross.transpose();
    }
    return d;
  }

 private:
  const Eigen::MatrixXd& x_;
  const Eigen::VectorXi& level_;
  int n_levels_;
};

// Unconstrained parameters: coefficients, first cutpoint, log gaps.
struct Unconstrained {
  Eigen::Index p;
  Eigen::Index q;

  Eigen::VectorXd coef(const Eigen::VectorXd& theta) const { return theta.head(p); }

  Eigen::VectorXd cutpoints(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd cut(q);
    cut(0) = theta(p);
    for (Eigen::Index j = 1; j < q; ++j) cut(j) = cut(j - 1) + std::exp(theta(p + j));
    return cut;
  }

  // d(natural)/d(theta)
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(p + q, p + q);
    j.topLeftCorner(p, p).setIdentity();
    for (Eigen::Index c = 0; c < q; ++c) {
      j(p + c, p) = 1.0;
      for (Eigen::Index g = 1; g <= c; ++g) j(p + c, p + g) = std::exp(theta(p + g));
    }
    return j;
  }

  void to_theta(const Derivatives& natural, const Eigen::VectorXd& theta, Eigen::VectorXd& grad,
                Eigen::MatrixXd& hess) const {
    const Eigen::MatrixXd j = jacobian(theta);
    grad = j.transpose() * natural.gradient;
    hess = j.transpose() * natural.hessian * j;
    for (Eigen::Index g = 1; g < q; ++g) {
      hess(p + g, p + g) += std::exp(theta(p + g)) * natural.gradient.segment(p + g, q - g).sum();
    }
  }
};

std::string diagnostics(int iteration, double ll, double grad_norm, const Eigen::VectorXd& theta) {
  std::ostringstream os;
  os << "iteration " << iteration << ", log-likelihood " << ll << ", gradient max-norm " << grad_norm
     << ", parameters [" << theta.transpose() << "]";
  return os.str();
}

}  // namespace

double ordered_logit_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                    const std::vector<double>& levels,
                                    const Eigen::VectorXd& coefficients,
                                    const Eigen::VectorXd& cutpoints) {
  Eigen::VectorXi level(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto it = std::lower_bound(levels.begin(), levels.end(), y(i));
    if (it == levels.end() || *it != y(i)) throw DataError("response value not among the levels");
    level(i) = static_cast<int>(it - levels.begin());
  }
  const Likelihood lik(x, level, static_cast<int>(levels.size()));
  return lik.evaluate(coefficients, cutpoints, false).log_likelihood;
}

OrderedLogitFit ordered_logit_fit(const Eigen::MatrixXd& x_all, const Eigen::VectorXd& y_all,
                                  std::vector<std::string> names, const OrderedLogitOptions& options) {
  if (x_all.rows() != y_all.size()) throw DataError("design and response differ in row count");
  if (names.empty()) {
    for (Eigen::Index j = 0; j < x_all.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Eigen::Index>(names.size()) != x_all.cols()) throw DataError("one name per column required");

  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < y_all.size(); ++i) {
    if (!std::isnan(y_all(i))) rows.push_back(i);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd x(n, x_all.cols());
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    x.row(r) = x_all.row(rows[static_cast<std::size_t>(r)]);
    y(r) = y_all(rows[static_cast<std::size_t>(r)]);
  }
  if (!x.allFinite()) throw DataError("design matrix holds non-finite values");

  OrderedLogitFit fit;
  fit.names = std::move(names);
  fit.n_obs = static_cast<int>(n);
  fit.levels.assign(y.data(), y.data() + n);
  std::sort(fit.levels.begin(), fit.levels.end());
  fit.levels.erase(std::unique(fit.levels.begin(), fit.levels.end()), fit.levels.end());
  if (fit.levels.size() < 2) throw DataError("ordered logit needs at least 2 distinct response levels");

  const auto n_levels = static_cast<int>(fit.levels.size());
  Eigen::VectorXi level(n);
  std::vector<double> counts(fit.levels.size(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    level(i) = static_cast<int>(std::lower_bound(fit.levels.begin(), fit.levels.end(), y(i)) - fit.levels.begin());
    counts[static_cast<std::size_t>(level(i))] += 1.0;
  }

  const Likelihood lik(x, level, n_levels);
  const Unconstrained param{x.cols(), n_levels - 1};
  const Eigen::Index p = param.p;
  const Eigen::Index q = param.q;

  // Start from zero coefficients and the marginal cumulative logits.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + q);
  double cumulative = 0.0;
  double previous_cut = 0.0;
  for (Eigen::Index j = 0; j < q; ++j) {
    cumulative += counts[static_cast<std::size_t>(j)] / static_cast<double>(n);
    const double cut = std::log(cumulative / (1.0 - cumulative));
    theta(p + j) = j == 0 ? cut : std::log(cut - previous_cut);
    previous_cut = cut;
  }

  Derivatives current = lik.evaluate(param.coef(theta), param.cutpoints(theta), true);
  fit.log_likelihood_trace.push_back(current.log_likelihood);
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  param.to_theta(current, theta, grad, hess);

  Eigen::VectorXd spans = Eigen::VectorXd::Ones(p);
  for (Eigen::Index j = 0; j < p && n > 0; ++j) {
    spans(j) = std::max(1e-300, x.col(j).maxCoeff() - x.col(j).minCoeff());
  }

  bool converged = false;
  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
      converged = true;
      break;
    }
    Eigen::MatrixXd curvature = -hess;
    Eigen::LLT<Eigen::MatrixXd> llt(curvature);
    double shift = 1e-8 * std::max(1.0, curvature.diagonal().cwiseAbs().maxCoeff());
    while (llt.info() != Eigen::Success) {
      Eigen::MatrixXd shifted = curvature;
      shifted.diagonal().array() += shift;
      llt.compute(shifted);
      shift *= 10.0;
      if (!std::isfinite(shift)) {
        throw NumericalError("ordered logit: curvature not positive definite at " +
                             diagnostics(iteration, current.log_likelihood, grad.lpNorm<Eigen::Infinity>(), theta));
      }
    }
    const Eigen::VectorXd direction = llt.solve(grad);

    // Changes below the rounding error of the summed log-likelihood count as
    // no change; otherwise the line search stalls next to the optimum.
    const double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                         (static_cast<double>(n) + std::abs(current.log_likelihood));
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double candidate_ll = 0.0;
    for (int h = 0; h <= options.max_step_halvings; ++h, step *= 0.5) {
      candidate = theta + step * direction;
      candidate_ll = lik.evaluate(param.coef(candidate), param.cutpoints(candidate), false).log_likelihood;
      if (std::isfinite(candidate_ll) && candidate_ll >= current.log_likelihood - noise) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NumericalError("ordered logit: step halving failed at " +
                           diagnostics(iteration, current.log_likelihood, grad.lpNorm<Eigen::Infinity>(), theta));
    }
    theta = candidate;
    if (p > 0 && theta.head(p).cwiseAbs().cwiseProduct(spans).maxCoeff() > options.separation_bound) {
      throw NumericalError("ordered logit: coefficients diverge (|coefficient| x column range > " +
                           std::to_string(options.separation_bound) + "), data likely separated; " +
                           diagnostics(iteration + 1, candidate_ll, grad.lpNorm<Eigen::Infinity>(), theta));
    }
    current = lik.evaluate(param.coef(theta), param.cutpoints(theta), true);
    fit.log_likelihood_trace.push_back(current.log_likelihood);
    param.to_theta(current, theta, grad, hess);
  }
  if (!converged) {
    throw NumericalError("ordered logit did not converge in " + std::to_string(options.max_iterations) +
                         " iterations; " +
                         diagnostics(iteration, current.log_likelihood, grad.lpNorm<Eigen::Infinity>(), theta));
  }

  fit.iterations = iteration;
  fit.coefficients = param.coef(theta);
  fit.intercepts = param.cutpoints(theta);
  fit.log_likelihood = current.log_likelihood;
  fit.aic = 2.0 * static_cast<double>(p + q) - 2.0 * fit.log_likelihood;
  fit.odds_ratios = fit.coefficients.array().exp();

  // Standard errors from the inverse observed information in the natural
  // parameterization.
  const Eigen::MatrixXd information = -current.hessian;
  Eigen::LLT<Eigen::MatrixXd> info_llt(information);
  if (info_llt.info() != Eigen::Success) {
    throw NumericalError("ordered logit: observed information is not positive definite at the optimum");
  }
  const Eigen::MatrixXd covariance = info_llt.solve(Eigen::MatrixXd::Identity(p + q, p + q));
  const Eigen::VectorXd se = covariance.diagonal().cwiseSqrt();
  fit.std_errors = se.head(p);
  fit.intercept_std_errors = se.tail(q);
  fit.t_values = fit.coefficients.cwiseQuotient(fit.std_errors);
  fit.p_values_raw.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) fit.p_values_raw(j) = std::erfc(std::abs(fit.t_values(j)) / std::sqrt(2.0));
  const auto adjusted = benjamini_hochberg(std::span<const double>(fit.p_values_raw.data(), static_cast<std::size_t>(p)));
  fit.p_values_bh = Eigen::Map<const Eigen::VectorXd>(adjusted.data(), p);
  return fit;
}

}  // namespace sumeval
