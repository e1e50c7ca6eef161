#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sumeval {

struct OrderedLogitOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-8;  // max-norm of the log-likelihood gradient
  int max_step_halvings = 30;
  double separation_bound = 30.0;    // |coefficient| x column range beyond this signals separation
};

/// Proportional-odds fit of
///   logit P(Y <= level_l) = cutpoint_l - sum_i coefficient_i * x_i,
/// so a positive coefficient shifts mass towards higher levels.
struct OrderedLogitFit {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd odds_ratios;  // exp(coefficients)
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_values;
  Eigen::VectorXd p_values_raw;  // two-sided, normal approximation
  Eigen::VectorXd p_values_bh;   // Benjamini-Hochberg across this model's coefficients
  Eigen::VectorXd intercepts;    // strictly increasing cutpoints
  Eigen::VectorXd intercept_std_errors;
  std::vector<double> levels;    // sorted distinct observed responses
  double log_likelihood = 0.0;
  double aic = 0.0;              // 2k - 2 log_likelihood
  int iterations = 0;
  int n_obs = 0;
  std::vector<double> log_likelihood_trace;  // after every accepted step
};

/// Maximum-likelihood fit by damped Newton iteration on (coefficients,
/// first cutpoint, log cutpoint gaps). Rows whose response is NaN are
/// dropped. Throws DataError for fewer than two levels and NumericalError on
/// non-convergence or separation.
OrderedLogitFit ordered_logit_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  std::vector<std::string> names = {},
                                  const OrderedLogitOptions& options = {});

/// Log-likelihood of the model at the given parameters; levels are the
/// sorted distinct responses. Exposed for diagnostics and tests.
double ordered_logit_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                    const std::vector<double>& levels,
                                    const Eigen::VectorXd& coefficients,
                                    const Eigen::VectorXd& cutpoints);

}  // namespace sumeval
