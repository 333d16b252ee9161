#pragma once

#include <vector>

namespace hdsgd {

// Log-log least squares against a target exponent. The pass rule is two-sided:
// the fitted slope must land within tolerance of the target AND the slope's
// own standard error must be below tolerance/2, so an under-powered experiment
// fails instead of passing by luck.
struct ScalingFit {
  std::vector<double> x;
  std::vector<double> estimate;
  std::vector<double> se;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;  // in log space
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Fits ln(estimate) ~ intercept + slope * ln(x). Standard errors of the
// estimates propagate into the slope through the OLS weights (se_i / estimate_i
// is the delta-method error of ln(estimate_i)). Requires >= 2 distinct
// positive x and positive estimates.
ScalingFit fit_log_slope(const std::vector<double>& x,
                         const std::vector<double>& estimate,
                         const std::vector<double>& se, double target,
                         double tolerance);

}  // namespace hdsgd
