#pragma once

#include "hdsgd/norms.hpp"

namespace hdsgd {

using Matrix = Eigen::MatrixXd;

// Lag-window estimate of the long-run covariance (the sum of autocovariances
// over all lags) of a stationary multivariate series.
struct LongRunCovariance {
  Matrix xi;
  long bandwidth = 0;
  long sample_length = 0;
};

// Triangular (Bartlett) window estimator with weights w_h = 1 - h/(bw+1):
//   Xi_hat = Gamma_0 + sum_{h=1}^{bw} w_h (Gamma_h + Gamma_h'),
// Gamma_h the lag-h sample autocovariance of the column-centered trajectory
// (rows are time). Requires bandwidth >= 1 and T >= 10 * bandwidth. The
// Bartlett weights keep the estimate positive semidefinite.
LongRunCovariance estimate_long_run_cov(const Matrix& trajectory,
                                        long bandwidth);

// Standard consistency-rate default floor(T^(1/3)) for geometrically mixing
// series, never below 1.
long default_bandwidth(long T);

}  // namespace hdsgd
