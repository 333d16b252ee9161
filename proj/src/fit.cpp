#include "hdsgd/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace hdsgd {

ScalingFit fit_log_slope(const std::vector<double>& x,
                         const std::vector<double>& estimate,
                         const std::vector<double>& se, double target,
                         double tolerance) {
  const std::size_t n = x.size();
  if (n < 2 || estimate.size() != n || se.size() != n)
    throw std::invalid_argument("need >= 2 grid points with matching lengths");
  std::vector<double> u(n), v(n), sv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(estimate[i] > 0.0) || !(se[i] >= 0.0))
      throw std::invalid_argument("grid and estimates must be positive");
    u[i] = std::log(x[i]);
    v[i] = std::log(estimate[i]);
    sv[i] = se[i] / estimate[i];
  }
  double u_bar = 0.0, v_bar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u_bar += u[i];
    v_bar += v[i];
  }
  u_bar /= static_cast<double>(n);
  v_bar /= static_cast<double>(n);
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxx += (u[i] - u_bar) * (u[i] - u_bar);
  if (sxx <= 0.0) throw std::invalid_argument("grid points must be distinct");

  ScalingFit fit;
  fit.x = x;
  fit.estimate = estimate;
  fit.se = se;
  fit.target = target;
  fit.tolerance = tolerance;
  double slope = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (u[i] - u_bar) / sxx;
    slope += w * v[i];
    var += w * w * sv[i] * sv[i];
  }
  fit.slope = slope;
  fit.slope_se = std::sqrt(var);
  fit.intercept = v_bar - slope * u_bar;
  fit.pass = std::abs(slope - target) <= tolerance &&
             fit.slope_se < tolerance / 2.0;
  return fit;
}

}  // namespace hdsgd
