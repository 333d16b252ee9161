#include "hdsgd/long_run.hpp"

#include <cmath>
#include <stdexcept>

namespace hdsgd {

long default_bandwidth(long T) {
  return std::max(1L, static_cast<long>(std::floor(
                          std::cbrt(static_cast<double>(T)))));
}

LongRunCovariance estimate_long_run_cov(const Matrix& trajectory,
                                        long bandwidth) {
  const long T = trajectory.rows();
  if (bandwidth < 1) throw std::invalid_argument("bandwidth must be >= 1");
  if (T < 10 * bandwidth)
    throw std::invalid_argument("trajectory too short: need T >= 10*bandwidth");

  Matrix centered = trajectory.rowwise() - trajectory.colwise().mean();
  const double T_d = static_cast<double>(T);

  LongRunCovariance out;
  out.bandwidth = bandwidth;
  out.sample_length = T;
  out.xi = centered.transpose() * centered / T_d;
  for (long h = 1; h <= bandwidth; ++h) {
    const double w = 1.0 - static_cast<double>(h) /
                               static_cast<double>(bandwidth + 1);
    Matrix gamma = centered.topRows(T - h).transpose() *
                   centered.bottomRows(T - h) / T_d;
    out.xi.noalias() += w * (gamma + gamma.transpose());
  }
  // Enforce exact symmetry against accumulated rounding.
  out.xi = ((out.xi + out.xi.transpose()) / 2.0).eval();
  return out;
}

}  // namespace hdsgd
