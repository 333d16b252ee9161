#include "hdsgd/rng.hpp"

#include <cmath>

namespace hdsgd {

double CounterRng::normal() {
  if (has_cache_) {
    has_cache_ = false;
    return cache_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.28318530717958647692 * u2;
  cache_ = r * std::sin(a);
  has_cache_ = true;
  return r * std::cos(a);
}

double CounterRng::student_t(int nu) {
  const double z = normal();
  double chi2 = 0.0;
  for (int i = 0; i < nu; ++i) {
    const double n = normal();
    chi2 += n * n;
  }
  return z / std::sqrt(chi2 / static_cast<double>(nu));
}

double CounterRng::laplace() {
  const double u = uniform() - 0.5;
  const double scale = 0.70710678118654752440;  // 1/sqrt(2): unit variance
  return (u < 0.0 ? scale : -scale) * std::log1p(-2.0 * std::abs(u));
}

}  // namespace hdsgd
