#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hdsgd {

using Vector = Eigen::VectorXd;

// Signed integer power by repeated squaring; exact sign handling for odd p.
inline double ipow(double base, int p) {
  double r = 1.0;
  double b = base;
  int e = p;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Smallest even integer s = 2l with 2l > ln(d); natural logarithm, l >= 1.
// d=2 -> 2, d=10 -> 4, d=1000 -> 8. Requires d >= 1.
int choose_s_d(long d);

// l^infinity norm. Requires a nonempty vector.
double max_norm(const Vector& x);

// l^s norm for even integer s >= 2. Overflow-safe: the largest magnitude is
// factored out before powers are taken, so entries near 1e300 stay finite.
double ls_norm(const Vector& x, int s);

// l^p norm for real p >= 1 (dual exponents s/(s-1) land here). Same factoring.
double lp_norm(const Vector& x, double p);

// Coordinatewise signed power x_i^p for integer p >= 0.
Vector elementwise_power(const Vector& x, int p);

struct EstimateWithCI {
  double value = 0.0;
  double se = 0.0;
  long n = 0;
};

// q-th-mean estimate (mean of v^q)^(1/q) over samples of a nonnegative
// statistic, with a delta-method standard error. Requires q >= 1, n >= 2.
EstimateWithCI lq_moment(const std::vector<double>& samples, double q);

// Plain mean with standard error of the mean.
EstimateWithCI mean_with_se(const std::vector<double>& samples);

}  // namespace hdsgd
