#include "hdsgd/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdsgd {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

int choose_s_d(long d) {
  require(d >= 1, "choose_s_d: dimension must be >= 1");
  const double ln_d = std::log(static_cast<double>(d));
  int l = 1;
  while (2.0 * l <= ln_d) ++l;
  return 2 * l;
}

double max_norm(const Vector& x) {
  require(x.size() > 0, "max_norm: empty vector");
  return x.cwiseAbs().maxCoeff();
}

double ls_norm(const Vector& x, int s) {
  require(x.size() > 0, "ls_norm: empty vector");
  require(s >= 2 && s % 2 == 0, "ls_norm: order must be an even integer >= 2, got " +
                                     std::to_string(s));
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return m;
  Kahan acc;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = x[i] / m;
    acc.add(ipow(r * r, s / 2));
  }
  return m * std::pow(acc.sum, 1.0 / s);
}

double lp_norm(const Vector& x, double p) {
  require(x.size() > 0, "lp_norm: empty vector");
  require(p >= 1.0, "lp_norm: order must be >= 1");
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return m;
  Kahan acc;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc.add(std::pow(std::abs(x[i]) / m, p));
  }
  return m * std::pow(acc.sum, 1.0 / p);
}

Vector elementwise_power(const Vector& x, int p) {
  require(p >= 0, "elementwise_power: exponent must be >= 0");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = ipow(x[i], p);
  return out;
}

EstimateWithCI lq_moment(const std::vector<double>& samples, double q) {
  require(q >= 1.0, "lq_moment: q must be >= 1");
  require(samples.size() >= 2, "lq_moment: need at least 2 samples");
  const auto n = static_cast<double>(samples.size());
  Kahan sum;
  for (double v : samples) sum.add(std::pow(v, q));
  const double m = sum.sum / n;
  Kahan var;
  for (double v : samples) {
    const double d = std::pow(v, q) - m;
    var.add(d * d);
  }
  const double s2 = var.sum / (n - 1.0);
  EstimateWithCI e;
  e.n = static_cast<long>(samples.size());
  if (m <= 0.0) {
    e.value = 0.0;
    e.se = 0.0;
    return e;
  }
  e.value = std::pow(m, 1.0 / q);
  // Delta method: d/dm m^(1/q) = (1/q) m^(1/q - 1).
  e.se = (1.0 / q) * std::pow(m, 1.0 / q - 1.0) * std::sqrt(s2 / n);
  return e;
}

EstimateWithCI mean_with_se(const std::vector<double>& samples) {
  require(samples.size() >= 2, "mean_with_se: need at least 2 samples");
  const auto n = static_cast<double>(samples.size());
  Kahan sum;
  for (double v : samples) sum.add(v);
  const double m = sum.sum / n;
  Kahan var;
  for (double v : samples) var.add((v - m) * (v - m));
  return {m, std::sqrt(var.sum / (n - 1.0) / n), static_cast<long>(samples.size())};
}

}  // namespace hdsgd
