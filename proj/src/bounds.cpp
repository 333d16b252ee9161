#include "hdsgd/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "hdsgd/norms.hpp"

namespace hdsgd {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_msq(double mu, double L, int s, double q) {
  require(mu > 0.0, "mu must be positive");
  require(L > 0.0, "L must be positive");
  require(s >= 2 && s % 2 == 0, "s must be an even integer >= 2");
  require(q >= 2.0, "q must be >= 2");
}

}  // namespace

double alpha_max(double mu, double L, int s, double q) {
  check_msq(mu, L, s, q);
  return 2.0 * mu / (std::max(q, static_cast<double>(s)) * L * L);
}

double contraction_rate(double mu, double L, int s, double q, double alpha) {
  check_msq(mu, L, s, q);
  const double amax = alpha_max(mu, L, s, q);
  require(alpha > 0.0 && alpha < amax,
          "contraction_rate: alpha must lie in (0, " + std::to_string(amax) +
              "), got " + std::to_string(alpha));
  const double m = std::max(q, static_cast<double>(s));
  return 1.0 - 2.0 * mu * alpha + m * L * L * alpha * alpha;
}

double norm_contraction_rate(double mu, double L, int s, double q,
                             double alpha) {
  return std::sqrt(contraction_rate(mu, L, s, q, alpha));
}

double tilde_contraction_rate(double mu, double L, int s, double q,
                              double alpha) {
  check_msq(mu, L, s, q);
  const double amax7 = alpha_max(mu, L, s, q) / 7.0;
  require(alpha > 0.0 && alpha < amax7,
          "tilde_contraction_rate: alpha must lie in (0, " +
              std::to_string(amax7) + "), got " + std::to_string(alpha));
  const double m = std::max(q, static_cast<double>(s));
  return 1.0 - 2.0 * alpha * mu + 7.0 * (m - 1.0) * alpha * alpha * L * L;
}

double alpha_root(double mu, double L, int s, double q) {
  check_msq(mu, L, s, q);
  const double c =
      (std::abs(q - static_cast<double>(s)) + (static_cast<double>(s) - 1.0)) *
      L * L / 2.0;
  const auto F = [&](double a) {
    return -mu + c * a * std::pow(1.0 + L * a, q - 2.0);
  };
  double lo = 0.0;
  double hi = mu / (2.0 * c);
  int doublings = 0;
  while (F(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200)
      throw std::runtime_error("alpha_root: no sign change after 200 doublings");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AsgdBoundTerms asgd_bound_terms(double M, double L, double mu, long d, double q,
                                int s, double alpha, double k, double delta0) {
  check_msq(mu, L, s, q);
  require(M >= 0.0, "M must be >= 0");
  require(d >= 1, "d must be >= 1");
  require(k >= 1.0, "k must be >= 1");
  require(delta0 >= 0.0, "delta0 must be >= 0");
  require(s == choose_s_d(d), "asgd_bound_terms: s must equal the dimension "
                              "rule value " +
                                  std::to_string(choose_s_d(d)) + " for d = " +
                                  std::to_string(d) + ", got " +
                                  std::to_string(s));
  const double m = std::max(q, static_cast<double>(s));
  const double r = contraction_rate(mu, L, s, q, alpha);
  AsgdBoundTerms t;
  t.variance_term = std::sqrt(static_cast<double>(s) / k) * M *
                    (L * std::sqrt(alpha * m) + 1.0);
  t.init_term = delta0 / (k * (1.0 - r));
  t.bias_term = M * M * m * alpha *
                std::pow(static_cast<double>(d),
                         (q / (q - 1.0)) * (1.0 - 2.0 / static_cast<double>(s)));
  t.total = t.variance_term + t.init_term + t.bias_term;
  return t;
}

ComplexityRecipe complexity(double epsilon, double M, double L, double mu,
                            long d, double q, double delta0) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(M > 0.0, "M must be positive");
  require(d >= 1, "d must be >= 1");
  require(delta0 >= 0.0, "delta0 must be >= 0");
  ComplexityRecipe rec;
  rec.s_d = choose_s_d(d);
  check_msq(mu, L, rec.s_d, q);
  const double m = std::max(q, static_cast<double>(rec.s_d));
  rec.V = L * M * std::sqrt(m) + M;
  rec.B = M * M * m *
          std::pow(static_cast<double>(d),
                   (q / (q - 1.0)) * (1.0 - 2.0 / static_cast<double>(rec.s_d)));
  rec.alpha_rec =
      std::min(epsilon / (3.0 * rec.B), alpha_max(mu, L, rec.s_d, q) / 7.0);
  rec.k_rec = std::max(
      9.0 * static_cast<double>(rec.s_d) * rec.V * rec.V * rec.alpha_rec /
          (epsilon * epsilon),
      3.0 * delta0 / (rec.alpha_rec * epsilon));
  return rec;
}

double fuk_nagaev_bound(double z, double k, double alpha, long d, double q,
                        double M, double delta0, double fitted_constant) {
  require(z > 0.0, "z must be positive");
  require(k >= 2.0, "k must be >= 2");
  require(alpha > 0.0, "alpha must be positive");
  require(d >= 2, "d must be >= 2");
  require(q >= 2.0, "q must be >= 2");
  require(M > 0.0, "M must be positive");
  require(fitted_constant >= 0.0, "fitted constant must be >= 0");
  const double ln_d = std::log(static_cast<double>(d));
  const double ln_k = std::log(k);
  const double poly =
      std::pow(delta0, q) / std::pow(k * alpha * z, q) +
      std::pow(ln_d, 1.5 * q) * std::pow(ln_k, 1.0 + 2.0 * q) * std::pow(M, q) /
          (std::pow(z, q) * std::pow(k, q - 1.0) * std::pow(alpha, q / 2.0 - 1.0));
  const double expo =
      std::exp(-k * z * z * std::pow(alpha, 1.0 - 2.0 / q) / (M * M * ln_d));
  return fitted_constant * poly + expo;
}

double high_prob_radius(double delta, double k, double alpha, long d, double q,
                        double M, double delta0) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(k >= 2.0, "k must be >= 2");
  require(alpha > 0.0, "alpha must be positive");
  require(d >= 2, "d must be >= 2");
  require(q >= 2.0, "q must be >= 2");
  require(M > 0.0, "M must be positive");
  const double ln_d = std::log(static_cast<double>(d));
  const double ln_k = std::log(k);
  const double dq = std::pow(delta, 1.0 / q);
  const double t1 = std::pow(delta0, q) / (k * alpha * dq);
  const double t2 = std::pow(ln_d, 1.5) * std::pow(ln_k, 1.0 / q + 2.0) * M /
                    (std::pow(k, 1.0 - 1.0 / q) *
                     std::pow(alpha, 0.5 - 1.0 / q) * dq);
  const double t3 = std::sqrt(M * M * ln_d * std::log(1.0 / delta) /
                              (k * std::pow(alpha, 1.0 - 2.0 / q)));
  return t1 + t2 + t3;
}

long burn_in_steps(double r_hat, double D0, double tol) {
  require(r_hat > 0.0 && r_hat < 1.0, "burn_in_steps: rate must lie in (0, 1)");
  require(D0 >= 0.0 && tol > 0.0, "burn_in_steps: need D0 >= 0 and tol > 0");
  if (tol >= D0) return 0;
  return static_cast<long>(std::ceil(std::log(tol / D0) / std::log(r_hat)));
}

}  // namespace hdsgd
