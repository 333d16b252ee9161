#pragma once

#include <string>
#include <vector>

namespace hdsgd {

// Largest valid constant learning rate: 2 mu / (max{q,s} L^2). Rates in
// (0, alpha_max) contract; everything downstream checks against it.
double alpha_max(double mu, double L, int s, double q);

// One-step contraction factor 1 - 2 mu a + max{q,s} L^2 a^2 for the coupled
// squared q-th moment of the l^s distance. Requires 0 < a < alpha_max.
double contraction_rate(double mu, double L, int s, double q, double alpha);

// Norm-scale rate sqrt(contraction_rate): the per-step factor the one-step
// recursion supports for the (unsquared) q-th mean distance. Burn-in lengths
// and certificates use this scale.
double norm_contraction_rate(double mu, double L, int s, double q, double alpha);

// Moment-recursion factor 1 - 2 a mu + 7 (max{q,s} - 1) a^2 L^2, valid for
// 0 < a < alpha_max / 7. Always >= contraction_rate on its validity range.
double tilde_contraction_rate(double mu, double L, int s, double q, double alpha);

// Unique positive root of F(a) = -mu + c a (1 + L a)^(q-2),
// c = (|q-s| + (s-1)) L^2 / 2. Bracketing (doubling from mu/(2c), at most 200
// doublings) then bisection to 1e-12 relative width. For q = 2 this reduces
// to the closed form 2 mu / ((|2-s| + (s-1)) L^2).
double alpha_root(double mu, double L, int s, double q);

struct AsgdBoundTerms {
  double variance_term = 0.0;  // sqrt(s/k) M (L sqrt(a max{q,s}) + 1)
  double init_term = 0.0;      // delta0 / (k (1 - r))
  double bias_term = 0.0;      // M^2 max{q,s} a d^((q/(q-1))(1 - 2/s))
  double total = 0.0;
  bool up_to_constants = true;  // absolute constants set to 1
};

// Three-term averaged-iterate error bound. `s` must equal choose_s_d(d).
AsgdBoundTerms asgd_bound_terms(double M, double L, double mu, long d, double q,
                                int s, double alpha, double k, double delta0);

struct ComplexityRecipe {
  int s_d = 0;
  double V = 0.0;          // L M sqrt(max{q, s_d}) + M
  double B = 0.0;          // M^2 max{q, s_d} d^((q/(q-1))(1 - 2/s_d))
  double alpha_rec = 0.0;  // min{eps / (3 B), alpha_max / 7}
  double k_rec = 0.0;      // max{9 s_d V^2 a / eps^2, 3 delta0 / (a eps)}
  bool up_to_constants = true;
};

// Recipe for an epsilon-accurate averaged iterate in the l^infinity norm.
ComplexityRecipe complexity(double epsilon, double M, double L, double mu,
                            long d, double q, double delta0);

// Polynomial + sub-Gaussian tail bound for P(|avg_k - beta*|_inf > z).
// `fitted_constant` scales the polynomial bracket; the exponential term
// carries no free constant.
double fuk_nagaev_bound(double z, double k, double alpha, long d, double q,
                        double M, double delta0, double fitted_constant);

// High-probability radius at confidence 1 - delta (three-term sum, absolute
// constants set to 1; transcribed verbatim, including the delta0^q numerator
// over the k a delta^(1/q) denominator in the first term).
double high_prob_radius(double delta, double k, double alpha, long d, double q,
                        double M, double delta0);

// Burn-in length ceil(ln(tol / D0) / ln(r_hat)) for a norm-scale rate r_hat
// in (0, 1); zero when tol >= D0.
long burn_in_steps(double r_hat, double D0, double tol);

}  // namespace hdsgd
