// Acceptance suite: twelve end-to-end checks, one PASS/FAIL line each.
// Each criterion pins its tolerances as named constants next to the check;
// free parameters (grids, seeds, problem shapes) are frozen here so reruns
// are bit-for-bit comparable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "hdsgd/inequalities.hpp"
#include "hdsgd/verify.hpp"

using namespace hdsgd;

namespace {

constexpr int kThreads = 1;
constexpr long kConstantReplications = 4000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Matrix tridiagonal(long d, double diag, double off) {
  Matrix m = Matrix::Identity(d, d) * diag;
  for (long i = 0; i + 1 < d; ++i) {
    m(i, i + 1) = off;
    m(i + 1, i) = off;
  }
  return m;
}

ProblemPtr gaussian_regression(const Matrix& sigma) {
  return std::make_shared<LinearRegression>(
      sigma, Vector::Zero(sigma.rows()), CovariateLaw::kGaussian, 0,
      NoiseLaw::kGaussian, 1.0, 0);
}

// 1. Coupled-chain envelope with the explicit constant: the q-th moment of
//    the l^s distance stays below r^k d0 (1 + 3 rel SE) at every step.
Outcome criterion1() {
  ProblemPtr p = gaussian_regression(tridiagonal(16, 1.0, 0.2));
  RunConstants c = estimate_constants(*p, 4, 2.0, kConstantReplications, 101);
  const double alpha = c.alpha_max / 4.0;
  GmcReport rep = verify_gmc(*p, c, alpha, 1000, 200, 101, {}, kThreads);
  Outcome out;
  out.pass = rep.envelope_pass && rep.diverged_replications == 0;
  out.detail = fmt(
      "max moment/envelope ratio %.4f (limit 1), r=%.6f, alpha=%.3e, "
      "1000 pairs, k<=200, diverged=%ld",
      rep.max_violation_ratio, rep.r, alpha, rep.diverged_replications);
  return out;
}

// 2. Averaged-iterate stationarity gap under the explicit envelope
//    d0/(k(1-r)), plus the fitted k-slope.
Outcome criterion2() {
  constexpr double kSlopeTarget = -1.0;
  constexpr double kSlopeTol = 0.1;
  ProblemPtr p = gaussian_regression(tridiagonal(16, 1.0, 0.2));
  RunConstants c = estimate_constants(*p, 4, 2.0, kConstantReplications, 102);
  const double alpha = c.alpha_max / 4.0;
  GapReport rep = verify_asgd_stationarity_gap(*p, c, alpha,
                                               {100, 1000, 10000}, 1000, 102,
                                               kThreads);
  const bool slope_ok = std::abs(rep.fit.slope - kSlopeTarget) <= kSlopeTol;
  Outcome out;
  out.pass = rep.envelope_pass && slope_ok;
  out.detail = fmt(
      "envelope %s (gap/env %.3f %.3f %.3f), slope=%.3f+-%.3f vs %.1f+-%.1f",
      rep.envelope_pass ? "held" : "BROKEN",
      rep.fit.estimate[0] / rep.envelope[0],
      rep.fit.estimate[1] / rep.envelope[1],
      rep.fit.estimate[2] / rep.envelope[2], rep.fit.slope, rep.fit.slope_se,
      kSlopeTarget, kSlopeTol);
  return out;
}

// 3. Stationary moment grows like sqrt(alpha) on the curved problem.
Outcome criterion3() {
  constexpr double kSlopeTarget = 0.5;
  constexpr double kSlopeTol = 0.1;
  TanhProblem p(8, 0.5, 0.0, NoiseLaw::kGaussian, 1.0, 0);
  RunConstants c = estimate_constants(p, 4, 2.0, kConstantReplications, 103);
  ScalingFit fit = verify_sgd_moment_scaling(
      p, c, {1e-3, 2e-3, 4e-3, 8e-3}, 2000, 103, kThreads);
  Outcome out;
  out.pass = std::abs(fit.slope - kSlopeTarget) <= kSlopeTol;
  out.detail = fmt("slope=%.4f+-%.4f vs %.1f+-%.1f (4 alphas, R=2000)",
                   fit.slope, fit.slope_se, kSlopeTarget, kSlopeTol);
  return out;
}

// 4. Stationary averaged dispersion decays like k^{-1/2}.
Outcome criterion4() {
  constexpr double kSlopeTarget = -0.5;
  constexpr double kSlopeTol = 0.05;
  ProblemPtr p = gaussian_regression(Matrix::Identity(8, 8));
  RunConstants c = estimate_constants(*p, 2, 2.0, kConstantReplications, 104);
  ScalingFit fit = verify_asgd_variance_rate(*p, c, 0.01,
                                             {1000, 4000, 16000}, 500, 104,
                                             kThreads);
  Outcome out;
  out.pass = std::abs(fit.slope - kSlopeTarget) <= kSlopeTol;
  out.detail = fmt("slope=%.4f+-%.4f vs %.1f+-%.2f (k up to 16000, R=500)",
                   fit.slope, fit.slope_se, kSlopeTarget, kSlopeTol);
  return out;
}

// 5. Averaged-iterate bias is linear in alpha on the curved problem, and
//    statistically zero on the affine control.
Outcome criterion5() {
  constexpr double kSlopeTarget = 1.0;
  constexpr double kSlopeTol = 0.15;
  const std::vector<double> grid = {0.01, 0.02, 0.04};

  TanhProblem curved(4, 1.0, 1.7, NoiseLaw::kGaussian, 1.0, 0);
  RunConstants cc = estimate_constants(curved, 2, 2.0, kConstantReplications,
                                       105);
  BiasReport rep = verify_bias_scaling(curved, cc, grid, 40000, 5000, 105,
                                       kThreads);
  const bool slope_ok = std::abs(rep.fit.slope - kSlopeTarget) <= kSlopeTol;

  ProblemPtr control = gaussian_regression(Matrix::Identity(4, 4));
  RunConstants cr = estimate_constants(*control, 2, 2.0,
                                       kConstantReplications, 205);
  BiasReport ctl = verify_bias_scaling(*control, cr, grid, 4000, 5000, 205,
                                       kThreads);

  Outcome out;
  out.pass = slope_ok && ctl.control_pass;
  out.detail = fmt(
      "curved slope=%.3f+-%.3f vs %.1f+-%.2f; control max |t|=%.2f (limit 4)",
      rep.fit.slope, rep.fit.slope_se, kSlopeTarget, kSlopeTol,
      *std::max_element(ctl.max_t_stat.begin(), ctl.max_t_stat.end()));
  return out;
}

// 6. Heavy-tail domination: with one constant fitted at the median grid
//    point, the polynomial + exponential bound covers the empirical tail,
//    and the fitted log-tail slope is at most -(q-1) + 0.75.
Outcome criterion6() {
  constexpr double kSlopeLimit = -(4.0 - 1.0) + 0.75;
  ProblemPtr p = std::make_shared<LinearRegression>(
      Matrix::Identity(4, 4), Vector::Zero(4), CovariateLaw::kGaussian, 0,
      NoiseLaw::kStudentT, 1.0, 5);
  RunConstants c = estimate_constants(*p, 2, 4.0, kConstantReplications, 106);
  const double alpha = c.alpha_max / 4.0;
  TailReport rep = estimate_tail(*p, c, alpha, 10000, {}, 20000, 106,
                                 kThreads);
  Outcome out;
  out.pass = rep.domination_pass && rep.slope_window_found &&
             rep.log_slope <= kSlopeLimit;
  out.detail = fmt(
      "domination %s over %zu z, tail slope=%.2f+-%.2f (limit %.2f), "
      "fitted constant %.3g",
      rep.domination_pass ? "held" : "BROKEN", rep.points.size(),
      rep.log_slope, rep.log_slope_se, kSlopeLimit, rep.fitted_constant);
  return out;
}

// 7. Partial sums match the lag-window Gaussian limit: Frobenius relative
//    error <= 0.15 and KS below 1.63/sqrt(R) in >= 3/4 of coordinates.
Outcome criterion7() {
  ProblemPtr p = gaussian_regression(Matrix::Identity(4, 4));
  RunConstants c = estimate_constants(*p, 2, 2.0, kConstantReplications, 107);
  GaussianApproxReport rep = verify_gaussian_approx(
      *p, c, 0.01, 200000, 500, 107, 0, 1500, kThreads);
  Outcome out;
  out.pass = rep.cov_pass && rep.ks_pass;
  out.detail = fmt(
      "frobenius rel err=%.4f (limit 0.15), KS below %.4f in %ld/4 coords "
      "(need 3), bandwidth=1500",
      rep.frobenius_rel_error, rep.ks_critical, rep.ks_pass_count);
  return out;
}

// 8. Deterministic remainder inequality on 1e5 random tuples.
Outcome criterion8() {
  PropertyResult r = test_taylor_remainder(100000, 108);
  Outcome out;
  out.pass = r.pass();
  out.detail = fmt("%ld tuples, %ld violations (slack 1e-12), worst margin %.3g",
                   r.trials, r.violations, r.worst_margin);
  return out;
}

// 9. Exact-oracle moment inequalities on finite-support distributions:
//    both displays of the cross-term bound (1e3 instances) and the maximal
//    inequality (200 instances), zero violations beyond 1e-10 relative.
Outcome criterion9() {
  PropertyResult rio = test_rio(1000, 109);
  PropertyResult maximal = test_maximal(200, 209);
  Outcome out;
  out.pass = rio.pass() && maximal.pass();
  out.detail = fmt(
      "cross-term: %ld instances %ld violations; maximal: %ld instances "
      "%ld violations",
      rio.trials, rio.violations, maximal.trials, maximal.violations);
  return out;
}

// 10. Norm sandwich max <= l^{s_d} <= e * max on 1e5 vectors per dimension.
Outcome criterion10() {
  PropertyResult r = test_norm_equivalence(100000, {2, 10, 100, 10000}, 110);
  Outcome out;
  out.pass = r.pass();
  out.detail = fmt("%ld vectors across d in {2,10,100,10000}, %ld violations",
                   r.trials, r.violations);
  return out;
}

// 11. Closed-form consistency: the learning-rate root at q=2 matches its
//     algebraic reduction to 1e-10 relative, and the contraction curve
//     attains its analytic vertex.
Outcome criterion11() {
  constexpr double kRelTol = 1e-10;
  double worst_root = 0.0, worst_vertex = 0.0;
  for (long t = 0; t < 100; ++t) {
    CounterRng rng(mix_seed(111, t), Stream::kConstants, 0);
    const double mu = rng.uniform(0.05, 5.0);
    const double L = rng.uniform(0.05, 5.0);
    const int s = 2 * (1 + static_cast<int>(rng.next_u64() % 4));
    const double root = alpha_root(mu, L, s, 2.0);
    const double closed =
        2.0 * mu / ((std::abs(2.0 - s) + (s - 1)) * L * L);
    worst_root = std::max(worst_root, std::abs(root - closed) / closed);

    const double m = std::max(2.0, static_cast<double>(s));
    const double vertex_alpha = mu / (m * L * L);
    const double vertex_r = 1.0 - mu * mu / (m * L * L);
    const double r = contraction_rate(mu, L, s, 2.0, vertex_alpha);
    worst_vertex = std::max(worst_vertex,
                            std::abs(r - vertex_r) / std::abs(vertex_r));
  }
  Outcome out;
  out.pass = worst_root <= kRelTol && worst_vertex <= 1e-12;
  out.detail = fmt(
      "100 tuples: root rel err %.2e (limit 1e-10), vertex rel err %.2e",
      worst_root, worst_vertex);
  return out;
}

// 12. End-to-end recipe: calibrated (alpha_rec, k_rec) reaches epsilon
//     l^infinity accuracy in >= 95%% of macro replications.
Outcome criterion12() {
  constexpr double kEpsilon = 0.05;
  ProblemPtr p = gaussian_regression(tridiagonal(10, 1.0, 0.2));
  RunConstants c = estimate_constants(*p, 4, 2.0, kConstantReplications, 112);
  ComplexityReport rep = verify_complexity(*p, c, kEpsilon, 20, 50, 112,
                                           kThreads);
  Outcome out;
  out.pass = rep.pass;
  out.detail = fmt(
      "%ld/20 macro replications within eps=%.2f (need >=19), "
      "alpha_rec=%.3e, k_rec=%.0f",
      rep.passes, kEpsilon, rep.recipe.alpha_rec, rep.recipe.k_rec);
  return out;
}

using CriterionFn = Outcome (*)();

struct Criterion {
  int id;
  const char* name;
  CriterionFn fn;
};

const Criterion kCriteria[] = {
    {1, "coupled-moment envelope", criterion1},
    {2, "averaged-gap envelope and slope", criterion2},
    {3, "sqrt-alpha moment rate", criterion3},
    {4, "k^(-1/2) dispersion rate", criterion4},
    {5, "alpha-linear bias with affine control", criterion5},
    {6, "heavy-tail domination", criterion6},
    {7, "gaussian approximation diagnostics", criterion7},
    {8, "remainder inequality sweep", criterion8},
    {9, "exact-oracle inequalities", criterion9},
    {10, "norm sandwich", criterion10},
    {11, "closed-form consistency", criterion11},
    {12, "complexity recipe", criterion12},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (const Criterion& c : kCriteria)
        std::printf("%2d  %s\n", c.id, c.name);
      return 0;
    } else {
      std::fprintf(stderr,
                   "usage: %s [--criterion N] [--list]\n", argv[0]);
      return 2;
    }
  }

  bool all_pass = true;
  bool ran_any = false;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    ran_any = true;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out = c.fn();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%s  criterion %2d  %-38s %s  [%.1fs]\n",
                out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                secs);
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  if (!ran_any) {
    std::fprintf(stderr, "no such criterion: %d\n", only);
    return 2;
  }
  return all_pass ? 0 : 1;
}
