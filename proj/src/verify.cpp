#include "hdsgd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hdsgd/parallel.hpp"

namespace hdsgd {
namespace {

double rel_se(const EstimateWithCI& e) {
  return e.value > 0.0 ? e.se / e.value : 0.0;
}

// Plain OLS slope of y against x (no weights), for decay-rate reporting.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double xb = 0.0, yb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xb += x[i];
    yb += y[i];
  }
  xb /= static_cast<double>(n);
  yb /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xb) * (x[i] - xb);
    sxy += (x[i] - xb) * (y[i] - yb);
  }
  return sxy / sxx;
}

struct WilsonInterval {
  double lo = 0.0, hi = 0.0;
};

WilsonInterval wilson(long count, long n) {
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(count) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // At the boundary counts the analytic limit is exact; center - half leaves
  // ~1e-18 of cancellation residue that would poison >= comparisons.
  const double lo = count == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = count == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

}  // namespace

RunConstants estimate_constants(const Problem& p, int s, double q,
                                long replications, std::uint64_t seed) {
  RunConstants c;
  c.s = s;
  c.q = q;
  c.mu = p.analytic_mu();
  c.L = p.estimate_L(s, q, replications, seed);
  c.M = p.estimate_M(s, q, replications, seed);
  c.alpha_max = alpha_max(c.mu.value, c.L.value, s, q);
  return c;
}

GmcReport verify_gmc(const Problem& p, const RunConstants& c, double alpha,
                     long R, long k_max, std::uint64_t seed,
                     std::vector<long> checkpoints, int threads) {
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (R < 2) throw std::invalid_argument("need R >= 2 replications");
  if (checkpoints.empty()) {
    checkpoints.resize(k_max);
    std::iota(checkpoints.begin(), checkpoints.end(), 1L);
  }
  GmcReport rep;
  rep.alpha = alpha;
  rep.replications = R;
  rep.seed = seed;
  const bool contracting = alpha > 0.0 && alpha < c.alpha_max;
  rep.r = contracting
              ? contraction_rate(c.mu.value, c.L.value, c.s, c.q, alpha)
              : 1.0;
  rep.contraction_guaranteed = contracting;
  rep.ln_r = std::log(rep.r);

  const Vector half = Vector::Constant(p.dim(), 0.5);
  const Vector a0 = p.beta_star() + half;
  const Vector b0 = p.beta_star() - half;
  rep.d0 = ls_norm(a0 - b0, c.s);

  std::vector<std::vector<double>> samples(
      checkpoints.size(), std::vector<double>(R, 0.0));
  std::vector<char> diverged(R, 0);
  parallel_for(R, threads, [&](long i) {
    try {
      CoupledRun run = run_coupled_pair(p, alpha, a0, b0, k_max,
                                        mix_seed(seed, i), c.s, {});
      for (std::size_t ci = 0; ci < checkpoints.size(); ++ci)
        samples[ci][i] = run.iterate_distance[checkpoints[ci]];
    } catch (const std::runtime_error&) {
      diverged[i] = 1;
    }
  });
  rep.diverged_replications =
      std::count(diverged.begin(), diverged.end(), char(1));

  rep.envelope_pass = rep.diverged_replications == 0;
  std::vector<double> ks, lnm;
  for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
    GmcCheckpoint cp;
    cp.k = checkpoints[ci];
    cp.moment = lq_moment(samples[ci], c.q);
    cp.envelope = std::pow(rep.r, static_cast<double>(cp.k)) * rep.d0;
    cp.envelope_sq = std::pow(rep.r, 0.5 * static_cast<double>(cp.k)) * rep.d0;
    const double allowed = cp.envelope * (1.0 + 3.0 * rel_se(cp.moment));
    cp.within = rep.diverged_replications == 0 && cp.moment.value <= allowed;
    rep.envelope_pass = rep.envelope_pass && cp.within;
    if (allowed > 0.0)
      rep.max_violation_ratio =
          std::max(rep.max_violation_ratio, cp.moment.value / allowed);
    if (cp.moment.value > 0.0) {
      ks.push_back(static_cast<double>(cp.k));
      lnm.push_back(std::log(cp.moment.value));
    }
    rep.checkpoints.push_back(std::move(cp));
  }
  if (ks.size() >= 2) rep.fitted_decay = ols_slope(ks, lnm);
  return rep;
}

ScalingFit verify_sgd_moment_scaling(const Problem& p, const RunConstants& c,
                                     const std::vector<double>& alpha_grid,
                                     long R, std::uint64_t seed, int threads) {
  if (alpha_grid.size() < 2)
    throw std::invalid_argument("need an alpha grid with >= 2 points");
  std::vector<double> est(alpha_grid.size()), se(alpha_grid.size());
  for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
    const double alpha = alpha_grid[ai];
    std::vector<double> samp(R);
    parallel_for(R, threads, [&](long i) {
      const std::uint64_t rs = mix_seed(seed, ai * static_cast<std::size_t>(R) + i);
      BurnInResult b = burn_in_stationary(p, alpha, c.mu.value, c.L.value, c.s,
                                          c.q, c.M.value, rs);
      samp[i] = ls_norm(b.state.beta - p.beta_star(), c.s);
    });
    EstimateWithCI m = lq_moment(samp, c.q);
    est[ai] = m.value;
    se[ai] = m.se;
  }
  return fit_log_slope(alpha_grid, est, se, 0.5, 0.1);
}

GapReport verify_asgd_stationarity_gap(const Problem& p, const RunConstants& c,
                                       double alpha,
                                       const std::vector<long>& k_grid, long R,
                                       std::uint64_t seed, int threads) {
  if (k_grid.size() < 2)
    throw std::invalid_argument("need a k grid with >= 2 points");
  GapReport rep;
  rep.r = contraction_rate(c.mu.value, c.L.value, c.s, c.q, alpha);
  const long k_max = k_grid.back();
  const Vector cold0 = p.beta_star() + Vector::Constant(p.dim(), 0.5);

  std::vector<std::vector<double>> gap(k_grid.size(),
                                       std::vector<double>(R, 0.0));
  std::vector<double> d0(R, 0.0);
  parallel_for(R, threads, [&](long i) {
    const std::uint64_t rs = mix_seed(seed, i);
    BurnInResult b = burn_in_stationary(p, alpha, c.mu.value, c.L.value, c.s,
                                        c.q, c.M.value, rs);
    // Shared measurement noise: both chains advance on the replication seed.
    CoupledRun run =
        run_coupled_pair(p, alpha, cold0, b.state.beta, k_max, rs, c.s, k_grid);
    d0[i] = run.iterate_distance[0];
    for (std::size_t ki = 0; ki < k_grid.size(); ++ki)
      gap[ki][i] = run.mean_gap[ki];
  });

  EstimateWithCI d0_mom = lq_moment(d0, c.q);
  rep.d0_moment = d0_mom.value;
  std::vector<double> ks(k_grid.begin(), k_grid.end());
  std::vector<double> est(k_grid.size()), se(k_grid.size());
  rep.envelope_pass = true;
  for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
    EstimateWithCI m = lq_moment(gap[ki], c.q);
    est[ki] = m.value;
    se[ki] = m.se;
    const double env =
        rep.d0_moment / (static_cast<double>(k_grid[ki]) * (1.0 - rep.r));
    rep.envelope.push_back(env);
    const bool ok = m.value <= env * (1.0 + 3.0 * rel_se(m));
    rep.within.push_back(ok);
    rep.envelope_pass = rep.envelope_pass && ok;
  }
  rep.fit = fit_log_slope(ks, est, se, -1.0, 0.1);
  return rep;
}

ScalingFit verify_asgd_variance_rate(const Problem& p, const RunConstants& c,
                                     double alpha,
                                     const std::vector<long>& k_grid, long R,
                                     std::uint64_t seed, int threads) {
  if (k_grid.size() < 2)
    throw std::invalid_argument("need a k grid with >= 2 points");
  std::vector<double> ks(k_grid.begin(), k_grid.end());
  std::vector<double> est(k_grid.size()), se(k_grid.size());
  for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
    const long k = k_grid[ki];
    Matrix avgs(R, p.dim());
    parallel_for(R, threads, [&](long i) {
      const std::uint64_t rs =
          mix_seed(seed, ki * static_cast<std::size_t>(R) + i);
      BurnInResult b = burn_in_stationary(p, alpha, c.mu.value, c.L.value, c.s,
                                          c.q, c.M.value, rs);
      ChainState st = b.state;
      NoiseSample ws;
      Vector grad(p.dim());
      for (long step = 0; step < k; ++step) sgd_step(p, alpha, rs, st, ws, grad);
      avgs.row(i) = st.running_mean;
    });
    const Vector center = avgs.colwise().mean();
    std::vector<double> samp(R);
    for (long i = 0; i < R; ++i)
      samp[i] = ls_norm(avgs.row(i).transpose() - center, c.s);
    EstimateWithCI m = lq_moment(samp, c.q);
    est[ki] = m.value;
    se[ki] = m.se;
  }
  return fit_log_slope(ks, est, se, -0.5, 0.05);
}

BiasReport verify_bias_scaling(const Problem& p, const RunConstants& c,
                               const std::vector<double>& alpha_grid, long k,
                               long R, std::uint64_t seed, int threads) {
  if (alpha_grid.size() < 2)
    throw std::invalid_argument("need an alpha grid with >= 2 points");
  BiasReport rep;
  rep.control_pass = true;
  for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
    const double alpha = alpha_grid[ai];
    Matrix avgs(R, p.dim());
    parallel_for(R, threads, [&](long i) {
      const std::uint64_t rs =
          mix_seed(seed, ai * static_cast<std::size_t>(R) + i);
      BurnInResult b = burn_in_stationary(p, alpha, c.mu.value, c.L.value, c.s,
                                          c.q, c.M.value, rs);
      ChainState st = b.state;
      NoiseSample ws;
      Vector grad(p.dim());
      for (long step = 0; step < k; ++step) sgd_step(p, alpha, rs, st, ws, grad);
      avgs.row(i) = st.running_mean;
    });
    const Vector mean = avgs.colwise().mean();
    const Vector bias = mean - p.beta_star();
    Vector sd(p.dim());
    for (long j = 0; j < p.dim(); ++j)
      sd[j] = std::sqrt((avgs.col(j).array() - mean[j]).square().sum() /
                        static_cast<double>(R - 1));
    const Vector se_mean = sd / std::sqrt(static_cast<double>(R));

    long j_star = 0;
    bias.cwiseAbs().maxCoeff(&j_star);
    rep.bias.push_back(std::abs(bias[j_star]));
    rep.se.push_back(se_mean[j_star]);
    double max_t = 0.0;
    for (long j = 0; j < p.dim(); ++j)
      if (se_mean[j] > 0.0)
        max_t = std::max(max_t, std::abs(bias[j]) / se_mean[j]);
    rep.max_t_stat.push_back(max_t);
    rep.control_pass = rep.control_pass && max_t <= 4.0;
  }
  bool fit_usable = true;
  for (double b : rep.bias) fit_usable = fit_usable && b > 0.0;
  if (fit_usable)
    rep.fit = fit_log_slope(alpha_grid, rep.bias, rep.se, 1.0, 0.15);
  else {
    rep.fit.x = alpha_grid;
    rep.fit.estimate = rep.bias;
    rep.fit.se = rep.se;
    rep.fit.target = 1.0;
    rep.fit.tolerance = 0.15;
    rep.fit.pass = false;
  }
  return rep;
}

TailReport estimate_tail(const Problem& p, const RunConstants& c, double alpha,
                         long k, std::vector<double> z_grid, long R,
                         std::uint64_t seed, int threads) {
  contraction_rate(c.mu.value, c.L.value, c.s, c.q, alpha);  // range check
  TailReport rep;
  rep.replications = R;

  const auto run_once = [&](std::uint64_t rs, double& dev, double& init_dev) {
    const Vector beta0 = default_init(p, rs);
    init_dev = max_norm(beta0 - p.beta_star());
    ChainState st{beta0, Vector::Zero(p.dim()), 0};
    NoiseSample ws;
    Vector grad(p.dim());
    for (long step = 0; step < k; ++step) sgd_step(p, alpha, rs, st, ws, grad);
    dev = max_norm(st.running_mean - p.beta_star());
  };

  if (z_grid.empty()) {
    const long pilot_R = std::min<long>(500, R);
    std::vector<double> pilot(pilot_R);
    const std::uint64_t pseed = mix_seed(seed, Stream::kPilot);
    parallel_for(pilot_R, threads, [&](long i) {
      double init_dev = 0.0;
      run_once(mix_seed(pseed, i), pilot[i], init_dev);
    });
    std::sort(pilot.begin(), pilot.end());
    const double survival[] = {0.5,  0.25,  0.1,    0.05, 0.025,
                               0.01, 0.005, 0.0025, 0.001};
    for (double sp : survival) {
      const long idx = std::min<long>(
          pilot_R - 1,
          static_cast<long>(std::floor((1.0 - sp) * pilot_R)));
      const double z = pilot[idx];
      if (z_grid.empty() || z > z_grid.back() * (1.0 + 1e-9))
        z_grid.push_back(z);
    }
  }
  if (z_grid.size() < 2)
    throw std::invalid_argument("tail grid needs >= 2 distinct z values");

  std::vector<double> devs(R), init_devs(R);
  parallel_for(R, threads, [&](long i) {
    run_once(mix_seed(seed, i), devs[i], init_devs[i]);
  });
  rep.delta0 = lq_moment(init_devs, c.q).value;

  for (double z : z_grid) {
    TailPoint pt;
    pt.z = z;
    pt.count = std::count_if(devs.begin(), devs.end(),
                             [&](double v) { return v > z; });
    pt.p_hat = static_cast<double>(pt.count) / static_cast<double>(R);
    const WilsonInterval ci = wilson(pt.count, R);
    pt.ci_lo = ci.lo;
    pt.ci_hi = ci.hi;
    rep.points.push_back(pt);
  }

  // One free constant scales the polynomial bracket; anchor it at the median
  // grid point so domination is a real check at every other z.
  const TailPoint& med = rep.points[rep.points.size() / 2];
  const double poly_med =
      fuk_nagaev_bound(med.z, static_cast<double>(k), alpha, p.dim(), c.q,
                       c.M.value, rep.delta0, 1.0) -
      fuk_nagaev_bound(med.z, static_cast<double>(k), alpha, p.dim(), c.q,
                       c.M.value, rep.delta0, 0.0);
  const double expo_med = fuk_nagaev_bound(med.z, static_cast<double>(k), alpha,
                                           p.dim(), c.q, c.M.value, rep.delta0,
                                           0.0);
  rep.fitted_constant =
      poly_med > 0.0 ? std::max(0.0, (med.p_hat - expo_med) / poly_med) : 0.0;

  rep.domination_pass = true;
  for (TailPoint& pt : rep.points) {
    pt.bound = fuk_nagaev_bound(pt.z, static_cast<double>(k), alpha, p.dim(),
                                c.q, c.M.value, rep.delta0,
                                rep.fitted_constant);
    rep.domination_pass = rep.domination_pass && pt.bound >= pt.ci_lo;
  }

  // Tail-window slope: points rare enough to be in the tail but populated
  // enough to carry a meaningful relative error.
  std::vector<double> zs, ps, ses;
  for (const TailPoint& pt : rep.points) {
    if (pt.p_hat <= 0.05 && pt.count >= 10) {
      zs.push_back(pt.z);
      ps.push_back(pt.p_hat);
      ses.push_back(std::sqrt(pt.p_hat * (1.0 - pt.p_hat) /
                              static_cast<double>(R)));
    }
  }
  if (zs.size() >= 2) {
    ScalingFit f = fit_log_slope(zs, ps, ses, 0.0, 1.0);
    rep.log_slope = f.slope;
    rep.log_slope_se = f.slope_se;
    rep.slope_window_found = true;
  }
  return rep;
}

GaussianApproxReport verify_gaussian_approx(const Problem& p,
                                            const RunConstants& c, double alpha,
                                            long T, long R, std::uint64_t seed,
                                            long xi_length, long bandwidth,
                                            int threads) {
  if (T < 10 * p.dim())
    throw std::invalid_argument("need T >= 10*d for the partial-sum check");
  GaussianApproxReport rep;
  rep.T = T;
  rep.replications = R;
  rep.xi_trajectory_length = xi_length > 0 ? xi_length : 10 * T;
  rep.bandwidth =
      bandwidth > 0 ? bandwidth : default_bandwidth(rep.xi_trajectory_length);

  const long d = p.dim();
  {
    // Dedicated long trajectory for the lag-window estimate.
    const std::uint64_t xs = mix_seed(seed, Stream::kPilot);
    BurnInResult b = burn_in_stationary(p, alpha, c.mu.value, c.L.value, c.s,
                                        c.q, c.M.value, xs);
    ChainState st = b.state;
    NoiseSample ws;
    Vector grad(d);
    Matrix traj(rep.xi_trajectory_length, d);
    for (long t = 0; t < rep.xi_trajectory_length; ++t) {
      sgd_step(p, alpha, xs, st, ws, grad);
      traj.row(t) = st.beta;
    }
    rep.xi_hat = estimate_long_run_cov(traj, rep.bandwidth).xi;
  }

  Matrix sums(R, d);
  parallel_for(R, threads, [&](long i) {
    const std::uint64_t rs = mix_seed(seed, i + 1);
    BurnInResult b = burn_in_stationary(p, alpha, c.mu.value, c.L.value, c.s,
                                        c.q, c.M.value, rs);
    ChainState st = b.state;
    NoiseSample ws;
    Vector grad(d);
    Vector acc = Vector::Zero(d);
    for (long t = 0; t < T; ++t) {
      sgd_step(p, alpha, rs, st, ws, grad);
      acc += st.beta - p.beta_star();
    }
    sums.row(i) = acc / std::sqrt(static_cast<double>(T));
  });

  const Vector mean = sums.colwise().mean();
  Matrix centered = sums.rowwise() - mean.transpose();
  rep.partial_sum_cov =
      centered.transpose() * centered / static_cast<double>(R - 1);
  rep.frobenius_rel_error =
      (rep.partial_sum_cov - rep.xi_hat).norm() / rep.xi_hat.norm();
  rep.cov_pass = rep.frobenius_rel_error <= 0.15;

  rep.ks_critical = 1.63 / std::sqrt(static_cast<double>(R));
  for (long j = 0; j < d; ++j) {
    std::vector<double> col(R);
    for (long i = 0; i < R; ++i) col[i] = sums(i, j);
    std::sort(col.begin(), col.end());
    const double sd = std::sqrt(rep.xi_hat(j, j));
    double dstat = 0.0;
    for (long i = 0; i < R; ++i) {
      const double cdf = 0.5 * std::erfc(-col[i] / (sd * std::sqrt(2.0)));
      const double hi = static_cast<double>(i + 1) / static_cast<double>(R);
      const double lo = static_cast<double>(i) / static_cast<double>(R);
      dstat = std::max({dstat, std::abs(hi - cdf), std::abs(cdf - lo)});
    }
    rep.ks_stats.push_back(dstat);
    if (dstat < rep.ks_critical) ++rep.ks_pass_count;
  }
  rep.ks_pass = 4 * rep.ks_pass_count >= 3 * d;
  return rep;
}

ComplexityReport verify_complexity(const Problem& p, const RunConstants& c,
                                   double epsilon, long macro_replications,
                                   long inner_replications, std::uint64_t seed,
                                   int threads) {
  if (c.s != choose_s_d(p.dim()))
    throw std::invalid_argument("complexity recipe requires s = s_d");
  ComplexityReport rep;
  rep.epsilon = epsilon;
  const double delta0 = 1.0;  // a-priori bound on the uniform init deviation
  ComplexityRecipe raw = complexity(epsilon, c.M.value, c.L.value, c.mu.value,
                                    p.dim(), c.q, delta0);

  // --- Calibration at a pilot point: measure each term of the three-term
  // bound once and solve for its effective constant.
  const double a0 = c.alpha_max / 7.0;
  const long k0 = 2000;
  const long pilot_R = 200;
  const double r0 = contraction_rate(c.mu.value, c.L.value, c.s, c.q, a0);

  Matrix avgs(pilot_R, p.dim());
  parallel_for(pilot_R, threads, [&](long i) {
    const std::uint64_t rs = mix_seed(mix_seed(seed, Stream::kPilot), i);
    BurnInResult b = burn_in_stationary(p, a0, c.mu.value, c.L.value, c.s, c.q,
                                        c.M.value, rs);
    ChainState st = b.state;
    NoiseSample ws;
    Vector grad(p.dim());
    for (long step = 0; step < k0; ++step) sgd_step(p, a0, rs, st, ws, grad);
    avgs.row(i) = st.running_mean;
  });
  const Vector center = avgs.colwise().mean();
  std::vector<double> disp(pilot_R);
  for (long i = 0; i < pilot_R; ++i)
    disp[i] = max_norm(avgs.row(i).transpose() - center);
  const double m_big = std::max(c.q, static_cast<double>(c.s));
  const double theory_var =
      std::sqrt(static_cast<double>(c.s) / static_cast<double>(k0)) *
      c.M.value * (c.L.value * std::sqrt(a0 * m_big) + 1.0);
  rep.c1 = lq_moment(disp, c.q).value / theory_var;

  // Cold-vs-stationary averaged gap for the initialization constant.
  const Vector cold0 = p.beta_star() + Vector::Constant(p.dim(), 0.5);
  std::vector<double> gaps(pilot_R), d0s(pilot_R);
  parallel_for(pilot_R, threads, [&](long i) {
    const std::uint64_t rs = mix_seed(mix_seed(seed, Stream::kSwap), i);
    BurnInResult b = burn_in_stationary(p, a0, c.mu.value, c.L.value, c.s, c.q,
                                        c.M.value, rs);
    CoupledRun run =
        run_coupled_pair(p, a0, cold0, b.state.beta, k0, rs, c.s, {k0});
    d0s[i] = run.iterate_distance[0];
    gaps[i] = run.mean_gap[0];
  });
  const double gap_mom = lq_moment(gaps, c.q).value;
  const double d0_mom = lq_moment(d0s, c.q).value;
  rep.c2 = gap_mom * static_cast<double>(k0) * (1.0 - r0) / d0_mom;

  // Bias constant from the pilot ensemble mean; zero-bias problems calibrate
  // to (nearly) zero and the learning-rate branch is then capped elsewhere.
  const double bias_meas = max_norm(center - p.beta_star());
  const double theory_bias =
      c.M.value * c.M.value * m_big * a0 *
      std::pow(static_cast<double>(p.dim()),
               (c.q / (c.q - 1.0)) * (1.0 - 2.0 / static_cast<double>(c.s)));
  rep.c3 = std::max(bias_meas / theory_bias, 1e-12);

  rep.recipe = raw;
  rep.recipe.alpha_rec =
      std::min(epsilon / (3.0 * rep.c3 * raw.B), c.alpha_max / 7.0);
  rep.recipe.k_rec = std::max(
      9.0 * static_cast<double>(rep.recipe.s_d) *
          (rep.c1 * raw.V) * (rep.c1 * raw.V) * rep.recipe.alpha_rec /
          (epsilon * epsilon),
      3.0 * rep.c2 * delta0 / (rep.recipe.alpha_rec * epsilon));
  rep.recipe.up_to_constants = false;

  const double a_rec = rep.recipe.alpha_rec;
  const long k_rec = static_cast<long>(std::ceil(rep.recipe.k_rec));
  rep.k_curve = {std::max(1L, k_rec / 4), std::max(1L, k_rec / 2), k_rec};

  std::vector<std::vector<double>> curve_samples(rep.k_curve.size());
  for (long m = 0; m < macro_replications; ++m) {
    std::vector<double> errs(inner_replications);
    std::vector<std::vector<double>> macro_curve(
        rep.k_curve.size(), std::vector<double>(inner_replications));
    const std::uint64_t ms = mix_seed(seed, 1000 + m);
    parallel_for(inner_replications, threads, [&](long i) {
      const std::uint64_t rs = mix_seed(ms, i);
      Trajectory t = run_chain(p, a_rec, default_init(p, rs), k_rec, rs,
                               rep.k_curve);
      for (std::size_t ci = 0; ci < rep.k_curve.size(); ++ci)
        macro_curve[ci][i] = max_norm(t.mean[ci] - p.beta_star());
      errs[i] = macro_curve.back()[i];
    });
    const double achieved = lq_moment(errs, c.q).value;
    rep.achieved.push_back(achieved);
    if (achieved <= epsilon) ++rep.passes;
    if (m == 0)
      for (std::size_t ci = 0; ci < rep.k_curve.size(); ++ci)
        curve_samples[ci] = macro_curve[ci];
  }
  for (const auto& samp : curve_samples)
    rep.k_curve_error.push_back(lq_moment(samp, c.q).value);
  rep.pass_fraction = static_cast<double>(rep.passes) /
                      static_cast<double>(macro_replications);
  rep.pass = rep.pass_fraction >= 0.95;
  return rep;
}

AssumptionCheck check_strong_convexity(const Problem& p, double mu, long pairs,
                                       std::uint64_t seed) {
  AssumptionCheck res;
  res.worst_margin = std::numeric_limits<double>::max();
  const int s_grid[3] = {2, 4, 8};
  Vector b1(p.dim()), b2(p.dim()), g1(p.dim()), g2(p.dim());
  for (long t = 0; t < pairs; ++t) {
    CounterRng rng(mix_seed(seed, t), Stream::kInit, 0);
    for (long i = 0; i < p.dim(); ++i) {
      b1[i] = p.beta_star()[i] + rng.uniform(-2.0, 2.0);
      b2[i] = p.beta_star()[i] + rng.uniform(-2.0, 2.0);
    }
    p.population_gradient(b1, g1);
    p.population_gradient(b2, g2);
    const Vector diff = b1 - b2;
    const Vector gdiff = g1 - g2;
    for (int s : s_grid) {
      const Vector dpow = elementwise_power(diff, s - 1);
      const double lhs = dpow.dot(gdiff);
      const double rhs = mu * std::pow(ls_norm(diff, s), s);
      const double margin = lhs - rhs + 1e-10 * std::max(1.0, std::abs(rhs));
      ++res.trials;
      if (margin < 0.0) ++res.violations;
      res.worst_margin = std::min(res.worst_margin, margin);
    }
  }
  return res;
}

AssumptionCheck check_stochastic_lipschitz(const Problem& p,
                                           const ConstantEstimate& L, int s,
                                           double q, long pairs,
                                           long noise_draws,
                                           std::uint64_t seed) {
  AssumptionCheck res;
  res.worst_margin = std::numeric_limits<double>::max();
  Vector b1(p.dim()), b2(p.dim()), g1(p.dim()), g2(p.dim());
  NoiseSample ws;
  std::vector<double> ratio(noise_draws);
  for (long t = 0; t < pairs; ++t) {
    const std::uint64_t ps = mix_seed(seed, t);
    CounterRng rng(ps, Stream::kInit, 0);
    for (long i = 0; i < p.dim(); ++i) {
      b1[i] = p.beta_star()[i] + rng.uniform(-2.0, 2.0);
      b2[i] = p.beta_star()[i] + rng.uniform(-2.0, 2.0);
    }
    const double dist = ls_norm(b1 - b2, s);
    if (dist == 0.0) continue;
    for (long r = 0; r < noise_draws; ++r) {
      p.sample_noise(ps, r + 1, ws);
      p.gradient(b1, ws, g1);
      p.gradient(b2, ws, g2);
      ratio[r] = ls_norm(g1 - g2, s);
    }
    EstimateWithCI m = lq_moment(ratio, q);
    const double est = m.value / dist;
    const double se = std::sqrt(m.se * m.se / (dist * dist) + L.se * L.se);
    const double margin = L.value + 3.0 * se - est;
    ++res.trials;
    if (margin < 0.0) ++res.violations;
    res.worst_margin = std::min(res.worst_margin, margin);
  }
  return res;
}

AssumptionCheck check_unbiasedness(const Problem& p, long points,
                                   long samples_per_point, std::uint64_t seed) {
  AssumptionCheck res;
  res.worst_margin = std::numeric_limits<double>::max();
  Vector beta(p.dim()), g(p.dim()), pop(p.dim());
  NoiseSample ws;
  for (long t = 0; t < points; ++t) {
    const std::uint64_t ps = mix_seed(seed, t);
    CounterRng rng(ps, Stream::kInit, 0);
    for (long i = 0; i < p.dim(); ++i)
      beta[i] = p.beta_star()[i] + rng.uniform(-2.0, 2.0);
    p.population_gradient(beta, pop);
    Vector mean = Vector::Zero(p.dim());
    Vector m2 = Vector::Zero(p.dim());
    for (long r = 0; r < samples_per_point; ++r) {
      p.sample_noise(ps, r + 1, ws);
      p.gradient(beta, ws, g);
      mean += g;
      m2 += g.cwiseProduct(g);
    }
    const double n = static_cast<double>(samples_per_point);
    mean /= n;
    for (long j = 0; j < p.dim(); ++j) {
      const double var = std::max(0.0, m2[j] / n - mean[j] * mean[j]);
      const double se = std::sqrt(var / n);
      // 5 SE: the family of checks spans points * dim coordinates, so a
      // 4-SE gate would trip on clean samplers every ~50 runs.
      const double margin =
          5.0 * se + 1e-9 * std::max(1.0, std::abs(pop[j])) -
          std::abs(mean[j] - pop[j]);
      ++res.trials;
      if (margin < 0.0) ++res.violations;
      res.worst_margin = std::min(res.worst_margin, margin);
    }
  }
  return res;
}

}  // namespace hdsgd
