#include "hdsgd/sgd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hdsgd/bounds.hpp"

namespace hdsgd {
namespace {

// Past this radius the contraction argument has certainly failed; treating it
// as divergence keeps later powers finite.
constexpr double kDivergenceRadius = 1e150;

void check_checkpoints(const std::vector<long>& cps, long k_max) {
  long prev = 0;
  for (long c : cps) {
    if (c <= prev || c > k_max)
      throw std::invalid_argument(
          "checkpoints must be strictly increasing within [1, k_max]");
    prev = c;
  }
}

}  // namespace

void sgd_step(const Problem& p, double alpha, std::uint64_t noise_seed,
              ChainState& st, NoiseSample& ws, Vector& grad) {
  ++st.k;
  p.sample_noise(noise_seed, st.k, ws);
  p.gradient(st.beta, ws, grad);
  st.beta.noalias() -= alpha * grad;
  if (!st.beta.allFinite() ||
      st.beta.cwiseAbs().maxCoeff() > kDivergenceRadius)
    throw std::runtime_error("chain diverged at step " + std::to_string(st.k) +
                             " (learning rate too large for this problem)");
  st.running_mean += (st.beta - st.running_mean) / static_cast<double>(st.k);
}

Trajectory run_chain(const Problem& p, double alpha, const Vector& beta0,
                     long k_max, std::uint64_t seed,
                     const std::vector<long>& checkpoints) {
  check_checkpoints(checkpoints, k_max);
  ChainState st{beta0, Vector::Zero(p.dim()), 0};
  NoiseSample ws;
  Vector grad(p.dim());
  Trajectory out;
  std::size_t next = 0;
  for (long k = 1; k <= k_max; ++k) {
    sgd_step(p, alpha, seed, st, ws, grad);
    if (next < checkpoints.size() && checkpoints[next] == k) {
      out.ks.push_back(k);
      out.beta.push_back(st.beta);
      out.mean.push_back(st.running_mean);
      ++next;
    }
  }
  return out;
}

CoupledRun run_coupled_pair(const Problem& p, double alpha,
                            const Vector& beta0_a, const Vector& beta0_b,
                            long k_max, std::uint64_t seed, int s,
                            const std::vector<long>& checkpoints) {
  check_checkpoints(checkpoints, k_max);
  ChainState a{beta0_a, Vector::Zero(p.dim()), 0};
  ChainState b{beta0_b, Vector::Zero(p.dim()), 0};
  NoiseSample ws;
  Vector grad(p.dim());
  CoupledRun out;
  out.iterate_distance.reserve(static_cast<std::size_t>(k_max) + 1);
  out.iterate_distance.push_back(ls_norm(a.beta - b.beta, s));
  std::size_t next = 0;
  for (long k = 1; k <= k_max; ++k) {
    sgd_step(p, alpha, seed, a, ws, grad);
    // Step counters advance in lockstep, so with the same seed chain B
    // consumes the exact same sample.
    sgd_step(p, alpha, seed, b, ws, grad);
    out.iterate_distance.push_back(ls_norm(a.beta - b.beta, s));
    if (next < checkpoints.size() && checkpoints[next] == k) {
      out.checkpoint_ks.push_back(k);
      out.mean_gap.push_back(ls_norm(a.running_mean - b.running_mean, s));
      ++next;
    }
  }
  return out;
}

SwapRun run_single_swap_coupling(const Problem& p, double alpha, long k_max,
                                 long l, std::uint64_t seed,
                                 std::uint64_t seed_prime, int s,
                                 const std::vector<long>& checkpoints,
                                 const Vector* beta0) {
  check_checkpoints(checkpoints, k_max);
  if (l < 1 || l > k_max)
    throw std::invalid_argument("swap index must lie in [1, k_max]");
  const Vector start = beta0 ? *beta0 : p.beta_star();
  ChainState a{start, Vector::Zero(p.dim()), 0};
  ChainState b{start, Vector::Zero(p.dim()), 0};
  NoiseSample ws;
  Vector grad(p.dim());
  SwapRun out;
  std::size_t next = 0;
  for (long k = 1; k <= k_max; ++k) {
    sgd_step(p, alpha, seed, a, ws, grad);
    sgd_step(p, alpha, k == l ? seed_prime : seed, b, ws, grad);
    if (next < checkpoints.size() && checkpoints[next] == k) {
      out.checkpoint_ks.push_back(k);
      out.iterate_gap.push_back(ls_norm(a.beta - b.beta, s));
      out.mean_gap.push_back(ls_norm(a.running_mean - b.running_mean, s));
      ++next;
    }
  }
  return out;
}

Vector default_init(const Problem& p, std::uint64_t seed) {
  CounterRng rng(seed, Stream::kInit, 0);
  Vector beta0 = p.beta_star();
  for (long i = 0; i < beta0.size(); ++i) beta0[i] += rng.uniform(-1.0, 1.0);
  return beta0;
}

BurnInResult burn_in_stationary(const Problem& p, double alpha, double mu,
                                double L, int s, double q, double M,
                                std::uint64_t seed, double tol) {
  if (M <= 0.0) throw std::invalid_argument("burn-in needs M > 0");
  if (tol <= 0.0) tol = 0.01 * std::sqrt(alpha) * M;
  const double d0 =
      std::sqrt(6.0 * std::max(q, static_cast<double>(s)) * alpha) * M;
  const double r_hat = norm_contraction_rate(mu, L, s, q, alpha);
  const long steps = burn_in_steps(r_hat, d0, tol);

  BurnInResult out;
  out.steps = steps;
  out.start_radius = d0;
  out.certificate = std::pow(r_hat, static_cast<double>(steps)) * d0;
  out.state = ChainState{p.beta_star(), Vector::Zero(p.dim()), 0};

  const std::uint64_t burn_seed = mix_seed(seed, Stream::kBurnIn);
  NoiseSample ws;
  Vector grad(p.dim());
  for (long k = 1; k <= steps; ++k)
    sgd_step(p, alpha, burn_seed, out.state, ws, grad);
  out.state.k = 0;
  out.state.running_mean.setZero();
  return out;
}

}  // namespace hdsgd
