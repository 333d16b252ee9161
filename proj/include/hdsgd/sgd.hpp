#pragma once

#include <cstdint>
#include <vector>

#include "hdsgd/problems.hpp"

namespace hdsgd {

// Position of one chain: current iterate, running average of iterates
// 1..k (the start point is excluded from the average), and the step count.
struct ChainState {
  Vector beta;
  Vector running_mean;
  long k = 0;
};

// Advance one step: draw sample st.k + 1 from `noise_seed`'s measurement
// stream, move against the sampled gradient, fold the new iterate into the
// running mean. Throws (with the step index) if the iterate leaves the finite
// range -- a diverged chain means the learning rate is past threshold.
void sgd_step(const Problem& p, double alpha, std::uint64_t noise_seed,
              ChainState& st, NoiseSample& ws, Vector& grad);

struct Trajectory {
  std::vector<long> ks;
  std::vector<Vector> beta;
  std::vector<Vector> mean;
};

// Run a chain for k_max steps recording iterate and average at each
// checkpoint (ascending, each in [1, k_max]).
Trajectory run_chain(const Problem& p, double alpha, const Vector& beta0,
                     long k_max, std::uint64_t seed,
                     const std::vector<long>& checkpoints);

// Two chains driven by the identical sample path from different starts.
struct CoupledRun {
  std::vector<double> iterate_distance;  // |beta_A - beta_B|_s at k = 0..k_max
  std::vector<long> checkpoint_ks;
  std::vector<double> mean_gap;          // |avg_A - avg_B|_s at checkpoints
};

CoupledRun run_coupled_pair(const Problem& p, double alpha, const Vector& beta0_a,
                            const Vector& beta0_b, long k_max, std::uint64_t seed,
                            int s, const std::vector<long>& checkpoints);

// Two chains from the same start whose sample paths agree everywhere except
// step l, where chain B draws from seed_prime instead. The gap trajectory
// isolates how one exchanged sample propagates into iterates and averages.
struct SwapRun {
  std::vector<long> checkpoint_ks;
  std::vector<double> iterate_gap;  // |beta_A - beta_B|_s
  std::vector<double> mean_gap;     // |avg_A - avg_B|_s
};

SwapRun run_single_swap_coupling(const Problem& p, double alpha, long k_max,
                                 long l, std::uint64_t seed,
                                 std::uint64_t seed_prime, int s,
                                 const std::vector<long>& checkpoints,
                                 const Vector* beta0 = nullptr);

// Start point for measurement runs: beta* + Uniform(-1, 1)^d on the init
// substream, so inits are independent of every measurement draw.
Vector default_init(const Problem& p, std::uint64_t seed);

struct BurnInResult {
  ChainState state;          // k and running mean reset to zero
  long steps = 0;            // burn-in length B
  double start_radius = 0.0; // D0, the stationary-envelope start distance
  double certificate = 0.0;  // r_hat^B * D0, guaranteed residual distance
};

// Warm start near stationarity: from beta*, run B steps on the burn-in
// substream with B = burn_in_steps(r_hat, D0, tol), r_hat the norm-scale
// contraction rate and D0 = sqrt(6 max{q,s} alpha) M the stationary radius
// envelope. Default tol (tol <= 0) is 0.01 sqrt(alpha) M. The returned state
// has k = 0 and a zeroed mean so measurement steps start the average fresh.
BurnInResult burn_in_stationary(const Problem& p, double alpha, double mu,
                                double L, int s, double q, double M,
                                std::uint64_t seed, double tol = -1.0);

}  // namespace hdsgd
