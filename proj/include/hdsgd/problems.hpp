#pragma once

#include <memory>
#include <string>

#include "hdsgd/norms.hpp"
#include "hdsgd/rng.hpp"

namespace hdsgd {

using Matrix = Eigen::MatrixXd;

enum class CovariateLaw { kGaussian, kSubExponential, kStudentT, kConstant };
enum class NoiseLaw { kGaussian, kStudentT };

// One noise realization. For regression `v` is the covariate and `y` the
// response; for the separable tanh field `v` is the shock vector. `work` is
// caller-owned scratch so hot loops stay allocation-free.
struct NoiseSample {
  long index = 0;
  Vector v;
  double y = 0.0;
  Vector work;
};

enum class Provenance { kAnalytic, kGershgorin, kMonteCarlo };

struct ConstantEstimate {
  double value = 0.0;
  double se = 0.0;
  long replications = 0;
  Provenance provenance = Provenance::kAnalytic;
};

// Smallest Gershgorin disc edge: min_i (S_ii - sum_{j != i} |S_ij|).
// Lower-bounds the l^s strong-convexity constant for every even s.
double gershgorin_gap(const Matrix& sigma);

class Problem {
 public:
  virtual ~Problem() = default;
  virtual long dim() const = 0;
  virtual const Vector& beta_star() const = 0;
  virtual std::string name() const = 0;

  // Sample k is a pure function of (seed, k): regenerating it in isolation is
  // what makes shared-noise and single-swap couplings exact.
  virtual void sample_noise(std::uint64_t seed, long k, NoiseSample& out) const = 0;

  virtual void gradient(const Vector& beta, const NoiseSample& n, Vector& out) const = 0;
  virtual void population_gradient(const Vector& beta, Vector& out) const = 0;

  virtual ConstantEstimate analytic_mu() const = 0;
  virtual ConstantEstimate estimate_L(int s, double q, long R, std::uint64_t seed) const = 0;
  virtual ConstantEstimate estimate_M(int s, double q, long R, std::uint64_t seed) const = 0;

  Vector gradient(const Vector& beta, const NoiseSample& n) const {
    Vector out(dim());
    gradient(beta, n, out);
    return out;
  }
  Vector population_gradient(const Vector& beta) const {
    Vector out(dim());
    population_gradient(beta, out);
    return out;
  }
};

using ProblemPtr = std::shared_ptr<const Problem>;

// Least-squares field grad g(beta, (x, y)) = -(y - x' beta) x with
// y = x' beta* + eps. Covariates are x = A u, A the symmetric square root of
// `sigma`, u i.i.d. coordinates of the chosen law. Student-t coordinates are
// raw t_nu draws (variance nu/(nu-2)), so the effective second-moment matrix
// used by population quantities is scaled accordingly.
class LinearRegression : public Problem {
 public:
  LinearRegression(Matrix sigma, Vector beta_star, CovariateLaw law, int cov_nu,
                   NoiseLaw noise, double noise_scale, int noise_nu);

  long dim() const override { return beta_star_.size(); }
  const Vector& beta_star() const override { return beta_star_; }
  std::string name() const override { return "regression"; }
  void sample_noise(std::uint64_t seed, long k, NoiseSample& out) const override;
  using Problem::gradient;
  using Problem::population_gradient;
  void gradient(const Vector& beta, const NoiseSample& n, Vector& out) const override;
  void population_gradient(const Vector& beta, Vector& out) const override;
  ConstantEstimate analytic_mu() const override;
  ConstantEstimate estimate_L(int s, double q, long R, std::uint64_t seed) const override;
  ConstantEstimate estimate_M(int s, double q, long R, std::uint64_t seed) const override;

  // Effective covariate second-moment matrix E[x x'].
  const Matrix& covariance() const { return exx_; }

 private:
  double draw_coordinate(CounterRng& rng) const;
  double draw_noise(CounterRng& rng) const;

  Matrix sigma_;
  Matrix factor_;  // symmetric square root of sigma_
  Matrix exx_;
  Vector beta_star_;
  CovariateLaw law_;
  int cov_nu_;
  NoiseLaw noise_;
  double noise_scale_;
  int noise_nu_;
};

// Separable non-quadratic field
//   grad g(beta, xi)_i = beta_i + rho * tanh(beta_i + shift) - xi_i.
// Coordinate slope lies in [1, 1 + rho], so mu = 1 and L = 1 + rho exactly.
// With shift = 0 the population gradient is odd and the stationary law is
// symmetric; a nonzero shift bends the objective so the third derivative at
// the minimizer is nonzero and the O(alpha) averaged bias becomes visible.
class TanhProblem : public Problem {
 public:
  TanhProblem(long d, double rho, double shift, NoiseLaw noise,
              double noise_scale, int noise_nu);

  long dim() const override { return beta_star_.size(); }
  const Vector& beta_star() const override { return beta_star_; }
  std::string name() const override { return "tanh"; }
  void sample_noise(std::uint64_t seed, long k, NoiseSample& out) const override;
  using Problem::gradient;
  using Problem::population_gradient;
  void gradient(const Vector& beta, const NoiseSample& n, Vector& out) const override;
  void population_gradient(const Vector& beta, Vector& out) const override;
  ConstantEstimate analytic_mu() const override;
  ConstantEstimate estimate_L(int s, double q, long R, std::uint64_t seed) const override;
  ConstantEstimate estimate_M(int s, double q, long R, std::uint64_t seed) const override;

  double rho() const { return rho_; }
  double shift() const { return shift_; }

 private:
  double draw_noise(CounterRng& rng) const;

  Vector beta_star_;
  double rho_;
  double shift_;
  NoiseLaw noise_;
  double noise_scale_;
  int noise_nu_;
};

}  // namespace hdsgd
