#include "hdsgd/problems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hdsgd {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double gershgorin_gap(const Matrix& sigma) {
  require(sigma.rows() == sigma.cols() && sigma.rows() > 0,
          "gershgorin_gap: matrix must be square and nonempty");
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < sigma.cols(); ++j) {
      if (j != i) off += std::abs(sigma(i, j));
    }
    gap = std::min(gap, sigma(i, i) - off);
  }
  return gap;
}

LinearRegression::LinearRegression(Matrix sigma, Vector beta_star,
                                   CovariateLaw law, int cov_nu, NoiseLaw noise,
                                   double noise_scale, int noise_nu)
    : sigma_(std::move(sigma)),
      beta_star_(std::move(beta_star)),
      law_(law),
      cov_nu_(cov_nu),
      noise_(noise),
      noise_scale_(noise_scale),
      noise_nu_(noise_nu) {
  require(sigma_.rows() == sigma_.cols(), "regression: sigma must be square");
  require(sigma_.rows() == beta_star_.size(),
          "regression: sigma and beta_star dimensions differ");
  require((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          "regression: sigma must be symmetric");
  require(noise_scale_ > 0.0, "regression: noise scale must be positive");
  if (law_ == CovariateLaw::kStudentT)
    require(cov_nu_ > 2, "regression: covariate t dof must exceed 2");
  if (noise_ == NoiseLaw::kStudentT)
    require(noise_nu_ > 2, "regression: noise t dof must exceed 2");

  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_);
  require(es.info() == Eigen::Success, "regression: eigensolver failed");
  require(es.eigenvalues().minCoeff() > 0.0,
          "regression: sigma must be positive definite");
  factor_ = es.operatorSqrt();

  if (law_ == CovariateLaw::kConstant) {
    const Vector x0 = factor_ * Vector::Ones(dim());
    exx_ = x0 * x0.transpose();
  } else {
    const double vlaw =
        law_ == CovariateLaw::kStudentT
            ? static_cast<double>(cov_nu_) / static_cast<double>(cov_nu_ - 2)
            : 1.0;
    exx_ = vlaw * sigma_;
  }
}

double LinearRegression::draw_coordinate(CounterRng& rng) const {
  switch (law_) {
    case CovariateLaw::kGaussian:
      return rng.normal();
    case CovariateLaw::kSubExponential:
      return rng.laplace();
    case CovariateLaw::kStudentT:
      return rng.student_t(cov_nu_);
    case CovariateLaw::kConstant:
      return 1.0;
  }
  return 0.0;
}

double LinearRegression::draw_noise(CounterRng& rng) const {
  if (noise_ == NoiseLaw::kGaussian) return noise_scale_ * rng.normal();
  return noise_scale_ * rng.student_t(noise_nu_);
}

void LinearRegression::sample_noise(std::uint64_t seed, long k,
                                    NoiseSample& out) const {
  CounterRng rng(seed, kNoise, static_cast<std::uint64_t>(k));
  const long d = dim();
  out.index = k;
  out.work.resize(d);
  for (long i = 0; i < d; ++i) out.work[i] = draw_coordinate(rng);
  out.v.noalias() = factor_ * out.work;
  out.y = out.v.dot(beta_star_) + draw_noise(rng);
}

void LinearRegression::gradient(const Vector& beta, const NoiseSample& n,
                                Vector& out) const {
  const double resid = n.v.dot(beta) - n.y;
  out = resid * n.v;
}

void LinearRegression::population_gradient(const Vector& beta,
                                           Vector& out) const {
  out.noalias() = exx_ * (beta - beta_star_);
}

ConstantEstimate LinearRegression::analytic_mu() const {
  return {gershgorin_gap(exx_), 0.0, 0, Provenance::kGershgorin};
}

ConstantEstimate LinearRegression::estimate_L(int s, double q, long R,
                                              std::uint64_t seed) const {
  require(s >= 2 && s % 2 == 0, "estimate_L: s must be an even integer >= 2");
  require(q >= 2.0, "estimate_L: q must be >= 2");
  require(R >= 2, "estimate_L: need R >= 2 replications");
  if (law_ == CovariateLaw::kStudentT && !(cov_nu_ > 2.0 * q))
    throw std::domain_error(
        "estimate_L: Student-t covariates need dof > 2q; got dof " +
        std::to_string(cov_nu_) + " with q " + std::to_string(q));
  const double dual = static_cast<double>(s) / (static_cast<double>(s) - 1.0);
  std::vector<double> samples(static_cast<size_t>(R));
  NoiseSample ns;
  for (long i = 0; i < R; ++i) {
    sample_noise(mix_seed(seed, kConstants), i + 1, ns);
    samples[static_cast<size_t>(i)] = ls_norm(ns.v, s) * lp_norm(ns.v, dual);
  }
  const EstimateWithCI est = lq_moment(samples, q);
  return {est.value, est.se, R, Provenance::kMonteCarlo};
}

ConstantEstimate LinearRegression::estimate_M(int s, double q, long R,
                                              std::uint64_t seed) const {
  require(s >= 2 && s % 2 == 0, "estimate_M: s must be an even integer >= 2");
  require(q >= 2.0, "estimate_M: q must be >= 2");
  require(R >= 2, "estimate_M: need R >= 2 replications");
  if (noise_ == NoiseLaw::kStudentT && !(noise_nu_ > q))
    throw std::domain_error(
        "estimate_M: Student-t noise needs dof > q; got dof " +
        std::to_string(noise_nu_) + " with q " + std::to_string(q));
  std::vector<double> samples(static_cast<size_t>(R));
  NoiseSample ns;
  Vector g(dim());
  for (long i = 0; i < R; ++i) {
    sample_noise(mix_seed(seed, kConstants), i + 1, ns);
    gradient(beta_star_, ns, g);
    samples[static_cast<size_t>(i)] = ls_norm(g, s);
  }
  const EstimateWithCI est = lq_moment(samples, q);
  return {est.value, est.se, R, Provenance::kMonteCarlo};
}

TanhProblem::TanhProblem(long d, double rho, double shift, NoiseLaw noise,
                         double noise_scale, int noise_nu)
    : rho_(rho),
      shift_(shift),
      noise_(noise),
      noise_scale_(noise_scale),
      noise_nu_(noise_nu) {
  require(d >= 1, "tanh: dimension must be >= 1");
  require(rho_ >= 0.0, "tanh: rho must be >= 0");
  require(noise_scale_ > 0.0, "tanh: noise scale must be positive");
  if (noise_ == NoiseLaw::kStudentT)
    require(noise_nu_ > 2, "tanh: noise t dof must exceed 2");
  // Root of b + rho*tanh(b + shift), strictly increasing in b with slope >= 1.
  double lo = -rho_ - std::abs(shift_) - 1.0, hi = rho_ + std::abs(shift_) + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid + rho_ * std::tanh(mid + shift_);
    (f < 0.0 ? lo : hi) = mid;
  }
  beta_star_ = Vector::Constant(d, 0.5 * (lo + hi));
}

double TanhProblem::draw_noise(CounterRng& rng) const {
  if (noise_ == NoiseLaw::kGaussian) return noise_scale_ * rng.normal();
  return noise_scale_ * rng.student_t(noise_nu_);
}

void TanhProblem::sample_noise(std::uint64_t seed, long k,
                               NoiseSample& out) const {
  CounterRng rng(seed, kNoise, static_cast<std::uint64_t>(k));
  const long d = dim();
  out.index = k;
  out.v.resize(d);
  for (long i = 0; i < d; ++i) out.v[i] = draw_noise(rng);
}

void TanhProblem::gradient(const Vector& beta, const NoiseSample& n,
                           Vector& out) const {
  out.resize(beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    out[i] = beta[i] + rho_ * std::tanh(beta[i] + shift_) - n.v[i];
}

void TanhProblem::population_gradient(const Vector& beta, Vector& out) const {
  out.resize(beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    out[i] = beta[i] + rho_ * std::tanh(beta[i] + shift_);
}

ConstantEstimate TanhProblem::analytic_mu() const {
  return {1.0, 0.0, 0, Provenance::kAnalytic};
}

ConstantEstimate TanhProblem::estimate_L(int, double, long, std::uint64_t) const {
  return {1.0 + rho_, 0.0, 0, Provenance::kAnalytic};
}

ConstantEstimate TanhProblem::estimate_M(int s, double q, long R,
                                         std::uint64_t seed) const {
  require(s >= 2 && s % 2 == 0, "estimate_M: s must be an even integer >= 2");
  require(q >= 2.0, "estimate_M: q must be >= 2");
  require(R >= 2, "estimate_M: need R >= 2 replications");
  if (noise_ == NoiseLaw::kStudentT && !(noise_nu_ > q))
    throw std::domain_error(
        "estimate_M: Student-t noise needs dof > q; got dof " +
        std::to_string(noise_nu_) + " with q " + std::to_string(q));
  std::vector<double> samples(static_cast<size_t>(R));
  NoiseSample ns;
  for (long i = 0; i < R; ++i) {
    sample_noise(mix_seed(seed, kConstants), i + 1, ns);
    samples[static_cast<size_t>(i)] = ls_norm(ns.v, s);
  }
  const EstimateWithCI est = lq_moment(samples, q);
  return {est.value, est.se, R, Provenance::kMonteCarlo};
}

}  // namespace hdsgd
