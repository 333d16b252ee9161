#include <doctest.h>

#include <cmath>

#include "hdsgd/problems.hpp"

using namespace hdsgd;

namespace {

LinearRegression gaussian_regression(long d) {
  return LinearRegression(Matrix::Identity(d, d), Vector::Zero(d),
                          CovariateLaw::kGaussian, 0, NoiseLaw::kGaussian, 1.0,
                          0);
}

}  // namespace

TEST_SUITE("problems") {
  TEST_CASE("gershgorin gap lower-bounds the smallest eigenvalue") {
    Matrix t = Matrix::Identity(16, 16);
    for (int i = 0; i + 1 < 16; ++i) t(i, i + 1) = t(i + 1, i) = 0.2;
    CHECK(gershgorin_gap(t) == doctest::Approx(0.6).epsilon(1e-14));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(t);
    CHECK(gershgorin_gap(t) <= eig.eigenvalues().minCoeff() + 1e-12);
    CHECK(gershgorin_gap(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  }

  TEST_CASE("regression gradient formula on a hand-built sample") {
    LinearRegression p = gaussian_regression(1);
    NoiseSample n;
    n.v = Vector::Constant(1, 1.0);  // x = 1
    n.y = 0.0;
    Vector beta = Vector::Constant(1, 1.0);
    // grad = -(y - x'beta) x = beta - y = 1; one half step lands at 0.5.
    Vector g = p.gradient(beta, n);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((beta - 0.5 * g)[0] == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("noise samples are pure functions of (seed, k)") {
    LinearRegression p = gaussian_regression(3);
    NoiseSample a, b;
    p.sample_noise(99, 5, a);
    p.sample_noise(99, 5, b);
    CHECK((a.v - b.v).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.y == b.y);
    p.sample_noise(99, 6, b);
    CHECK((a.v - b.v).cwiseAbs().maxCoeff() > 0.0);
  }

  TEST_CASE("sampled gradients average to the population gradient") {
    LinearRegression p = gaussian_regression(2);
    Vector beta(2);
    beta << 0.7, -0.3;
    Vector pop = p.population_gradient(beta);
    // E[-(y - x'b)x] = E[xx'](b - b*) = b for identity covariance, b* = 0.
    CHECK(pop[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(pop[1] == doctest::Approx(-0.3).epsilon(1e-12));
    Vector mean = Vector::Zero(2);
    NoiseSample n;
    const long R = 200000;
    for (long k = 1; k <= R; ++k) {
      p.sample_noise(123, k, n);
      mean += p.gradient(beta, n);
    }
    mean /= static_cast<double>(R);
    CHECK((mean - pop).cwiseAbs().maxCoeff() < 0.02);
  }

  TEST_CASE("constant covariate pins L exactly at 1") {
    LinearRegression p(Matrix::Identity(1, 1), Vector::Zero(1),
                       CovariateLaw::kConstant, 0, NoiseLaw::kGaussian, 1.0, 0);
    ConstantEstimate L = p.estimate_L(2, 2.0, 1000, 5);
    CHECK(L.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(L.se == doctest::Approx(0.0));
  }

  TEST_CASE("gaussian d=2 identity: L -> sqrt(8), M -> sqrt(2)") {
    LinearRegression p = gaussian_regression(2);
    // L = || |x|_2 |x|_2 ||_2 = (E |x|_2^4)^(1/2) = sqrt(d(d+2)) = sqrt(8).
    ConstantEstimate L = p.estimate_L(2, 2.0, 200000, 7);
    CHECK(std::abs(L.value - std::sqrt(8.0)) < 4 * L.se + 0.02);
    // M = || |eps x|_2 ||_2 = sqrt(E eps^2 E |x|_2^2) = sqrt(2).
    ConstantEstimate M = p.estimate_M(2, 2.0, 200000, 7);
    CHECK(std::abs(M.value - std::sqrt(2.0)) < 4 * M.se + 0.02);
    CHECK(L.provenance == Provenance::kMonteCarlo);
  }

  TEST_CASE("analytic mu comes from the covariance spectrum") {
    LinearRegression p = gaussian_regression(4);
    CHECK(p.analytic_mu().value == doctest::Approx(1.0).epsilon(1e-12));

    Matrix t = Matrix::Identity(8, 8);
    for (int i = 0; i + 1 < 8; ++i) t(i, i + 1) = t(i + 1, i) = 0.2;
    LinearRegression pt(t, Vector::Zero(8), CovariateLaw::kGaussian, 0,
                        NoiseLaw::kGaussian, 1.0, 0);
    CHECK(pt.analytic_mu().value == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(pt.analytic_mu().provenance == Provenance::kGershgorin);
  }

  TEST_CASE("student-t covariates scale the second-moment matrix by nu/(nu-2)") {
    LinearRegression p(Matrix::Identity(2, 2), Vector::Zero(2),
                       CovariateLaw::kStudentT, 5, NoiseLaw::kGaussian, 1.0, 0);
    CHECK(p.covariance()(0, 0) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(p.covariance()(0, 1) == doctest::Approx(0.0));
    CHECK(p.analytic_mu().value == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("tanh field: slopes give mu = 1 and L = 1 + rho exactly") {
    TanhProblem p(3, 0.5, 0.0, NoiseLaw::kGaussian, 1.0, 0);
    CHECK(p.analytic_mu().value == doctest::Approx(1.0));
    ConstantEstimate L = p.estimate_L(2, 2.0, 10, 1);
    CHECK(L.value == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(L.se == doctest::Approx(0.0));
    CHECK(L.provenance == Provenance::kAnalytic);
    CHECK(p.beta_star().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }

  TEST_CASE("tanh gradient value at a hand point") {
    TanhProblem p(1, 1.0, 0.0, NoiseLaw::kGaussian, 1.0, 0);
    NoiseSample n;
    n.v = Vector::Zero(1);
    Vector beta = Vector::Constant(1, 0.5);
    // 0.5 + tanh(0.5) with the shock zeroed out.
    CHECK(p.gradient(beta, n)[0] ==
          doctest::Approx(0.9621171572600097).epsilon(1e-15));
  }

  TEST_CASE("shifted tanh roots the population gradient at beta*") {
    TanhProblem p(4, 1.0, 1.7, NoiseLaw::kGaussian, 1.0, 0);
    Vector pop = p.population_gradient(p.beta_star());
    CHECK(pop.cwiseAbs().maxCoeff() < 1e-10);
    // The root of t + tanh(t + 1.7) = 0 is negative for a positive shift.
    CHECK(p.beta_star()[0] < 0.0);
    CHECK(p.beta_star()[0] == doctest::Approx(p.beta_star()[3]));
  }
}
