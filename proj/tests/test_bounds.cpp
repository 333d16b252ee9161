#include <doctest.h>

#include <cmath>

#include "hdsgd/bounds.hpp"
#include "hdsgd/norms.hpp"
#include "hdsgd/rng.hpp"

using namespace hdsgd;

TEST_SUITE("bounds") {
  TEST_CASE("alpha_max closed form") {
    CHECK(alpha_max(1.0, 1.0, 2, 2.0) == doctest::Approx(1.0));
    CHECK(alpha_max(1.0, 2.0, 4, 2.0) == doctest::Approx(0.125));
    CHECK(alpha_max(0.6, 2.0, 4, 2.0) == doctest::Approx(0.075));
    CHECK_THROWS(alpha_max(0.0, 1.0, 2, 2.0));
    CHECK_THROWS(alpha_max(1.0, 1.0, 3, 2.0));  // odd s
    CHECK_THROWS(alpha_max(1.0, 1.0, 2, 1.5));  // q < 2
  }

  TEST_CASE("contraction rate value and validity range") {
    CHECK(contraction_rate(1.0, 1.0, 2, 2.0, 0.5) == doctest::Approx(0.5));
    CHECK(norm_contraction_rate(1.0, 1.0, 2, 2.0, 0.5) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK_THROWS(contraction_rate(1.0, 1.0, 2, 2.0, 0.0));
    CHECK_THROWS(contraction_rate(1.0, 1.0, 2, 2.0, 1.0));  // at alpha_max
    // The error message names the threshold.
    try {
      contraction_rate(1.0, 1.0, 2, 2.0, 2.0);
      CHECK(false);
    } catch (const std::exception& e) {
      CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
  }

  TEST_CASE("contraction rate is minimized at mu / (max{q,s} L^2)") {
    const double mu = 0.7, L = 1.3, q = 2.0;
    const int s = 4;
    const double vertex = mu / (4.0 * L * L);
    const double rmin = 1.0 - mu * mu / (4.0 * L * L);
    CHECK(contraction_rate(mu, L, s, q, vertex) ==
          doctest::Approx(rmin).epsilon(1e-14));
    CHECK(contraction_rate(mu, L, s, q, vertex * 1.1) > rmin);
    CHECK(contraction_rate(mu, L, s, q, vertex * 0.9) > rmin);
  }

  TEST_CASE("averaged-recursion rate at the worked value 0.87") {
    CHECK(tilde_contraction_rate(1.0, 1.0, 2, 2.0, 0.1) ==
          doctest::Approx(0.87).epsilon(1e-15));
    // Valid strictly below alpha_max / 7.
    CHECK_THROWS(tilde_contraction_rate(1.0, 1.0, 2, 2.0, 1.0 / 7.0));
    // Never below the plain rate on its validity range.
    for (double a : {0.01, 0.05, 0.1, 0.14}) {
      CHECK(tilde_contraction_rate(1.0, 1.0, 2, 2.0, a) >=
            contraction_rate(1.0, 1.0, 2, 2.0, a));
    }
  }

  TEST_CASE("alpha_root: q = 2 closed form on random tuples") {
    CHECK(alpha_root(1.0, 1.0, 2, 2.0) == doctest::Approx(2.0).epsilon(1e-10));
    CounterRng rng(2024, Stream::kConstants, 0);
    for (int t = 0; t < 100; ++t) {
      const double mu = rng.uniform(0.05, 5.0);
      const double L = rng.uniform(0.05, 5.0);
      const int s = 2 * (1 + static_cast<int>(rng.uniform() * 4));  // 2..8
      const double closed =
          2.0 * mu / ((std::abs(2.0 - s) + (s - 1.0)) * L * L);
      CHECK(alpha_root(mu, L, s, 2.0) ==
            doctest::Approx(closed).epsilon(1e-10));
    }
  }

  TEST_CASE("alpha_root: general q root actually zeroes F") {
    const double mu = 0.8, L = 1.7, q = 3.5;
    const int s = 4;
    const double a = alpha_root(mu, L, s, q);
    const double c = (std::abs(q - s) + (s - 1.0)) * L * L / 2.0;
    const double F = -mu + c * a * std::pow(1.0 + L * a, q - 2.0);
    CHECK(std::abs(F) < 1e-9 * mu);
    // F is increasing in alpha: strictly bracketed.
    const double Flo =
        -mu + c * (a * 0.999) * std::pow(1.0 + L * a * 0.999, q - 2.0);
    const double Fhi =
        -mu + c * (a * 1.001) * std::pow(1.0 + L * a * 1.001, q - 2.0);
    CHECK(Flo < 0.0);
    CHECK(Fhi > 0.0);
  }

  TEST_CASE("averaged-iterate bound terms") {
    // d = 2 has s_d = 2, so the dimension factor d^((q/(q-1))(1-2/s)) is 1.
    AsgdBoundTerms t = asgd_bound_terms(1.0, 1.0, 1.0, 2, 2.0, 2, 0.1, 100.0, 1.0);
    CHECK(t.bias_term == doctest::Approx(2.0 * 0.1).epsilon(1e-14));
    const double r = contraction_rate(1.0, 1.0, 2, 2.0, 0.1);
    CHECK(t.init_term == doctest::Approx(1.0 / (100.0 * (1.0 - r))).epsilon(1e-14));
    CHECK(t.variance_term ==
          doctest::Approx(std::sqrt(2.0 / 100.0) *
                          (std::sqrt(0.1 * 2.0) + 1.0)).epsilon(1e-14));
    CHECK(t.total == doctest::Approx(t.variance_term + t.init_term +
                                     t.bias_term).epsilon(1e-14));
    CHECK(t.up_to_constants);

    // Doubling k halves the init term and shrinks variance by sqrt(2).
    AsgdBoundTerms t2 = asgd_bound_terms(1.0, 1.0, 1.0, 2, 2.0, 2, 0.1, 200.0, 1.0);
    CHECK(t2.init_term == doctest::Approx(t.init_term / 2.0).epsilon(1e-14));
    CHECK(t2.variance_term ==
          doctest::Approx(t.variance_term / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(t2.bias_term == doctest::Approx(t.bias_term).epsilon(1e-14));

    // delta0 = 0 kills the init term only.
    AsgdBoundTerms t0 = asgd_bound_terms(1.0, 1.0, 1.0, 2, 2.0, 2, 0.1, 100.0, 0.0);
    CHECK(t0.init_term == 0.0);
    CHECK(t0.variance_term == doctest::Approx(t.variance_term));

    // s must be the dimension-matched exponent.
    CHECK_THROWS(asgd_bound_terms(1.0, 1.0, 1.0, 2, 2.0, 4, 0.1, 100.0, 1.0));
  }

  TEST_CASE("complexity recipe frozen example") {
    ComplexityRecipe rec = complexity(0.1, 1.0, 1.0, 1.0, 10, 2.0, 1.0);
    CHECK(rec.s_d == 4);
    CHECK(rec.V == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(rec.B == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(rec.alpha_rec == doctest::Approx(1.0 / 1200.0).epsilon(1e-12));
    CHECK(rec.k_rec == doctest::Approx(36000.0).epsilon(1e-12));
    CHECK(rec.up_to_constants);
  }

  TEST_CASE("tail bound: monotone in z, init term controlled by delta0") {
    double prev = 1e300;
    for (double z = 0.1; z < 3.0; z += 0.1) {
      const double b = fuk_nagaev_bound(z, 1e4, 0.005, 4, 4.0, 5.9, 1.0, 1.0);
      CHECK(b <= prev * (1 + 1e-12));
      prev = b;
    }
    CHECK(fuk_nagaev_bound(0.5, 1e4, 0.005, 4, 4.0, 5.9, 0.0, 1.0) <
          fuk_nagaev_bound(0.5, 1e4, 0.005, 4, 4.0, 5.9, 1.0, 1.0));
    // fitted constant 0 leaves the pure exponential term.
    const double z = 0.4, k = 1e4, a = 0.005, M = 5.9;
    const double expo = std::exp(-k * z * z * std::pow(a, 1.0 - 2.0 / 4.0) /
                                 (M * M * std::log(4.0)));
    CHECK(fuk_nagaev_bound(z, k, a, 4, 4.0, M, 1.0, 0.0) ==
          doctest::Approx(expo).epsilon(1e-12));
  }

  TEST_CASE("high-probability radius matches its three-term transcription") {
    const double delta = 0.05, k = 1e4, a = 0.01, q = 2.0, M = 2.0, d0 = 1.0;
    const long d = 10;
    const double t1 = std::pow(d0, q) / (k * a * std::pow(delta, 1.0 / q));
    const double t2 = std::pow(std::log((double)d), 1.5) *
                      std::pow(std::log(k), 1.0 / q + 2.0) * M /
                      (std::pow(k, 1.0 - 1.0 / q) *
                       std::pow(a, 0.5 - 1.0 / q) * std::pow(delta, 1.0 / q));
    const double t3 = std::sqrt(M * M * std::log((double)d) *
                                std::log(1.0 / delta) /
                                (k * std::pow(a, 1.0 - 2.0 / q)));
    CHECK(high_prob_radius(delta, k, a, d, q, M, d0) ==
          doctest::Approx(t1 + t2 + t3).epsilon(1e-13));
    // delta -> 1 kills the sub-Gaussian term.
    const double r_near1 = high_prob_radius(0.999999, k, a, d, q, M, d0);
    CHECK(r_near1 < high_prob_radius(0.5, k, a, d, q, M, d0));
    CHECK_THROWS(high_prob_radius(0.0, k, a, d, q, M, d0));
    CHECK_THROWS(high_prob_radius(1.0, k, a, d, q, M, d0));
  }

  TEST_CASE("burn-in step count") {
    CHECK(burn_in_steps(0.5, 1.0, 1e-3) == 10);
    CHECK(burn_in_steps(0.5, 1.0, 2.0) == 0);  // tolerance already met
    CHECK(burn_in_steps(0.9, 0.0, 1e-3) == 0);
    CHECK_THROWS(burn_in_steps(1.0, 1.0, 1e-3));
    CHECK_THROWS(burn_in_steps(0.5, 1.0, 0.0));
  }
}
