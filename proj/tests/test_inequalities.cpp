#include <doctest.h>

#include <cmath>

#include "hdsgd/inequalities.hpp"

using namespace hdsgd;

namespace {

Vector vec(std::initializer_list<double> entries) {
  Vector v(static_cast<long>(entries.size()));
  long i = 0;
  for (double e : entries) v[i++] = e;
  return v;
}

}  // namespace

TEST_SUITE("inequalities") {
  TEST_CASE("taylor remainder: degenerate corners") {
    CHECK(check_taylor_remainder(vec({1.0, -2.0}), vec({0.0, 0.0}), 0.3, 2, 2.0));
    CHECK(check_taylor_remainder(vec({0.0, 0.0}), vec({1.0, 1.0}), 0.3, 2, 2.0));
    CHECK(check_taylor_remainder(vec({0.0}), vec({0.0}), 0.5, 4, 3.0));
    // s = q = 2 is the equality case |x-az|^2 - |x|^2 + 2a<x,z> = a^2 |z|^2.
    CHECK(check_taylor_remainder(vec({1.0, 2.0}), vec({-0.5, 3.0}), 0.7, 2, 2.0));
  }

  TEST_CASE("taylor remainder: randomized sweep passes") {
    PropertyResult r = test_taylor_remainder(5000, 11);
    CHECK(r.trials == 5000);
    CHECK(r.violations == 0);
    CHECK(r.pass());
  }

  TEST_CASE("finite-support laws validate exactly") {
    FiniteDist ok;
    ok.atoms = {{vec({1.0}), Rational(1, 3)}, {vec({-2.0}), Rational(2, 3)}};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.mean()[0] == doctest::Approx(-1.0).epsilon(1e-15));

    FiniteDist bad_sum;
    bad_sum.atoms = {{vec({1.0}), Rational(1, 3)}, {vec({0.0}), Rational(1, 3)}};
    CHECK_THROWS(bad_sum.validate());

    FiniteDist bad_dim;
    bad_dim.atoms = {{vec({1.0}), Rational(1, 2)},
                     {vec({1.0, 2.0}), Rational(1, 2)}};
    CHECK_THROWS(bad_dim.validate());
  }

  TEST_CASE("product enumeration visits exact probabilities") {
    FiniteDist coin;
    coin.atoms = {{vec({1.0}), Rational(1, 2)}, {vec({-1.0}), Rational(1, 2)}};
    Rational total(0);
    long count = 0;
    enumerate_product({coin, coin, coin},
                      [&](const std::vector<const Atom*>& outcome,
                          const Rational& p) {
                        CHECK(outcome.size() == 3);
                        total += p;
                        ++count;
                      });
    CHECK(count == 8);
    CHECK(total == Rational(1));
  }

  TEST_CASE("conditional mean detection is exact") {
    // Symmetric y given x: conditional means are exactly zero.
    JointDist sym;
    sym.atoms = {{vec({1.0}), vec({2.0}), Rational(1, 4)},
                 {vec({1.0}), vec({-2.0}), Rational(1, 4)},
                 {vec({-1.0}), vec({0.5}), Rational(1, 4)},
                 {vec({-1.0}), vec({-0.5}), Rational(1, 4)}};
    CHECK_NOTHROW(sym.validate());
    CHECK(sym.max_conditional_mean() == doctest::Approx(0.0));

    JointDist skew;
    skew.atoms = {{vec({1.0}), vec({2.0}), Rational(1, 2)},
                  {vec({-1.0}), vec({-0.5}), Rational(1, 2)}};
    CHECK(skew.max_conditional_mean() == doctest::Approx(2.0));
  }

  TEST_CASE("moment recursion display: corners and randomized sweep") {
    // y = 0: both sides collapse to ||x||^2.
    JointDist y0;
    y0.atoms = {{vec({1.0, 2.0}), vec({0.0, 0.0}), Rational(1, 2)},
                {vec({-1.0, 0.5}), vec({0.0, 0.0}), Rational(1, 2)}};
    CHECK(check_rio_exact(y0, 2, 2.0));
    // Single atom (deterministic pair).
    JointDist one;
    one.atoms = {{vec({1.5}), vec({-0.25}), Rational(1)}};
    CHECK(check_rio_exact(one, 2, 3.0));
    PropertyResult r = test_rio(300, 17);
    CHECK(r.pass());
  }

  TEST_CASE("maximal inequality: single-law corner and randomized sweep") {
    FiniteDist f;
    f.atoms = {{vec({1.0, -1.0}), Rational(1, 2)},
               {vec({-1.0, 1.0}), Rational(1, 2)}};
    CHECK(check_maximal_inequality_exact({f}, 2.0));
    PropertyResult r = test_maximal(60, 23);
    CHECK(r.pass());
  }

  TEST_CASE("norm equivalence sandwich at the chosen exponent") {
    PropertyResult r = test_norm_equivalence(2000, {2, 10, 100}, 29);
    CHECK(r.trials == 3 * 2000);
    CHECK(r.pass());
    CHECK(r.worst_margin >= 0.0);
  }
}
