#pragma once

#include <boost/rational.hpp>
#include <functional>
#include <vector>

#include "hdsgd/norms.hpp"

namespace hdsgd {

using Rational = boost::rational<long long>;

// One outcome of a finite-support law over vectors.
struct Atom {
  Vector x;
  Rational p;
};

// One outcome of a joint law over pairs (x, y).
struct JointAtom {
  Vector x;
  Vector y;
  Rational p;
};

// Distribution with exact rational probabilities. Moments over it are finite
// sums, so inequality checks against it carry no Monte Carlo slack.
struct FiniteDist {
  std::vector<Atom> atoms;
  // Throws unless all probabilities are positive, sum exactly to 1 under
  // rational arithmetic, support size is in [1, 64], and dimensions agree.
  void validate() const;
  long dim() const { return atoms.empty() ? 0 : atoms.front().x.size(); }
  // Exact mean vector (probabilities exact, values in long double).
  Vector mean() const;
};

struct JointDist {
  std::vector<JointAtom> atoms;
  void validate() const;
  long dim() const { return atoms.empty() ? 0 : atoms.front().x.size(); }
  // Largest |conditional mean of y given x-group| over all distinct x values;
  // zero (up to float rounding of the y-sum) means the mean-zero-conditional
  // hypothesis holds.
  double max_conditional_mean() const;
};

// Visit every outcome of the product of independent laws with its exact
// probability. outcome[i] points at the chosen atom of factors[i]. The total
// product support must not exceed 4096 outcomes.
void enumerate_product(
    const std::vector<FiniteDist>& factors,
    const std::function<void(const std::vector<const Atom*>&, const Rational&)>&
        visit);

}  // namespace hdsgd
