#pragma once

#include <cstdint>

#include "hdsgd/finite_support.hpp"

namespace hdsgd {

// Outcome of a randomized or enumerated property run. A pass is zero
// violations over a positive number of trials; worst_margin is the smallest
// observed value of (allowed bound - checked quantity), so a negative value
// quantifies the worst breach.
struct PropertyResult {
  long trials = 0;
  long violations = 0;
  double worst_margin = 0.0;
  bool pass() const { return trials > 0 && violations == 0; }
};

// Deterministic second-order remainder inequality for a -> |x - a z|_s^q:
//   | |x-az|_s^q - |x|_s^q + q a |x|_s^{q-s} <x^{s-1}, z> |
//     <= (q a^2 / 2) [|q-s| + (s-1)] (|x|_s + a |z|_s)^{q-2} |z|_s^2.
// Evaluated in extended precision; true iff LHS <= RHS + 1e-12 max(1, RHS).
bool check_taylor_remainder(const Vector& x, const Vector& z, double alpha,
                            int s, double q);

// Moment inequality on a finite-support joint law, exact expectations:
//   general display   ||x+y||^2 <= ||x||^2 + cross-term + (max{q,s}-1)||y||^2
//   conditional form  ||x+y||^2 <= ||x||^2 + (max{q,s}-1)||y||^2,
// the latter asserted only when the law satisfies E[y|x] = 0 (detected
// exactly). True iff every applicable display holds within 1e-10 relative.
bool check_rio_exact(const JointDist& joint, int s, double q);

// L^q maximal inequality over the product of independent finite-support laws:
//   || max_j |sum_i (x_ij - E x_ij)| ||_q^2
//     <= e^2 (max{q, ln d} - 1) sum_i || max_j |x_ij - E x_ij| ||_q^2.
// Exact product enumeration; true iff within 1e-10 relative.
bool check_maximal_inequality_exact(const std::vector<FiniteDist>& dists,
                                    double q);

// Randomized drivers used by the property-test command and acceptance runs.
PropertyResult test_taylor_remainder(long trials, std::uint64_t seed);
PropertyResult test_rio(long instances, std::uint64_t seed);
PropertyResult test_maximal(long instances, std::uint64_t seed);

// Sandwich max_norm(x) <= ls_norm(x, s_d) <= e * max_norm(x) across random
// vectors of every dimension in dims, 1e-12 relative slack.
PropertyResult test_norm_equivalence(long trials_per_dim,
                                     const std::vector<long>& dims,
                                     std::uint64_t seed);

}  // namespace hdsgd
