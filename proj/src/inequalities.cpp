#include "hdsgd/inequalities.hpp"

#include <cmath>
#include <limits>

#include "hdsgd/rng.hpp"

namespace hdsgd {
namespace {

// Extended-precision l^s norm with the same max-factoring as ls_norm.
long double ls_norm_l(const Vector& x, long double s) {
  long double m = 0.0L;
  for (long i = 0; i < x.size(); ++i)
    m = std::max(m, static_cast<long double>(std::abs(x[i])));
  if (m == 0.0L) return 0.0L;
  long double acc = 0.0L;
  for (long i = 0; i < x.size(); ++i)
    acc += std::pow(static_cast<long double>(std::abs(x[i])) / m, s);
  return m * std::pow(acc, 1.0L / s);
}

// <x^{s-1}, z> with the convention that it vanishes when x = 0.
long double signed_power_dot(const Vector& x, const Vector& z, int s) {
  long double acc = 0.0L;
  for (long i = 0; i < x.size(); ++i) {
    long double xi = x[i];
    long double t = 1.0L;
    for (int e = 0; e < s - 1; ++e) t *= xi;
    acc += t * static_cast<long double>(z[i]);
  }
  return acc;
}

long double q_mean(const std::vector<std::pair<long double, long double>>&
                       weighted /* (p, value) */,
                   long double q) {
  long double acc = 0.0L;
  for (const auto& [p, v] : weighted) acc += p * std::pow(v, q);
  return std::pow(acc, 1.0L / q);
}

double margin_to_double(long double m) {
  return static_cast<double>(
      std::clamp(m, static_cast<long double>(-std::numeric_limits<double>::max()),
                 static_cast<long double>(std::numeric_limits<double>::max())));
}

void record(PropertyResult& r, long double margin) {
  ++r.trials;
  if (margin < 0.0L) ++r.violations;
  if (r.trials == 1 || margin_to_double(margin) < r.worst_margin)
    r.worst_margin = margin_to_double(margin);
}

}  // namespace

bool check_taylor_remainder(const Vector& x, const Vector& z, double alpha,
                            int s, double q) {
  const long double nx = ls_norm_l(x, s);
  const long double nz = ls_norm_l(z, s);
  Vector xz = x - alpha * z;
  const long double nxz = ls_norm_l(xz, s);
  long double linear = 0.0L;
  if (nx > 0.0L)
    linear = q * static_cast<long double>(alpha) *
             std::pow(nx, static_cast<long double>(q) - s) *
             signed_power_dot(x, z, s);
  const long double lhs =
      std::abs(std::pow(nxz, static_cast<long double>(q)) -
               std::pow(nx, static_cast<long double>(q)) + linear);
  const long double rhs =
      (q * static_cast<long double>(alpha) * alpha / 2.0L) *
      (std::abs(static_cast<long double>(q) - s) + (s - 1.0L)) *
      std::pow(nx + alpha * nz, static_cast<long double>(q) - 2.0L) * nz * nz;
  return lhs <= rhs + 1e-12L * std::max(1.0L, rhs);
}

bool check_rio_exact(const JointDist& joint, int s, double q) {
  joint.validate();
  const long double m = std::max(static_cast<long double>(q),
                                 static_cast<long double>(s));
  std::vector<std::pair<long double, long double>> nxy, nx, ny;
  long double cross_expect = 0.0L;
  double y_scale = 0.0;
  for (const JointAtom& a : joint.atoms) {
    const long double p = boost::rational_cast<long double>(a.p);
    Vector sum = a.x + a.y;
    nxy.emplace_back(p, ls_norm_l(sum, s));
    const long double anx = ls_norm_l(a.x, s);
    nx.emplace_back(p, anx);
    ny.emplace_back(p, ls_norm_l(a.y, s));
    if (anx > 0.0L)
      cross_expect += p * std::pow(anx, static_cast<long double>(q) - s) *
                      signed_power_dot(a.x, a.y, s);
    y_scale = std::max(y_scale, a.y.cwiseAbs().maxCoeff());
  }
  const long double lhs = std::pow(q_mean(nxy, q), 2.0L);
  const long double x2 = std::pow(q_mean(nx, q), 2.0L);
  const long double y2 = std::pow(q_mean(ny, q), 2.0L);
  const long double xq = q_mean(nx, q);
  long double mid = 0.0L;
  if (cross_expect != 0.0L && xq > 0.0L)
    mid = 2.0L * std::pow(xq, 2.0L - static_cast<long double>(q)) * cross_expect;

  const long double rhs_general = x2 + mid + (m - 1.0L) * y2;
  bool ok = lhs <= rhs_general + 1e-10L * std::max(1.0L, std::abs(rhs_general));

  if (joint.max_conditional_mean() <= 1e-14 * std::max(1.0, y_scale)) {
    const long double rhs_cond = x2 + (m - 1.0L) * y2;
    ok = ok && lhs <= rhs_cond + 1e-10L * std::max(1.0L, rhs_cond);
  }
  return ok;
}

bool check_maximal_inequality_exact(const std::vector<FiniteDist>& dists,
                                    double q) {
  if (dists.empty() || dists.size() > 4)
    throw std::invalid_argument("need between 1 and 4 independent laws");
  const long d = dists.front().dim();
  std::vector<Vector> means;
  for (const FiniteDist& f : dists) {
    if (f.dim() != d) throw std::invalid_argument("dimension mismatch");
    for (const Atom& a : f.atoms)
      if (static_cast<long>(a.x.size()) != d)
        throw std::invalid_argument("dimension mismatch");
    means.push_back(f.mean());
  }

  long double rhs_sum = 0.0L;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    std::vector<std::pair<long double, long double>> maxdev;
    for (const Atom& a : dists[i].atoms)
      maxdev.emplace_back(boost::rational_cast<long double>(a.p),
                          (a.x - means[i]).cwiseAbs().maxCoeff());
    rhs_sum += std::pow(q_mean(maxdev, q), 2.0L);
  }
  const long double factor =
      std::exp(2.0L) *
      (std::max(static_cast<long double>(q),
                std::log(static_cast<long double>(d))) -
       1.0L);
  const long double rhs = factor * rhs_sum;

  long double lhs_acc = 0.0L;
  enumerate_product(dists, [&](const std::vector<const Atom*>& outcome,
                               const Rational& p) {
    Vector sum = Vector::Zero(d);
    for (std::size_t i = 0; i < outcome.size(); ++i)
      sum += outcome[i]->x - means[i];
    lhs_acc += boost::rational_cast<long double>(p) *
               std::pow(static_cast<long double>(sum.cwiseAbs().maxCoeff()),
                        static_cast<long double>(q));
  });
  const long double lhs = std::pow(lhs_acc, 2.0L / q);
  return lhs <= rhs + 1e-10L * std::max(1.0L, rhs);
}

PropertyResult test_taylor_remainder(long trials, std::uint64_t seed) {
  PropertyResult res;
  const int s_choices[4] = {2, 4, 6, 8};
  for (long t = 0; t < trials; ++t) {
    CounterRng rng(mix_seed(seed, t), Stream::kConstants, 0);
    const long d = 1 + static_cast<long>(rng.next_u64() % 16);
    const int s = s_choices[rng.next_u64() % 4];
    double q = rng.uniform(2.0, 8.0);
    // Hit the boundary cases q = 2 and q = s regularly: both make the
    // remainder bound tight up to rounding.
    const std::uint64_t c = rng.next_u64() % 10;
    if (c == 0) q = 2.0;
    if (c == 1) q = s;
    const double alpha = std::exp(rng.uniform(std::log(1e-3), 0.0));
    Vector x(d), z(d);
    for (long i = 0; i < d; ++i) {
      x[i] = rng.uniform(-1.0, 1.0);
      z[i] = rng.uniform(-1.0, 1.0);
    }
    if (t % 500 == 13) x.setZero();
    if (t % 500 == 14) z.setZero();
    // Margin bookkeeping reuses the boolean check; a failed check records a
    // negative margin of unknown size, which is enough for reporting.
    const bool ok = check_taylor_remainder(x, z, alpha, s, q);
    record(res, ok ? 1.0L : -1.0L);
  }
  return res;
}

namespace {

JointDist random_joint(CounterRng& rng, bool conditional_mean_zero) {
  const long d = 1 + static_cast<long>(rng.next_u64() % 3);
  JointDist joint;
  if (conditional_mean_zero) {
    // Up to 2 x-atoms, each given a +/- pair of y values with equal halves of
    // the group mass: the conditional mean vanishes exactly.
    const int groups = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<long long> w(groups);
    long long total = 0;
    for (auto& wi : w) {
      wi = 1 + static_cast<long long>(rng.next_u64() % 8);
      total += wi;
    }
    for (int g = 0; g < groups; ++g) {
      Vector x(d), y(d);
      for (long i = 0; i < d; ++i) {
        x[i] = rng.uniform(-2.0, 2.0);
        y[i] = rng.uniform(-2.0, 2.0);
      }
      joint.atoms.push_back({x, y, Rational(w[g], 2 * total)});
      joint.atoms.push_back({x, -y, Rational(w[g], 2 * total)});
    }
  } else {
    const int n = 1 + static_cast<int>(rng.next_u64() % 4);
    std::vector<long long> w(n);
    long long total = 0;
    for (auto& wi : w) {
      wi = 1 + static_cast<long long>(rng.next_u64() % 8);
      total += wi;
    }
    for (int a = 0; a < n; ++a) {
      Vector x(d), y(d);
      for (long i = 0; i < d; ++i) {
        x[i] = rng.uniform(-2.0, 2.0);
        y[i] = rng.uniform(-2.0, 2.0);
      }
      joint.atoms.push_back({x, y, Rational(w[a], total)});
    }
  }
  return joint;
}

}  // namespace

PropertyResult test_rio(long instances, std::uint64_t seed) {
  PropertyResult res;
  const int s_choices[2] = {2, 4};
  const double q_choices[3] = {2.0, 3.0, 4.0};
  for (long t = 0; t < instances; ++t) {
    CounterRng rng(mix_seed(seed, t), Stream::kConstants, 0);
    const int s = s_choices[rng.next_u64() % 2];
    const double q = q_choices[rng.next_u64() % 3];
    JointDist joint = random_joint(rng, t % 2 == 0);
    record(res, check_rio_exact(joint, s, q) ? 1.0L : -1.0L);
  }
  return res;
}

PropertyResult test_maximal(long instances, std::uint64_t seed) {
  PropertyResult res;
  const long d_choices[3] = {2, 4, 8};
  const double q_choices[3] = {2.0, 3.0, 4.0};
  for (long t = 0; t < instances; ++t) {
    CounterRng rng(mix_seed(seed, t), Stream::kConstants, 0);
    const long d = d_choices[rng.next_u64() % 3];
    const double q = q_choices[rng.next_u64() % 3];
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);
    std::vector<FiniteDist> dists(n);
    for (auto& f : dists) {
      const int atoms = 1 + static_cast<int>(rng.next_u64() % 4);
      std::vector<long long> w(atoms);
      long long total = 0;
      for (auto& wi : w) {
        wi = 1 + static_cast<long long>(rng.next_u64() % 8);
        total += wi;
      }
      for (int a = 0; a < atoms; ++a) {
        Vector x(d);
        for (long i = 0; i < d; ++i) x[i] = rng.uniform(-2.0, 2.0);
        f.atoms.push_back({x, Rational(w[a], total)});
      }
    }
    record(res, check_maximal_inequality_exact(dists, q) ? 1.0L : -1.0L);
  }
  return res;
}

PropertyResult test_norm_equivalence(long trials_per_dim,
                                     const std::vector<long>& dims,
                                     std::uint64_t seed) {
  PropertyResult res;
  constexpr double kE = 2.718281828459045;
  for (long d : dims) {
    const int s = choose_s_d(d);
    Vector x(d);
    for (long t = 0; t < trials_per_dim; ++t) {
      CounterRng rng(mix_seed(seed, d), Stream::kConstants, t);
      const std::uint64_t kind = rng.next_u64() % 4;
      const double scale = std::exp(rng.uniform(-150.0, 150.0));
      switch (kind) {
        case 0:
          for (long i = 0; i < d; ++i) x[i] = scale * rng.uniform(-1.0, 1.0);
          break;
        case 1:
          for (long i = 0; i < d; ++i) x[i] = scale * rng.normal();
          break;
        case 2:  // one-hot: the lower sandwich bound is attained exactly
          x.setZero();
          x[rng.next_u64() % d] = scale;
          break;
        default:  // constant vector: the d^{1/s} <= e end of the sandwich
          x.setConstant(scale);
          break;
      }
      const double lo = max_norm(x);
      const double mid = ls_norm(x, s);
      const long double lower = mid - lo * (1.0L - 1e-12L);
      const long double upper = kE * lo * (1.0L + 1e-12L) - mid;
      record(res, std::min(lower, upper));
    }
  }
  return res;
}

}  // namespace hdsgd
