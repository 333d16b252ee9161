#include "hdsgd/finite_support.hpp"

#include <map>
#include <stdexcept>

namespace hdsgd {
namespace {

void check_sum_to_one(const Rational& total, std::size_t n, long max_support) {
  if (n < 1 || static_cast<long>(n) > max_support)
    throw std::invalid_argument("finite-support size must lie in [1, " +
                                std::to_string(max_support) + "]");
  if (total != Rational(1))
    throw std::invalid_argument(
        "finite-support probabilities must sum exactly to 1");
}

}  // namespace

void FiniteDist::validate() const {
  Rational total(0);
  const long d = dim();
  for (const Atom& a : atoms) {
    if (a.p <= Rational(0))
      throw std::invalid_argument("atom probabilities must be positive");
    if (a.x.size() != d || !a.x.allFinite())
      throw std::invalid_argument("atom vectors must be finite with equal dims");
    total += a.p;
  }
  check_sum_to_one(total, atoms.size(), 64);
}

Vector FiniteDist::mean() const {
  Vector m = Vector::Zero(dim());
  for (const Atom& a : atoms)
    m += boost::rational_cast<double>(a.p) * a.x;
  return m;
}

void JointDist::validate() const {
  Rational total(0);
  const long d = dim();
  for (const JointAtom& a : atoms) {
    if (a.p <= Rational(0))
      throw std::invalid_argument("atom probabilities must be positive");
    if (a.x.size() != d || a.y.size() != d || !a.x.allFinite() ||
        !a.y.allFinite())
      throw std::invalid_argument("atom vectors must be finite with equal dims");
    total += a.p;
  }
  check_sum_to_one(total, atoms.size(), 64);
}

double JointDist::max_conditional_mean() const {
  // Group atoms by exact x value; within a group accumulate p * y.
  std::map<std::vector<double>, std::pair<Vector, Rational>> groups;
  for (const JointAtom& a : atoms) {
    std::vector<double> key(a.x.data(), a.x.data() + a.x.size());
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups.emplace(std::move(key),
                     std::make_pair(Vector(boost::rational_cast<double>(a.p) * a.y), a.p));
    } else {
      it->second.first += boost::rational_cast<double>(a.p) * a.y;
      it->second.second += a.p;
    }
  }
  double worst = 0.0;
  for (const auto& [key, g] : groups) {
    const double mass = boost::rational_cast<double>(g.second);
    worst = std::max(worst, (g.first / mass).cwiseAbs().maxCoeff());
  }
  return worst;
}

void enumerate_product(
    const std::vector<FiniteDist>& factors,
    const std::function<void(const std::vector<const Atom*>&, const Rational&)>&
        visit) {
  if (factors.empty()) throw std::invalid_argument("empty product");
  long total = 1;
  for (const FiniteDist& f : factors) {
    f.validate();
    total *= static_cast<long>(f.atoms.size());
    if (total > 4096)
      throw std::invalid_argument("product support exceeds 4096 outcomes");
  }
  std::vector<const Atom*> outcome(factors.size(), nullptr);
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t i,
                                                       Rational p) {
    if (i == factors.size()) {
      visit(outcome, p);
      return;
    }
    for (const Atom& a : factors[i].atoms) {
      outcome[i] = &a;
      rec(i + 1, p * a.p);
    }
  };
  rec(0, Rational(1));
}

}  // namespace hdsgd
