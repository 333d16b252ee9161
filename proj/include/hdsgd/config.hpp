#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdsgd/problems.hpp"

namespace hdsgd {

// Carries every violated constraint, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class Experiment {
  kBounds,
  kGmc,
  kSgdMoment,
  kAsgdGap,
  kAsgdVariance,
  kBias,
  kTail,
  kGa,
  kComplexity,
  kInequalities,
};

const char* experiment_name(Experiment e);
bool parse_experiment(const std::string& tag, Experiment& out);

// One experiment description, parsed from flat `key = value` text
// (`#` starts a comment, keys are single-assignment).
struct Config {
  Experiment experiment = Experiment::kBounds;
  bool experiment_explicit = false;  // the key appeared in the text

  // Problem spec.
  std::string problem = "regression";  // regression | tanh
  long d = 10;
  std::string sigma = "identity";  // identity | tridiagonal:<diag>,<off>
  std::string covariate_law = "gaussian";  // | sub_exponential
                                           // | student_t:<nu> | constant
  std::string noise_law = "gaussian:1";    // | student_t:<nu>:<scale>
  double rho = 0.5;    // tanh coupling strength
  double shift = 0.0;  // tanh asymmetry (0 means zero averaged bias)

  // Norm / moment orders. s = 0 means "auto": resolve to s_d = choose_s_d(d).
  int s = 0;
  double q = 2.0;

  // Schedules. Singleton `alpha` / `k` keys land in the grids.
  std::vector<double> alpha_grid;
  std::vector<long> k_grid;
  std::vector<double> z_grid;  // empty means pilot-quantile auto grid

  long R = 1000;
  long macro_replications = 20;
  double epsilon = 0.1;
  double delta = 0.05;

  // Explicit constants; NaN means "estimate from the problem".
  double mu, L, M;
  double delta0 = 1.0;

  long T = 0;          // partial-sum length (ga)
  long xi_length = 0;  // 0 means 10*T
  long bandwidth = 0;  // 0 means floor(xi_length^{1/3})

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = ".";

  std::string echo;  // raw config text, byte-identical (audit trail)

  int resolved_s() const;  // s, or choose_s_d(d) when auto
  bool has_mu() const;
  bool has_L() const;
  bool has_M() const;
};

// Parses and validates; collects every violation into one ConfigError.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

// Builds the problem instance the config describes (beta* = 0).
ProblemPtr make_problem(const Config& cfg);

}  // namespace hdsgd
