#include "hdsgd/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hdsgd/bounds.hpp"
#include "hdsgd/norms.hpp"

namespace hdsgd {
namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out = "invalid config:";
  for (const std::string& p : parts) out += "\n  - " + p;
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size() && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  try {
    out = std::stol(s);
  } catch (...) {
    return false;
  }
  return true;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s[0] == '-') return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  try {
    out = std::stoull(s);
  } catch (...) {
    return false;
  }
  return true;
}

struct LawSpec {
  std::string tag;
  std::vector<double> args;
};

// identity | tridiagonal:<diag>,<off>
bool parse_sigma(const std::string& s, double& diag, double& off,
                 bool& is_identity) {
  if (s == "identity") {
    is_identity = true;
    return true;
  }
  is_identity = false;
  const std::string prefix = "tridiagonal:";
  if (s.rfind(prefix, 0) != 0) return false;
  std::vector<std::string> args = split(s.substr(prefix.size()), ',');
  return args.size() == 2 && parse_double(args[0], diag) &&
         parse_double(args[1], off) && diag > 0.0;
}

bool parse_law(const std::string& s, LawSpec& out) {
  std::vector<std::string> parts = split(s, ':');
  if (parts.empty() || parts[0].empty()) return false;
  out.tag = parts[0];
  out.args.clear();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    double v;
    if (!parse_double(parts[i], v)) return false;
    out.args.push_back(v);
  }
  return true;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kBounds: return "bounds";
    case Experiment::kGmc: return "gmc";
    case Experiment::kSgdMoment: return "sgd_moment";
    case Experiment::kAsgdGap: return "asgd_gap";
    case Experiment::kAsgdVariance: return "asgd_variance";
    case Experiment::kBias: return "bias";
    case Experiment::kTail: return "tail";
    case Experiment::kGa: return "ga";
    case Experiment::kComplexity: return "complexity";
    case Experiment::kInequalities: return "inequalities";
  }
  return "?";
}

bool parse_experiment(const std::string& tag, Experiment& out) {
  static const std::pair<const char*, Experiment> table[] = {
      {"bounds", Experiment::kBounds},
      {"gmc", Experiment::kGmc},
      {"sgd_moment", Experiment::kSgdMoment},
      {"asgd_gap", Experiment::kAsgdGap},
      {"asgd_variance", Experiment::kAsgdVariance},
      {"bias", Experiment::kBias},
      {"tail", Experiment::kTail},
      {"ga", Experiment::kGa},
      {"complexity", Experiment::kComplexity},
      {"inequalities", Experiment::kInequalities},
  };
  for (const auto& [name, e] : table)
    if (tag == name) {
      out = e;
      return true;
    }
  return false;
}

int Config::resolved_s() const { return s == 0 ? choose_s_d(d) : s; }
bool Config::has_mu() const { return !std::isnan(mu); }
bool Config::has_L() const { return !std::isnan(L); }
bool Config::has_M() const { return !std::isnan(M); }

Config parse_config(const std::string& text) {
  Config cfg;
  cfg.mu = cfg.L = cfg.M = std::numeric_limits<double>::quiet_NaN();
  cfg.echo = text;

  std::vector<std::string> errs;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  long lineno = 0;
  bool has_alpha = false, has_k = false;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back("line " + std::to_string(lineno) +
                     ": expected `key = value`");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      errs.push_back("line " + std::to_string(lineno) +
                     ": empty key or value");
      continue;
    }
    if (!seen.insert(key).second) {
      errs.push_back("duplicate key `" + key + "` (line " +
                     std::to_string(lineno) + "); keys are single-assignment");
      continue;
    }

    const auto bad = [&](const std::string& why) {
      errs.push_back("key `" + key + "` = `" + val + "`: " + why);
    };

    if (key == "experiment") {
      if (!parse_experiment(val, cfg.experiment))
        bad("unknown experiment tag; one of bounds, gmc, sgd_moment, "
            "asgd_gap, asgd_variance, bias, tail, ga, complexity, "
            "inequalities");
      else
        cfg.experiment_explicit = true;
    } else if (key == "problem") {
      if (val != "regression" && val != "tanh")
        bad("unknown problem; one of regression, tanh");
      else
        cfg.problem = val;
    } else if (key == "d") {
      if (!parse_long(val, cfg.d) || cfg.d < 1) bad("need an integer >= 1");
    } else if (key == "sigma") {
      double diag, off;
      bool ident;
      if (!parse_sigma(val, diag, off, ident))
        bad("need identity or tridiagonal:<diag>,<off> with diag > 0");
      else
        cfg.sigma = val;
    } else if (key == "covariate_law") {
      LawSpec law;
      if (!parse_law(val, law) ||
          !((law.tag == "gaussian" && law.args.empty()) ||
            (law.tag == "sub_exponential" && law.args.empty()) ||
            (law.tag == "constant" && law.args.empty()) ||
            (law.tag == "student_t" && law.args.size() == 1 &&
             law.args[0] > 4.0 && law.args[0] == std::floor(law.args[0]))))
        bad("unsupported law tag; one of gaussian, sub_exponential, "
            "constant, student_t:<nu> with integer nu > 4");
      else
        cfg.covariate_law = val;
    } else if (key == "noise_law") {
      LawSpec law;
      if (!parse_law(val, law) ||
          !((law.tag == "gaussian" && law.args.size() == 1 &&
             law.args[0] > 0.0) ||
            (law.tag == "student_t" && law.args.size() == 2 &&
             law.args[0] > 2.0 && law.args[0] == std::floor(law.args[0]) &&
             law.args[1] > 0.0)))
        bad("unsupported law tag; one of gaussian:<sd> with sd > 0, "
            "student_t:<nu>:<scale> with integer nu > 2, scale > 0");
      else
        cfg.noise_law = val;
    } else if (key == "rho") {
      if (!parse_double(val, cfg.rho) || cfg.rho < 0.0) bad("need rho >= 0");
    } else if (key == "shift") {
      if (!parse_double(val, cfg.shift)) bad("need a finite number");
    } else if (key == "s") {
      if (val == "auto") {
        cfg.s = 0;
      } else {
        long sv;
        if (!parse_long(val, sv) || sv < 2 || sv % 2 != 0)
          bad("s must be an even integer >= 2, or auto");
        else
          cfg.s = static_cast<int>(sv);
      }
    } else if (key == "q") {
      if (!parse_double(val, cfg.q) || cfg.q < 2.0) bad("need q >= 2");
    } else if (key == "alpha" || key == "alpha_grid") {
      if (has_alpha) {
        errs.push_back("both `alpha` and `alpha_grid` given; pick one");
        continue;
      }
      has_alpha = true;
      cfg.alpha_grid.clear();
      bool ok = true;
      for (const std::string& item : split(val, ',')) {
        double a;
        ok = ok && parse_double(item, a) && a > 0.0;
        if (ok) cfg.alpha_grid.push_back(a);
      }
      if (!ok || cfg.alpha_grid.empty() ||
          (key == "alpha" && cfg.alpha_grid.size() != 1))
        bad(key == "alpha" ? "need one learning rate > 0"
                           : "need a comma-separated list of rates > 0");
    } else if (key == "k" || key == "k_grid") {
      if (has_k) {
        errs.push_back("both `k` and `k_grid` given; pick one");
        continue;
      }
      has_k = true;
      cfg.k_grid.clear();
      bool ok = true;
      for (const std::string& item : split(val, ',')) {
        long k;
        ok = ok && parse_long(item, k) && k >= 1 &&
             (cfg.k_grid.empty() || k > cfg.k_grid.back());
        if (ok) cfg.k_grid.push_back(k);
      }
      if (!ok || cfg.k_grid.empty() ||
          (key == "k" && cfg.k_grid.size() != 1))
        bad(key == "k" ? "need one integer step count >= 1"
                       : "need a strictly increasing list of integers >= 1");
    } else if (key == "z_grid") {
      if (val == "auto") {
        cfg.z_grid.clear();
      } else {
        cfg.z_grid.clear();
        bool ok = true;
        for (const std::string& item : split(val, ',')) {
          double z;
          ok = ok && parse_double(item, z) && z > 0.0 &&
               (cfg.z_grid.empty() || z > cfg.z_grid.back());
          if (ok) cfg.z_grid.push_back(z);
        }
        if (!ok || cfg.z_grid.empty())
          bad("need auto or a strictly increasing list of thresholds > 0");
      }
    } else if (key == "R" || key == "replications") {
      if (!parse_long(val, cfg.R) || cfg.R < 2)
        bad("need an integer >= 2");
    } else if (key == "macro_replications") {
      if (!parse_long(val, cfg.macro_replications) ||
          cfg.macro_replications < 1)
        bad("need an integer >= 1");
    } else if (key == "epsilon") {
      if (!parse_double(val, cfg.epsilon) || cfg.epsilon <= 0.0)
        bad("need epsilon > 0");
    } else if (key == "delta") {
      if (!parse_double(val, cfg.delta) || cfg.delta <= 0.0 ||
          cfg.delta >= 1.0)
        bad("need delta in (0,1)");
    } else if (key == "mu") {
      if (!parse_double(val, cfg.mu) || cfg.mu <= 0.0) bad("need mu > 0");
    } else if (key == "L") {
      if (!parse_double(val, cfg.L) || cfg.L <= 0.0) bad("need L > 0");
    } else if (key == "M") {
      if (!parse_double(val, cfg.M) || cfg.M <= 0.0) bad("need M > 0");
    } else if (key == "delta0") {
      if (!parse_double(val, cfg.delta0) || cfg.delta0 < 0.0)
        bad("need delta0 >= 0");
    } else if (key == "T") {
      if (!parse_long(val, cfg.T) || cfg.T < 1) bad("need an integer >= 1");
    } else if (key == "xi_length") {
      if (!parse_long(val, cfg.xi_length) || cfg.xi_length < 1)
        bad("need an integer >= 1");
    } else if (key == "bandwidth") {
      if (!parse_long(val, cfg.bandwidth) || cfg.bandwidth < 1)
        bad("need an integer >= 1");
    } else if (key == "seed") {
      if (!parse_u64(val, cfg.seed)) bad("need a 64-bit unsigned integer");
    } else if (key == "threads") {
      long t;
      if (!parse_long(val, t) || t < 1)
        bad("need an integer >= 1");
      else
        cfg.threads = static_cast<int>(t);
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else {
      errs.push_back("unknown key `" + key + "`");
    }
  }

  // Cross-field checks (only when the inputs themselves parsed).
  if (errs.empty()) {
    if (cfg.s != 0 && cfg.s % 2 != 0)
      errs.push_back("s must be even");
    if (cfg.problem == "tanh" && cfg.covariate_law != "gaussian")
      errs.push_back("`covariate_law` only applies to problem = regression");
    // With explicit constants the contraction range is checkable now;
    // estimated constants are checked at dispatch instead.
    if (cfg.has_mu() && cfg.has_L() && !cfg.alpha_grid.empty() &&
        cfg.experiment != Experiment::kBounds) {
      const double amax =
          alpha_max(cfg.mu, cfg.L, cfg.resolved_s(), cfg.q);
      for (double a : cfg.alpha_grid)
        if (a >= amax)
          errs.push_back("alpha = " + std::to_string(a) +
                         " is not below the contraction threshold " +
                         std::to_string(amax));
    }
  }

  if (!errs.empty()) throw ConfigError(std::move(errs));
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ProblemPtr make_problem(const Config& cfg) {
  const Vector beta_star = Vector::Zero(cfg.d);
  LawSpec noise;
  if (!parse_law(cfg.noise_law, noise))
    throw std::invalid_argument("bad noise law: " + cfg.noise_law);
  NoiseLaw nlaw =
      noise.tag == "gaussian" ? NoiseLaw::kGaussian : NoiseLaw::kStudentT;
  const double noise_scale = noise.tag == "gaussian" ? noise.args[0]
                                                     : noise.args[1];
  const double noise_nu = noise.tag == "gaussian" ? 0.0 : noise.args[0];

  if (cfg.problem == "tanh")
    return std::make_shared<TanhProblem>(cfg.d, cfg.rho, cfg.shift, nlaw,
                                         noise_scale,
                                         static_cast<int>(noise_nu));

  LawSpec cov;
  if (!parse_law(cfg.covariate_law, cov))
    throw std::invalid_argument("bad covariate law: " + cfg.covariate_law);
  CovariateLaw claw = CovariateLaw::kGaussian;
  double cov_nu = 0.0;
  if (cov.tag == "sub_exponential") claw = CovariateLaw::kSubExponential;
  else if (cov.tag == "constant") claw = CovariateLaw::kConstant;
  else if (cov.tag == "student_t") {
    claw = CovariateLaw::kStudentT;
    cov_nu = cov.args[0];
  }

  double diag = 1.0, off = 0.0;
  bool ident = true;
  if (!parse_sigma(cfg.sigma, diag, off, ident))
    throw std::invalid_argument("bad covariance spec: " + cfg.sigma);
  Matrix Sigma = Matrix::Identity(cfg.d, cfg.d);
  if (!ident) {
    Sigma *= diag;
    for (long i = 0; i + 1 < cfg.d; ++i) Sigma(i, i + 1) = Sigma(i + 1, i) = off;
  }
  return std::make_shared<LinearRegression>(Sigma, beta_star, claw,
                                            static_cast<int>(cov_nu), nlaw,
                                            noise_scale,
                                            static_cast<int>(noise_nu));
}

}  // namespace hdsgd
