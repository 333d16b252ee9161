#include "hdsgd/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdsgd/bounds.hpp"
#include "hdsgd/inequalities.hpp"
#include "hdsgd/verify.hpp"

namespace hdsgd {
namespace {

using nlohmann::json;

json estimate_json(const EstimateWithCI& e) {
  return {{"value", e.value}, {"se", e.se}, {"n", e.n}};
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kAnalytic: return "analytic";
    case Provenance::kGershgorin: return "gershgorin";
    case Provenance::kMonteCarlo: return "monte_carlo";
  }
  return "?";
}

json constant_json(const ConstantEstimate& c) {
  return {{"value", c.value},
          {"se", c.se},
          {"replications", c.replications},
          {"provenance", provenance_name(c.provenance)}};
}

json constants_json(const RunConstants& c) {
  return {{"mu", constant_json(c.mu)}, {"L", constant_json(c.L)},
          {"M", constant_json(c.M)},   {"s", c.s},
          {"q", c.q},                  {"alpha_max", c.alpha_max}};
}

json fit_json(const ScalingFit& f) {
  return {{"x", f.x},
          {"estimate", f.estimate},
          {"se", f.se},
          {"slope", f.slope},
          {"slope_se", f.slope_se},
          {"intercept", f.intercept},
          {"target", f.target},
          {"tolerance", f.tolerance},
          {"pass", f.pass}};
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json property_json(const PropertyResult& r) {
  return {{"trials", r.trials},
          {"violations", r.violations},
          {"worst_margin", r.worst_margin},
          {"pass", r.pass()}};
}

json assumption_json(const AssumptionCheck& r) {
  return {{"trials", r.trials},
          {"violations", r.violations},
          {"worst_margin", r.worst_margin},
          {"pass", r.pass()}};
}

std::string scaling_csv(const ScalingFit& f) {
  std::string out = "x,estimate,se\n";
  for (std::size_t i = 0; i < f.x.size(); ++i)
    out += format_g17(f.x[i]) + "," + format_g17(f.estimate[i]) + "," +
           format_g17(f.se[i]) + "\n";
  return out;
}

std::string gmc_csv(const GmcReport& r) {
  std::string out = "k,empirical_moment,envelope,se\n";
  for (const GmcCheckpoint& cp : r.checkpoints)
    out += std::to_string(cp.k) + "," + format_g17(cp.moment.value) + "," +
           format_g17(cp.envelope) + "," + format_g17(cp.moment.se) + "\n";
  return out;
}

std::string tail_csv(const TailReport& r) {
  std::string out = "z,empirical_p,ci_lo,ci_hi,theory_bound\n";
  for (const TailPoint& pt : r.points)
    out += format_g17(pt.z) + "," + format_g17(pt.p_hat) + "," +
           format_g17(pt.ci_lo) + "," + format_g17(pt.ci_hi) + "," +
           format_g17(pt.bound) + "\n";
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double default_burn_in_tol(double alpha, double M) {
  return 0.01 * std::sqrt(alpha) * M;
}

// Explicit constants win; otherwise Monte Carlo on the constants substream.
RunConstants resolve_constants(const Problem& p, const Config& cfg) {
  const int s = cfg.resolved_s();
  if (cfg.has_mu() && cfg.has_L() && cfg.has_M()) {
    RunConstants c;
    c.s = s;
    c.q = cfg.q;
    c.mu = {cfg.mu, 0.0, 0, Provenance::kAnalytic};
    c.L = {cfg.L, 0.0, 0, Provenance::kAnalytic};
    c.M = {cfg.M, 0.0, 0, Provenance::kAnalytic};
    c.alpha_max = alpha_max(cfg.mu, cfg.L, s, cfg.q);
    return c;
  }
  require(!cfg.has_mu() && !cfg.has_L() && !cfg.has_M(),
          "give all of mu, L, M explicitly or none of them");
  constexpr long kConstantReplications = 4000;
  return estimate_constants(p, s, cfg.q, kConstantReplications, cfg.seed);
}

std::vector<long> gmc_checkpoints(const Config& cfg) {
  if (cfg.k_grid.size() > 1) return cfg.k_grid;
  const long k_max = cfg.k_grid.front();
  if (k_max <= 1000) return {};  // dense
  std::vector<long> ks;
  double v = 1.0;
  const double factor = std::pow(static_cast<double>(k_max), 1.0 / 127.0);
  while (ks.empty() || ks.back() < k_max) {
    const long k = std::min<long>(k_max, static_cast<long>(std::lround(v)));
    if (ks.empty() || k > ks.back()) ks.push_back(k);
    v = std::max(v * factor, v + 1.0);
  }
  return ks;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunResult run_experiment(const Config& cfg) {
  RunResult res;
  json payload;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string exp = experiment_name(cfg.experiment);

  if (cfg.experiment == Experiment::kBounds) return run_bounds(cfg);

  if (cfg.experiment == Experiment::kInequalities) {
    const long R = cfg.R;
    PropertyResult taylor = test_taylor_remainder(R, cfg.seed);
    PropertyResult rio = test_rio(std::max<long>(2, R / 5), cfg.seed);
    PropertyResult maximal = test_maximal(std::max<long>(2, R / 10), cfg.seed);
    PropertyResult norm_eq =
        test_norm_equivalence(R, {2, 10, 100, 10000}, cfg.seed);
    payload = {{"taylor_remainder", property_json(taylor)},
               {"rio_moment_recursion", property_json(rio)},
               {"maximal_moment", property_json(maximal)},
               {"norm_equivalence", property_json(norm_eq)}};
    res.pass = taylor.pass() && rio.pass() && maximal.pass() && norm_eq.pass();
  } else {
    ProblemPtr p = make_problem(cfg);
    RunConstants c = resolve_constants(*p, cfg);
    json common = constants_json(c);

    switch (cfg.experiment) {
      case Experiment::kGmc: {
        require(cfg.alpha_grid.size() == 1, "gmc needs one `alpha`");
        require(cfg.k_grid.size() >= 1, "gmc needs `k` or `k_grid`");
        GmcReport r =
            verify_gmc(*p, c, cfg.alpha_grid[0], cfg.R, cfg.k_grid.back(),
                       cfg.seed, gmc_checkpoints(cfg), cfg.threads);
        json cps = json::array();
        for (const GmcCheckpoint& cp : r.checkpoints)
          cps.push_back({{"k", cp.k},
                         {"moment", estimate_json(cp.moment)},
                         {"envelope", cp.envelope},
                         {"envelope_sqrt_scale", cp.envelope_sq},
                         {"within", cp.within}});
        payload = {{"alpha", r.alpha},
                   {"r", r.r},
                   {"ln_r", r.ln_r},
                   {"d0", r.d0},
                   {"contraction_guaranteed", r.contraction_guaranteed},
                   {"diverged_replications", r.diverged_replications},
                   {"envelope_pass", r.envelope_pass},
                   {"max_violation_ratio", r.max_violation_ratio},
                   {"fitted_decay_per_step", r.fitted_decay},
                   {"replications", r.replications},
                   {"checkpoints", std::move(cps)}};
        res.pass = r.envelope_pass && r.diverged_replications == 0;
        res.csv.emplace_back(exp + "_curve.csv", gmc_csv(r));
        break;
      }
      case Experiment::kSgdMoment: {
        require(cfg.alpha_grid.size() >= 2, "sgd_moment needs `alpha_grid`");
        ScalingFit f = verify_sgd_moment_scaling(*p, c, cfg.alpha_grid, cfg.R,
                                                 cfg.seed, cfg.threads);
        payload = {{"fit", fit_json(f)},
                   {"burn_in_tol",
                    default_burn_in_tol(cfg.alpha_grid.front(), c.M.value)}};
        res.pass = f.pass;
        res.csv.emplace_back(exp + "_curve.csv", scaling_csv(f));
        break;
      }
      case Experiment::kAsgdGap: {
        require(cfg.alpha_grid.size() == 1, "asgd_gap needs one `alpha`");
        require(cfg.k_grid.size() >= 2, "asgd_gap needs `k_grid`");
        GapReport r = verify_asgd_stationarity_gap(
            *p, c, cfg.alpha_grid[0], cfg.k_grid, cfg.R, cfg.seed,
            cfg.threads);
        payload = {{"fit", fit_json(r.fit)},
                   {"envelope", r.envelope},
                   {"within", r.within},
                   {"envelope_pass", r.envelope_pass},
                   {"d0_moment", r.d0_moment},
                   {"r", r.r},
                   {"burn_in_tol",
                    default_burn_in_tol(cfg.alpha_grid[0], c.M.value)}};
        res.pass = r.envelope_pass;
        res.csv.emplace_back(exp + "_curve.csv", scaling_csv(r.fit));
        break;
      }
      case Experiment::kAsgdVariance: {
        require(cfg.alpha_grid.size() == 1, "asgd_variance needs one `alpha`");
        require(cfg.k_grid.size() >= 2, "asgd_variance needs `k_grid`");
        ScalingFit f =
            verify_asgd_variance_rate(*p, c, cfg.alpha_grid[0], cfg.k_grid,
                                      cfg.R, cfg.seed, cfg.threads);
        payload = {{"fit", fit_json(f)},
                   {"burn_in_tol",
                    default_burn_in_tol(cfg.alpha_grid[0], c.M.value)}};
        res.pass = f.pass;
        res.csv.emplace_back(exp + "_curve.csv", scaling_csv(f));
        break;
      }
      case Experiment::kBias: {
        require(cfg.alpha_grid.size() >= 2, "bias needs `alpha_grid`");
        require(cfg.k_grid.size() == 1, "bias needs one `k`");
        BiasReport r = verify_bias_scaling(*p, c, cfg.alpha_grid,
                                           cfg.k_grid[0], cfg.R, cfg.seed,
                                           cfg.threads);
        payload = {{"fit", fit_json(r.fit)},
                   {"bias", r.bias},
                   {"se", r.se},
                   {"max_t_stat", r.max_t_stat},
                   {"control_pass", r.control_pass}};
        // Curved gradient: slope assertion. Affine gradient: zero-bias control.
        res.pass = cfg.problem == "tanh" && cfg.shift != 0.0 ? r.fit.pass
                                                             : r.control_pass;
        res.csv.emplace_back(exp + "_curve.csv", scaling_csv(r.fit));
        break;
      }
      case Experiment::kTail: {
        require(cfg.alpha_grid.size() == 1, "tail needs one `alpha`");
        require(cfg.k_grid.size() == 1, "tail needs one `k`");
        TailReport r = estimate_tail(*p, c, cfg.alpha_grid[0], cfg.k_grid[0],
                                     cfg.z_grid, cfg.R, cfg.seed, cfg.threads);
        json pts = json::array();
        for (const TailPoint& pt : r.points)
          pts.push_back({{"z", pt.z},
                         {"p_hat", pt.p_hat},
                         {"ci_lo", pt.ci_lo},
                         {"ci_hi", pt.ci_hi},
                         {"bound", pt.bound},
                         {"count", pt.count}});
        payload = {{"points", std::move(pts)},
                   {"fitted_constant", r.fitted_constant},
                   {"log_slope", r.log_slope},
                   {"log_slope_se", r.log_slope_se},
                   {"domination_pass", r.domination_pass},
                   {"slope_window_found", r.slope_window_found},
                   {"delta0", r.delta0},
                   {"replications", r.replications}};
        const double slope_limit = -(c.q - 1.0) + 0.75;
        res.pass = r.domination_pass &&
                   (!r.slope_window_found || r.log_slope <= slope_limit);
        res.csv.emplace_back(exp + "_curve.csv", tail_csv(r));
        break;
      }
      case Experiment::kGa: {
        require(cfg.alpha_grid.size() == 1, "ga needs one `alpha`");
        require(cfg.T >= 1, "ga needs `T`");
        GaussianApproxReport r = verify_gaussian_approx(
            *p, c, cfg.alpha_grid[0], cfg.T, cfg.R, cfg.seed, cfg.xi_length,
            cfg.bandwidth, cfg.threads);
        payload = {{"xi_hat", matrix_json(r.xi_hat)},
                   {"partial_sum_cov", matrix_json(r.partial_sum_cov)},
                   {"frobenius_rel_error", r.frobenius_rel_error},
                   {"ks_stats", r.ks_stats},
                   {"ks_critical", r.ks_critical},
                   {"ks_pass_count", r.ks_pass_count},
                   {"cov_pass", r.cov_pass},
                   {"ks_pass", r.ks_pass},
                   {"T", r.T},
                   {"xi_trajectory_length", r.xi_trajectory_length},
                   {"bandwidth", r.bandwidth},
                   {"replications", r.replications},
                   {"burn_in_tol",
                    default_burn_in_tol(cfg.alpha_grid[0], c.M.value)}};
        res.pass = r.cov_pass && r.ks_pass;
        break;
      }
      case Experiment::kComplexity: {
        require(cfg.s == 0 || cfg.s == choose_s_d(cfg.d),
                "complexity requires s = auto (the recipe pins s to s_d)");
        ComplexityReport r =
            verify_complexity(*p, c, cfg.epsilon, cfg.macro_replications,
                              cfg.R, cfg.seed, cfg.threads);
        payload = {{"s_d", r.recipe.s_d},
                   {"V", r.recipe.V},
                   {"B", r.recipe.B},
                   {"alpha_rec", r.recipe.alpha_rec},
                   {"k_rec", r.recipe.k_rec},
                   {"up_to_constants", r.recipe.up_to_constants},
                   {"c1", r.c1},
                   {"c2", r.c2},
                   {"c3", r.c3},
                   {"epsilon", r.epsilon},
                   {"achieved", r.achieved},
                   {"passes", r.passes},
                   {"pass_fraction", r.pass_fraction},
                   {"pass", r.pass},
                   {"k_curve", r.k_curve},
                   {"k_curve_error", r.k_curve_error}};
        res.pass = r.pass;
        break;
      }
      default:
        throw std::logic_error("unhandled experiment");
    }
    payload["constants"] = std::move(common);
  }

  const auto t1 = std::chrono::steady_clock::now();
  res.report = {
      {"schema_version", kSchemaVersion},
      {"version", kVersion},
      {"experiment", exp},
      {"seed", cfg.seed},
      {"config", cfg.echo},
      {"wall_time_seconds",
       std::chrono::duration<double>(t1 - t0).count()},
      {"pass", res.pass},
      {"payload", std::move(payload)}};
  return res;
}

RunResult run_property_test(const std::string& lemma_in, const Config& cfg) {
  RunResult res;
  std::string lemma = lemma_in;
  for (char& ch : lemma)
    if (ch == '-') ch = '_';
  json payload;
  const auto t0 = std::chrono::steady_clock::now();

  if (lemma == "taylor") {
    PropertyResult r = test_taylor_remainder(cfg.R, cfg.seed);
    payload = property_json(r);
    res.pass = r.pass();
  } else if (lemma == "rio") {
    PropertyResult r = test_rio(cfg.R, cfg.seed);
    payload = property_json(r);
    res.pass = r.pass();
  } else if (lemma == "maximal") {
    PropertyResult r = test_maximal(cfg.R, cfg.seed);
    payload = property_json(r);
    res.pass = r.pass();
  } else if (lemma == "norm_equivalence") {
    PropertyResult r = test_norm_equivalence(cfg.R, {2, 10, 100, 10000},
                                             cfg.seed);
    payload = property_json(r);
    res.pass = r.pass();
  } else if (lemma == "strong_convexity") {
    ProblemPtr p = make_problem(cfg);
    AssumptionCheck r = check_strong_convexity(*p, p->analytic_mu().value,
                                               cfg.R, cfg.seed);
    payload = assumption_json(r);
    res.pass = r.pass();
  } else if (lemma == "lipschitz") {
    ProblemPtr p = make_problem(cfg);
    RunConstants c = resolve_constants(*p, cfg);
    AssumptionCheck r = check_stochastic_lipschitz(
        *p, c.L, c.s, c.q, std::min<long>(cfg.R, 200), 2000, cfg.seed);
    payload = assumption_json(r);
    payload["constants"] = constants_json(c);
    res.pass = r.pass();
  } else if (lemma == "unbiasedness") {
    ProblemPtr p = make_problem(cfg);
    AssumptionCheck r = check_unbiasedness(*p, std::min<long>(cfg.R, 100),
                                           std::max<long>(1000, cfg.R),
                                           cfg.seed);
    payload = assumption_json(r);
    res.pass = r.pass();
  } else {
    throw std::invalid_argument(
        "unknown lemma `" + lemma_in +
        "`; one of taylor, rio, maximal, norm_equivalence, strong_convexity, "
        "lipschitz, unbiasedness");
  }

  const auto t1 = std::chrono::steady_clock::now();
  res.report = {{"schema_version", kSchemaVersion},
                {"version", kVersion},
                {"experiment", "property:" + lemma},
                {"seed", cfg.seed},
                {"config", cfg.echo},
                {"wall_time_seconds",
                 std::chrono::duration<double>(t1 - t0).count()},
                {"pass", res.pass},
                {"payload", std::move(payload)}};
  return res;
}

RunResult run_bounds(const Config& cfg) {
  require(cfg.has_mu() && cfg.has_L() && cfg.has_M(),
          "bounds needs explicit mu, L, M");
  const auto t0 = std::chrono::steady_clock::now();
  const int s = cfg.resolved_s();
  const double amax = alpha_max(cfg.mu, cfg.L, s, cfg.q);

  json payload = {{"d", cfg.d},
                  {"s", s},
                  {"s_d", choose_s_d(cfg.d)},
                  {"q", cfg.q},
                  {"mu", cfg.mu},
                  {"L", cfg.L},
                  {"M", cfg.M},
                  {"alpha_max", amax},
                  {"alpha_max_averaged", amax / 7.0},
                  {"alpha_root", alpha_root(cfg.mu, cfg.L, s, cfg.q)}};

  json rates = json::array();
  for (double a : cfg.alpha_grid) {
    json entry = {{"alpha", a}};
    if (a < amax) {
      const double r = contraction_rate(cfg.mu, cfg.L, s, cfg.q, a);
      entry["r"] = r;
      entry["r_norm_scale"] = norm_contraction_rate(cfg.mu, cfg.L, s, cfg.q, a);
      if (a < amax / 7.0)
        entry["r_averaged"] = tilde_contraction_rate(cfg.mu, cfg.L, s, cfg.q, a);
      const double m_big = std::max(cfg.q, static_cast<double>(s));
      const double d0 = std::sqrt(6.0 * m_big * a) * cfg.M;
      entry["burn_in_steps"] = burn_in_steps(
          norm_contraction_rate(cfg.mu, cfg.L, s, cfg.q, a), d0,
          default_burn_in_tol(a, cfg.M));
    } else {
      entry["r"] = nullptr;
    }
    if (!cfg.k_grid.empty() && a < amax && s == choose_s_d(cfg.d)) {
      json terms = json::array();
      for (long k : cfg.k_grid) {
        AsgdBoundTerms t = asgd_bound_terms(cfg.M, cfg.L, cfg.mu, cfg.d, cfg.q,
                                            s, a, k, cfg.delta0);
        terms.push_back({{"k", k},
                         {"variance_term", t.variance_term},
                         {"init_term", t.init_term},
                         {"bias_term", t.bias_term},
                         {"total", t.total},
                         {"up_to_constants", t.up_to_constants}});
      }
      entry["averaged_bound_terms"] = std::move(terms);
    }
    if (!cfg.k_grid.empty() && a < amax) {
      json radii = json::array();
      for (long k : cfg.k_grid)
        radii.push_back({{"k", k},
                         {"delta", cfg.delta},
                         {"radius", high_prob_radius(cfg.delta, k, a, cfg.d,
                                                     cfg.q, cfg.M,
                                                     cfg.delta0)}});
      entry["high_prob_radius"] = std::move(radii);
      if (!cfg.z_grid.empty()) {
        json tails = json::array();
        for (long k : cfg.k_grid)
          for (double z : cfg.z_grid)
            tails.push_back(
                {{"k", k},
                 {"z", z},
                 {"bound", fuk_nagaev_bound(z, static_cast<double>(k), a,
                                            cfg.d, cfg.q, cfg.M, cfg.delta0,
                                            1.0)},
                 {"fitted_constant", 1.0}});
        entry["tail_bounds"] = std::move(tails);
      }
    }
    rates.push_back(std::move(entry));
  }
  payload["per_alpha"] = std::move(rates);

  ComplexityRecipe rec = complexity(cfg.epsilon, cfg.M, cfg.L, cfg.mu, cfg.d,
                                    cfg.q, cfg.delta0);
  payload["complexity"] = {{"epsilon", cfg.epsilon},
                           {"s_d", rec.s_d},
                           {"V", rec.V},
                           {"B", rec.B},
                           {"alpha_rec", rec.alpha_rec},
                           {"k_rec", rec.k_rec},
                           {"up_to_constants", rec.up_to_constants}};

  const auto t1 = std::chrono::steady_clock::now();
  RunResult res;
  res.pass = true;
  res.report = {{"schema_version", kSchemaVersion},
                {"version", kVersion},
                {"experiment", "bounds"},
                {"seed", cfg.seed},
                {"config", cfg.echo},
                {"wall_time_seconds",
                 std::chrono::duration<double>(t1 - t0).count()},
                {"pass", res.pass},
                {"payload", std::move(payload)}};
  return res;
}

std::string write_artifacts(const RunResult& r, const std::string& out_dir,
                            const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  const fs::path json_path = dir / (stem + "_report.json");
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + json_path.string());
    out << r.report.dump(2) << "\n";
  }
  for (const auto& [name, contents] : r.csv) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + (dir / name).string());
    out << contents;
  }
  return json_path.string();
}

std::string summarize_report(const std::string& json_path) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + json_path);
  json rep = json::parse(in);
  std::ostringstream out;
  out << "experiment:   " << rep.value("experiment", std::string("?")) << "\n"
      << "version:      " << rep.value("version", std::string("?"))
      << " (schema " << rep.value("schema_version", 0) << ")\n"
      << "seed:         " << rep.value("seed", 0ULL) << "\n"
      << "wall time:    " << rep.value("wall_time_seconds", 0.0) << " s\n"
      << "pass:         " << (rep.value("pass", false) ? "yes" : "no") << "\n";
  if (rep.contains("payload")) {
    out << "payload:\n";
    for (const auto& [key, val] : rep["payload"].items())
      if (!val.is_structured())
        out << "  " << key << " = " << val.dump() << "\n";
  }
  return out.str();
}

}  // namespace hdsgd
