#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hdsgd/config.hpp"
#include "hdsgd/report.hpp"

namespace {

struct SharedFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<long> replications;
  std::optional<int> threads;
};

// Flag and environment overrides sit on top of the config file; the file's
// byte-identical echo in the report still shows exactly what was loaded.
void add_shared(CLI::App* cmd, SharedFlags& f, bool config_required) {
  auto* c = cmd->add_option("--config", f.config_path,
                            "experiment config file (key = value lines)")
                ->envname("HDSGD_CONFIG");
  if (config_required) c->required();
  cmd->add_option("--seed", f.seed, "override the config seed")
      ->envname("HDSGD_SEED");
  cmd->add_option("--out-dir", f.out_dir, "override the output directory")
      ->envname("HDSGD_OUT_DIR");
  cmd->add_option("--replications", f.replications,
                  "override the replication count")
      ->envname("HDSGD_REPLICATIONS");
  cmd->add_option("--threads", f.threads, "override the worker count")
      ->envname("HDSGD_THREADS");
}

hdsgd::Config load(const SharedFlags& f) {
  hdsgd::Config cfg = f.config_path.empty()
                          ? hdsgd::parse_config("")
                          : hdsgd::load_config(f.config_path);
  if (f.seed) cfg.seed = *f.seed;
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.replications) {
    if (*f.replications < 2)
      throw std::invalid_argument("--replications must be >= 2");
    cfg.R = *f.replications;
  }
  if (f.threads) {
    if (*f.threads < 1) throw std::invalid_argument("--threads must be >= 1");
    cfg.threads = *f.threads;
  }
  return cfg;
}

int emit(const hdsgd::RunResult& res, const hdsgd::Config& cfg,
         const std::string& stem) {
  const std::string path = hdsgd::write_artifacts(res, cfg.out_dir, stem);
  std::cout << (res.pass ? "PASS" : "FAIL") << "  report: " << path << "\n";
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Constant learning-rate SGD / averaged SGD: closed-form thresholds and "
      "bounds, Monte Carlo verification, exact inequality checks"};
  app.require_subcommand(1);

  SharedFlags bounds_f, verify_f, prop_f;
  std::string experiment_tag, lemma, report_path;

  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "evaluate every closed-form quantity the "
                                   "config pins down (no simulation)");
  add_shared(bounds_cmd, bounds_f, true);

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "run one Monte Carlo verification experiment");
  verify_cmd
      ->add_option("experiment", experiment_tag,
                   "one of gmc, sgd_moment, asgd_gap, asgd_variance, bias, "
                   "tail, ga, complexity, inequalities")
      ->required();
  add_shared(verify_cmd, verify_f, true);

  CLI::App* prop_cmd = app.add_subcommand(
      "property-test", "run one inequality/assumption property test");
  prop_cmd
      ->add_option("lemma", lemma,
                   "one of taylor, rio, maximal, norm_equivalence, "
                   "strong_convexity, lipschitz, unbiasedness")
      ->required();
  add_shared(prop_cmd, prop_f, false);

  CLI::App* report_cmd =
      app.add_subcommand("report", "summarize a previously written report");
  report_cmd->add_option("path", report_path, "report JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds_cmd->parsed()) {
      hdsgd::Config cfg = load(bounds_f);
      return emit(hdsgd::run_bounds(cfg), cfg, "bounds");
    }
    if (verify_cmd->parsed()) {
      hdsgd::Config cfg = load(verify_f);
      hdsgd::Experiment e;
      if (!hdsgd::parse_experiment(experiment_tag, e))
        throw std::invalid_argument("unknown experiment `" + experiment_tag +
                                    "`");
      if (cfg.experiment_explicit && cfg.experiment != e)
        throw std::invalid_argument(
            std::string("config names experiment `") +
            hdsgd::experiment_name(cfg.experiment) +
            "` but the command line asks for `" + experiment_tag + "`");
      cfg.experiment = e;
      return emit(hdsgd::run_experiment(cfg), cfg,
                  hdsgd::experiment_name(e));
    }
    if (prop_cmd->parsed()) {
      hdsgd::Config cfg = load(prop_f);
      std::string stem = lemma;
      for (char& ch : stem)
        if (ch == '-') ch = '_';
      return emit(hdsgd::run_property_test(lemma, cfg), cfg,
                  "property_" + stem);
    }
    if (report_cmd->parsed()) {
      std::cout << hdsgd::summarize_report(report_path);
      std::ifstream in(report_path, std::ios::binary);
      nlohmann::json rep = nlohmann::json::parse(in);
      return rep.value("pass", false) ? 0 : 1;
    }
  } catch (const hdsgd::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
