#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdsgd/config.hpp"

namespace hdsgd {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Full round-trip precision; the CSV determinism contract depends on it.
std::string format_g17(double v);

struct RunResult {
  bool pass = false;
  nlohmann::json report;
  // (basename, contents); contents are byte-identical across reruns of the
  // same (config, seed) — wall time lives only in the JSON.
  std::vector<std::pair<std::string, std::string>> csv;
};

// Dispatches the experiment named in the config and assembles the report.
// No disk access; the caller decides where artifacts land.
RunResult run_experiment(const Config& cfg);

// Runs one named inequality/assumption property test.
// Lemmas: taylor, rio, maximal, norm_equivalence, strong_convexity,
// lipschitz, unbiasedness.
RunResult run_property_test(const std::string& lemma, const Config& cfg);

// Closed-form evaluation of every threshold/bound the config pins down.
RunResult run_bounds(const Config& cfg);

// Writes report JSON + CSV curves under out_dir; returns the JSON path.
std::string write_artifacts(const RunResult& r, const std::string& out_dir,
                            const std::string& stem);

// Human-readable digest of a previously written JSON report.
std::string summarize_report(const std::string& json_path);

}  // namespace hdsgd
