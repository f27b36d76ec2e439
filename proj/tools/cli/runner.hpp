#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "raplab/report_json.hpp"

namespace raplab::cli {

struct AssertionResult {
  Expectation expect;
  json actual;  // value(s) found at the path; null when missing
  bool passed = false;
  std::string message;
};

/// Paths are dotted keys with [i] indices; `*` matches every element.
std::vector<AssertionResult> check_expectations(const std::vector<Expectation>& expect, const ojson& facts);

struct RunResult {
  std::filesystem::path dir;
  ojson manifest;
  std::vector<AssertionResult> assertions;
  bool passed = false;
};

/// Output root: $RAPLAB_OUTPUT_ROOT, else the config's output_root (relative
/// to the config file), else ./runs.
std::filesystem::path output_root_for(const Experiment& ex);

/// Runs the experiment into <root>/<name>-<config hash prefix>, replacing any
/// previous contents, and writes manifest.json (plus failures.json when an
/// assertion fails).
RunResult run_experiment(const Experiment& ex, const std::filesystem::path& root);

/// Computes the facts and artifacts only (no manifest); used by the runner.
ojson execute(const Experiment& ex, const std::filesystem::path& dir, std::vector<std::string>& artifacts);

}  // namespace raplab::cli
