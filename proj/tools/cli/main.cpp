#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "experiment.hpp"
#include "raplab/catalog.hpp"
#include "raplab/error.hpp"
#include "runner.hpp"

#ifndef RAPLAB_VERSION
#define RAPLAB_VERSION "unknown"
#endif

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitError = 2;

int cmd_run(const std::string& path, const std::string& root_override, bool quiet) {
  using namespace raplab::cli;
  const Experiment ex = load_experiment(path);
  const auto root = root_override.empty() ? output_root_for(ex) : std::filesystem::path(root_override);
  const RunResult res = run_experiment(ex, root);
  if (!quiet) {
    for (const auto& a : res.assertions) {
      std::printf("  %-4s %s = %s\n", a.passed ? "ok" : "FAIL", a.expect.path.c_str(), a.actual.dump().c_str());
      if (!a.message.empty()) std::printf("       %s\n", a.message.c_str());
    }
  }
  std::printf("%s %s (%s) -> %s\n", res.passed ? "PASS" : "FAIL", ex.name.c_str(), ex.kind.c_str(),
              res.dir.string().c_str());
  return res.passed ? kExitPass : kExitAssertion;
}

int cmd_validate(const std::string& path) {
  const auto ex = raplab::cli::load_experiment(path);
  std::printf("valid: %s (%s), %zu assertions, sha256 %s\n", ex.name.c_str(), ex.kind.c_str(), ex.expect.size(),
              ex.config_sha256.c_str());
  return kExitPass;
}

int cmd_catalog(bool as_json) {
  if (as_json) {
    raplab::ojson arr = raplab::ojson::array();
    for (const auto& e : raplab::catalog()) {
      arr.push_back({{"id", e.id},
                     {"kind", std::string(raplab::to_string(e.kind))},
                     {"formula", e.formula},
                     {"dim", e.dim},
                     {"params", e.params}});
    }
    std::cout << arr.dump(2) << "\n";
    return kExitPass;
  }
  for (const auto& e : raplab::catalog()) {
    std::printf("%-20s %-8s dim=%zu  %s", e.id.c_str(), std::string(raplab::to_string(e.kind)).c_str(), e.dim,
                e.formula.c_str());
    for (const auto& [k, v] : e.params) std::printf("  %s=%g", k.c_str(), v);
    std::printf("\n");
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence classification experiments"};
  app.set_version_flag("--version", RAPLAB_VERSION);
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string output_root;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run experiments and check their expectations");
  run->add_option("config", configs, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-root", output_root, "Override the output root");
  run->add_flag("-q,--quiet", quiet, "Only print the summary line");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a config without running it");
  validate->add_option("config", validate_path)->required()->check(CLI::ExistingFile);

  bool as_json = false;
  auto* cat = app.add_subcommand("catalog", "List the built-in systems");
  cat->add_flag("--json", as_json, "Machine-readable listing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*run) {
      int rc = kExitPass;
      for (const auto& c : configs) rc = std::max(rc, cmd_run(c, output_root, quiet));
      return rc;
    }
    if (*validate) return cmd_validate(validate_path);
    return cmd_catalog(as_json);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
