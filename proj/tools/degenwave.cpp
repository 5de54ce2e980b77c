// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
//
// Scenario-driven front end: classify / check / simulate / spectrum / report
// pipelines over a JSON scenario config, plus a sweep mode.
//
// Exit codes: 0 success (verdicts are data, not errors), 1 configuration
// error, 2 hypothesis violation (failing hypothesis named on stderr),
// 3 numerical failure.
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "degenwave/errors.hpp"
#include "degenwave/scenario.hpp"

namespace {

int dispatch(const std::string& command, const std::string& config_path,
             const std::optional<std::string>& output_override) {
  using namespace degenwave;
  if (command == "sweep") {
    run_sweep(config_path);
    return 0;
  }
  ScenarioConfig cfg = parse_scenario_file(config_path);
  if (output_override) cfg.output.directory = *output_override;
  if (command == "classify") {
    run_classify(cfg);
  } else if (command == "check") {
    run_check(cfg);
  } else if (command == "simulate") {
    run_simulate(cfg);
  } else if (command == "spectrum") {
    run_spectrum(cfg);
  } else {
    run_report(cfg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenwave: boundary-damped degenerate wave equation laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_override;
  const char* names[] = {"classify", "check", "simulate", "spectrum", "report", "sweep"};
  const char* briefs[] = {
      "evaluate the coefficient hypotheses and write the verdict JSON",
      "compute the Hardy-Poincare and norm-equivalence constants",
      "integrate the damped wave system and write the trace CSV",
      "eigenvalues and spectral abscissa of the first-order generator",
      "full stability report: constants, decay bound, inequality suite",
      "run a list of scenarios through the report pipeline"};
  for (size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], briefs[i]);
    sub->add_option("-c,--config", config_path, "scenario config (JSON)")->required();
    sub->add_option("-o,--output", output_override, "override the output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage problems are configuration errors
  }
  const std::string command = app.get_subcommands().front()->get_name();

  using namespace degenwave;
  try {
    return dispatch(command, config_path, output_override);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const BadDelta& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const HypothesisViolation& e) {
    std::fprintf(stderr, "error: hypothesis check failed: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
