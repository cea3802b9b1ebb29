#pragma once

// Experiment orchestration behind the `diracsea` CLI: runs one named
// experiment or a sweep, and writes <out>/<experiment>.csv, .json and
// manifest.json.

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diracsea/config.hpp"

namespace diracsea::harness {

/// CSV table; cells are preformatted, numbers as %.16e.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

std::string format_number(double v);
std::string format_integer(long long v);

struct ExperimentResult {
  std::string name;
  Table table;
  std::vector<std::pair<std::string, Table>> extra_tables;  // file suffix, table
  std::string summary_json;
  std::vector<std::pair<std::string, double>> scalars;  // summary row for sweeps
  std::string primary;                                  // scalar used for ratios and slopes
};

ExperimentResult run_experiment(const config::RunConfig& cfg, int threads = 1);

struct RunOptions {
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

struct RunOutcome {
  std::string experiment;
  std::vector<std::string> outputs;  // paths written, manifest last
  std::string summary_json;
};

/// Runs cfg.experiment (a sweep when it is "sweep") and writes the outputs.
RunOutcome run(config::RunConfig cfg, const RunOptions& options);
RunOutcome run_file(const std::string& path, const RunOptions& options);

/// Sweep of the configuration's experiment (or its sweep.experiment) over one
/// axis; an empty value list is rejected.
RunOutcome sweep(config::RunConfig cfg, const std::string& axis, const std::vector<double>& values,
                 const RunOptions& options);

/// 2 for InvalidInput, 3 for NumericalFailure, 1 otherwise.
int exit_code(const std::exception& e);

}  // namespace diracsea::harness
