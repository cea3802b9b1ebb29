// diracsea: command-line front end of the harness.
//
//   diracsea run <config.json> [--out DIR] [--seed U64] [--threads N]
//   diracsea sweep <config.json> --axis NAME --values v1,v2,... [...]
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diracsea/harness.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0')
      throw diracsea::InvalidInput("values", "not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void report(const diracsea::harness::RunOutcome& o) {
  std::cout << o.summary_json << "\n";
  for (const auto& p : o.outputs) std::cerr << "wrote " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac-sea external-field laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DIRACSEA_VERSION);

  std::string config_path, out_dir = "out", axis, values;
  std::optional<std::uint64_t> seed;
  int threads = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration file (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the Monte-Carlo seed");
    sub->add_option("--threads", threads, "worker threads for sampling")->check(CLI::PositiveNumber);
  };
  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one axis of the configuration");
  add_common(sweep);
  sweep->add_option("--axis", axis, "N, e, amplitude or Lambda")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  diracsea::harness::RunOptions options;
  options.out_dir = out_dir;
  options.seed = seed;
  options.threads = threads;
  try {
    if (*run) {
      report(diracsea::harness::run_file(config_path, options));
    } else {
      diracsea::config::RunConfig cfg = diracsea::config::load(config_path);
      report(diracsea::harness::sweep(cfg, axis, parse_values(values), options));
    }
  } catch (const diracsea::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    if (e.guard() == "ill_conditioned_U--")
      std::cerr << "hint: the lift needs a weak field; reduce e or the pulse amplitude\n";
    return 3;
  } catch (const diracsea::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
