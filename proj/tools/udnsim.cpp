#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "udn/error.hpp"
#include "udn/experiment.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw udn::Error(udn::ErrorCode::IoError, "cannot read " + path);
  std::ostringstream text;
  text << f.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense network coverage and rate experiments"};
  std::string config_path;
  std::string suite_name;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  unsigned threads = 0;
  bool list = false;

  auto* config_opt = app.add_option("--config", config_path, "Experiment config file");
  auto* suite_opt = app.add_option("--suite", suite_name, "Built-in suite name");
  config_opt->excludes(suite_opt);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--trials", trials, "Trials per grid point (overrides the config)");
  app.add_option("--threads", threads, "Worker threads, 0 = all cores");
  app.add_flag("--list-suites", list, "Print the suite names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (list) {
    for (const auto& name : udn::suite_names()) std::cout << name << '\n';
    return kOk;
  }
  if (config_path.empty() && suite_name.empty()) {
    std::cerr << "one of --config or --suite is required\n" << app.help();
    return kUsage;
  }

  std::vector<udn::ExperimentSpec> specs;
  try {
    if (!config_path.empty()) {
      specs.push_back(udn::parse_config(read_file(config_path)));
    } else {
      specs = udn::suite(suite_name);
    }
    for (auto& spec : specs) {
      if (seed) spec.seed = *seed;
      if (trials) spec.trials = *trials;
      if (!out_dir.empty()) {
        spec.out = (std::filesystem::path(out_dir) / std::filesystem::path(spec.out).filename()).string();
      }
      udn::validate(spec);
    }
  } catch (const udn::Error& e) {
    std::cerr << e.what() << '\n';
    if (e.code() == udn::ErrorCode::InvalidArgument && !suite_name.empty()) return kUsage;
    if (e.code() == udn::ErrorCode::IoError) return kRuntime;
    return kValidation;
  }

  udn::SimOptions options;
  options.threads = threads;
  try {
    for (const auto& spec : specs) {
      const auto output = udn::run_experiment(spec, options);
      for (const auto& path : udn::write_outputs(spec, output)) std::cout << "wrote " << path << '\n';
      std::cout << output.summary;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
