#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udn/channel.hpp"
#include "udn/pathloss.hpp"
#include "udn/simulator.hpp"

namespace udn {

enum class ExperimentKind {
  Ccdf,
  CoverageSweep,
  RateSweep,
  RegimeReport,
  TailDiagnostic,
  LaplaceCheck,
  OrderingCheck,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

/// Channel keys as written in a config. `alpha` is the Pareto index or the
/// Gamma shape; `sigma` is the Pareto or Gamma scale, the Rayleigh mean or the
/// deterministic value.
struct ChannelSpec {
  std::string kind = "composite";
  double alpha = 1.0;
  double sigma = 1.0;
  double sigma_db = channel::kDefaultSigmaDb;

  ChannelPowerDist build() const;
  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct ExperimentSpec {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::CoverageSweep;
  int d = 2;
  double r_inf_m = 40000.0;
  double w_linear = kDefaultNoise;
  std::vector<double> lambda_grid_per_km2{1.0, 10.0, 1e2, 1e3, 1e4, 1e5};
  std::vector<double> y_grid_db{0.0};
  std::size_t trials = kDefaultTrials;
  std::uint64_t seed = 1;
  double pl_a0 = 1.0;
  std::vector<double> pl_beta;
  std::vector<double> pl_r_breaks_m;
  ChannelSpec ch;
  std::optional<ChannelSpec> ch2;  // second network of an ordering check
  std::vector<double> s_grid{0.5, 1.0, 2.0};
  std::vector<double> t_grid;      // empty: 51 log-spaced points on [1e-2, 1e8]
  std::string out = "experiment.csv";

  PathlossModel pathloss() const;
  NetworkConfig network(double lambda_per_km2, const ChannelSpec& channel) const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Parses `key = value` lines; `#` starts a comment. Throws ParseError for
/// malformed lines and unknown keys, ValidationError for invalid values.
ExperimentSpec parse_config(std::string_view text);
std::string render_config(const ExperimentSpec& spec);
void validate(const ExperimentSpec& spec);

/// Named figure suites: fig3a, fig3b, fig4, fig5, fig6, fig7, fig7a, fig7b, table1.
std::vector<ExperimentSpec> suite(std::string_view name);
std::vector<std::string> suite_names();

struct ExperimentOutput {
  std::string csv;
  std::string summary;
};

ExperimentOutput run_experiment(const ExperimentSpec& spec, const SimOptions& options = {});

/// Writes spec.out and the summary next to it (extension replaced by .txt).
/// Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentSpec& spec, const ExperimentOutput& output);

/// Writes the sweep CSV rows for the given grids.
std::string sweep_csv(const SweepResult& result);

/// "Growth", "Saturation", "Deficit" or "Inconclusive" from the sweep at the
/// threshold closest to 0 dB.
std::string empirical_regime(const SweepResult& result, std::size_t y_count);

}  // namespace udn
