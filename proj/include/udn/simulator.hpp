#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "udn/channel.hpp"
#include "udn/pathloss.hpp"
#include "udn/random.hpp"

namespace udn {

/// Noise power in linear units where marks have unit scale and A_0 = 1.
inline constexpr double kDefaultNoise = 1e-7;
inline constexpr std::size_t kDefaultTrials = 20000;

/// Volume of the unit ball in dimension 1, 2 or 3.
double unit_ball_volume(int dimension);

struct NetworkConfig {
  double lambda = 0.0;  // BS per m^d
  double noise = kDefaultNoise;
  PathlossModel pathloss;
  ChannelPowerDist channel;

  /// Density given in BS/km^2 (converted with 1e-6).
  static NetworkConfig from_km2(double lambda_per_km2, double noise, PathlossModel pathloss,
                                ChannelPowerDist channel);

  int dimension() const { return pathloss.dimension(); }
  double r_inf() const { return pathloss.r_inf(); }
  double lambda_per_km2() const { return lambda * 1e6; }
  /// lambda v_d R_inf^d.
  double mean_count() const;
  /// Throws InvalidArgument on negative density or non-finite noise.
  void validate() const;
};

/// One PPP draw with every node kept.
struct Realization {
  std::vector<double> distance;   // r_i in meters
  std::vector<double> log_mark;   // ln m_i
  std::vector<double> log_power;  // ln P_i = ln m_i - ln l(r_i)

  std::size_t count() const { return log_power.size(); }
  /// Index of the strongest node, first on ties; count() when empty.
  std::size_t strongest() const;
  /// ln M and ln I; -inf for an empty realization.
  double log_max() const;
  double log_total() const;
};

std::uint64_t sample_count(const NetworkConfig& config, RandomStream& rng);
Realization sample_realization(const NetworkConfig& config, RandomStream& rng);

/// M / (I + W - M); 0 for an empty realization, +inf when W = 0 and N = 1.
double sinr(const Realization& real, double noise);
/// SINR when the user is served by node i.
double sinr_of(const Realization& real, std::size_t i, double noise);
/// SINR when the user is served by the nearest node.
double nearest_sinr(const Realization& real, double noise);

/// Per-trial summary: ln M and (I - M) / M.
struct TrialOutcome {
  double log_max = -std::numeric_limits<double>::infinity();
  double excess = 0.0;

  bool empty() const { return log_max == -std::numeric_limits<double>::infinity(); }
  /// ln sinr; -inf when empty, +inf when noise and excess are both zero.
  double log_sinr(double noise) const;
  /// M / I, 0 when empty.
  double max_over_total() const { return empty() ? 0.0 : 1.0 / (1.0 + excess); }
};

TrialOutcome summarize(const Realization& real);

enum class Engine { Auto, Spatial, PowerDomain };

struct SimOptions {
  unsigned threads = 0;  // 0: all hardware threads
  Engine engine = Engine::Auto;
  std::size_t top_count = 256;       // exactly drawn strongest nodes in the power domain
  double spatial_max_mean = 64.0;    // Auto uses the spatial engine up to this mean count
};

class LinkTable;

/// Runs trials for one configuration. The power-domain table is built on
/// first use and shared by later densities with the same pathloss and marks.
class Simulator {
 public:
  explicit Simulator(SimOptions options = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  const SimOptions& options() const { return options_; }

  /// Outcome of trial i uses the stream derive_stream(seed, i) only.
  std::vector<TrialOutcome> run(const NetworkConfig& config, std::size_t trials,
                                std::uint64_t seed);

  /// Single trial drawn in the power domain.
  TrialOutcome power_domain_trial(const NetworkConfig& config, RandomStream& rng);

 private:
  const LinkTable& table_for(const NetworkConfig& config);

  SimOptions options_;
  std::unique_ptr<LinkTable> table_;
  std::unique_ptr<NetworkConfig> table_key_;
};

struct Estimate {
  double value = 0.0;
  double ci95 = 0.0;  // 1.96 sample-std / sqrt(n)
  std::size_t samples = 0;
};

/// Fixed-order pairwise sum.
double pairwise_sum(std::span<const double> values);
/// Mean and CI half-width of the given per-trial values.
Estimate mean_estimate(std::span<const double> values);

Estimate coverage_from(std::span<const TrialOutcome> outcomes, double noise, double y_linear);

struct RateEstimate {
  Estimate rate;         // nats/s/Hz over trials with finite sinr
  bool diverged = false; // some trials had infinite sinr and were left out
};
RateEstimate rate_from(std::span<const TrialOutcome> outcomes, double noise);

/// Mean of e^{-s / sinr}.
Estimate laplace_from(std::span<const TrialOutcome> outcomes, double noise, double s);

struct RatioSummary {
  Estimate mean;
  double q10 = 0.0, q50 = 0.0, q90 = 0.0;
  std::size_t empty_trials = 0;  // left out of the summary
};
RatioSummary ratio_from(std::span<const TrialOutcome> outcomes);

Estimate estimate_coverage(const NetworkConfig& config, double y_linear, std::size_t trials,
                           std::uint64_t seed, const SimOptions& options = {});
RateEstimate estimate_rate(const NetworkConfig& config, std::size_t trials, std::uint64_t seed,
                           const SimOptions& options = {});
/// Coverage at every threshold from the same realizations.
std::vector<Estimate> estimate_sinr_ccdf(const NetworkConfig& config,
                                         std::span<const double> y_grid_db, std::size_t trials,
                                         std::uint64_t seed, const SimOptions& options = {});
RatioSummary estimate_mi_ratio(const NetworkConfig& config, std::size_t trials,
                               std::uint64_t seed, const SimOptions& options = {});

double db_to_linear(double db);

struct SweepPoint {
  double lambda_per_km2 = 0.0;
  double y_db = 0.0;
  double y_linear = 0.0;
  Estimate coverage;
  RateEstimate rate;
  double coverage_density = 0.0;  // lambda_per_km2 * coverage
  double ase = 0.0;               // lambda_per_km2 * rate
};

struct SweepResult {
  std::vector<SweepPoint> points;  // lambda-major, y-minor
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  /// Point at (lambda index, y index).
  const SweepPoint& at(std::size_t lambda_index, std::size_t y_index, std::size_t y_count) const {
    return points[lambda_index * y_count + y_index];
  }
};

/// Every density reuses the same trial streams.
SweepResult sweep(const NetworkConfig& base, std::span<const double> lambda_grid_per_km2,
                  std::span<const double> y_grid_db, std::size_t trials, std::uint64_t seed,
                  Simulator& simulator);

struct SparseCheck {
  std::vector<Estimate> coverage;
  bool nondecreasing = true;  // each step up holds within CI overlap
};

/// Coverage at y over a sparse density grid, checked for monotone growth.
SparseCheck monotone_sparse_check(const NetworkConfig& base,
                                  std::span<const double> lambda_grid_per_km2, double y_linear,
                                  std::size_t trials, std::uint64_t seed,
                                  const SimOptions& options = {});

}  // namespace udn
