#include "udn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "udn/error.hpp"
#include "udn/link_table.hpp"
#include "udn/tail_analysis.hpp"

namespace udn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// ln(1 + e^x).
double softplus(double x) {
  if (x == -kInf) return 0.0;
  if (x > 35.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

TrialOutcome spatial_trial(const NetworkConfig& config, RandomStream& rng) {
  TrialOutcome out;
  const std::uint64_t n = sample_count(config, rng);
  const int d = config.dimension();
  const double r_inf = config.r_inf();
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = distance_quantile(d, r_inf, open_uniform(rng));
    const double lp = config.channel.sample_log(rng) - config.pathloss.log_evaluate(r);
    if (out.empty()) {
      out.log_max = lp;
    } else if (lp > out.log_max) {
      out.excess = (out.excess + 1.0) * std::exp(out.log_max - lp);
      out.log_max = lp;
    } else {
      out.excess += std::exp(lp - out.log_max);
    }
  }
  return out;
}

TrialOutcome power_trial(const LinkTable& table, const NetworkConfig& config, std::size_t top,
                         RandomStream& rng) {
  // Received powers of a PPP form a Poisson process on the line: the j-th
  // strongest is the upper quantile at Gamma_j / mean with Gamma_j a unit-rate
  // arrival time. Points weaker than the last drawn one enter through their sum.
  TrialOutcome out;
  const double mean = config.mean_count();
  if (!(mean > 0.0)) return out;
  const double log_mean = std::log(mean);
  double gamma = 0.0;
  double log_tau = 0.0;
  bool exhausted = false;
  for (std::size_t j = 0; j < top; ++j) {
    gamma -= std::log(open_uniform(rng));
    if (gamma > mean) {
      exhausted = true;
      break;
    }
    const double lp = table.log_quantile_upper(std::log(gamma) - log_mean);
    if (j == 0) {
      out.log_max = lp;
    } else {
      out.excess += std::exp(lp - out.log_max);
    }
    log_tau = lp;
  }
  if (!exhausted && !out.empty()) {
    const auto m = table.truncated_moments(log_tau);
    std::normal_distribution<double> normal;
    double rest = mean * m.h1 + std::sqrt(mean * m.h2) * normal(rng);
    rest = std::clamp(rest, 0.0, mean - gamma);
    if (rest > 0.0) out.excess += std::exp(log_tau + std::log(rest) - out.log_max);
  }
  return out;
}

}  // namespace

double unit_ball_volume(int dimension) {
  switch (dimension) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
  }
  throw Error(ErrorCode::InvalidArgument, "dimension must be 1, 2 or 3");
}

NetworkConfig NetworkConfig::from_km2(double lambda_per_km2, double noise, PathlossModel pathloss,
                                      ChannelPowerDist channel) {
  NetworkConfig c{lambda_per_km2 * 1e-6, noise, std::move(pathloss), std::move(channel)};
  c.validate();
  return c;
}

double NetworkConfig::mean_count() const {
  return lambda * unit_ball_volume(dimension()) * std::pow(r_inf(), dimension());
}

void NetworkConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "density must be finite and nonnegative");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw Error(ErrorCode::InvalidArgument, "noise must be finite and nonnegative");
  }
  unit_ball_volume(dimension());
}

std::size_t Realization::strongest() const {
  if (log_power.empty()) return 0;
  return static_cast<std::size_t>(std::max_element(log_power.begin(), log_power.end()) -
                                  log_power.begin());
}

double Realization::log_max() const {
  return log_power.empty() ? -kInf : log_power[strongest()];
}

double Realization::log_total() const {
  if (log_power.empty()) return -kInf;
  const double m = log_max();
  double sum = 0.0;
  for (const double lp : log_power) sum += std::exp(lp - m);
  return m + std::log(sum);
}

std::uint64_t sample_count(const NetworkConfig& config, RandomStream& rng) {
  const double mean = config.mean_count();
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> poisson(mean);
  return poisson(rng);
}

Realization sample_realization(const NetworkConfig& config, RandomStream& rng) {
  Realization real;
  const std::uint64_t n = sample_count(config, rng);
  const int d = config.dimension();
  const double r_inf = config.r_inf();
  real.distance.reserve(n);
  real.log_mark.reserve(n);
  real.log_power.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = distance_quantile(d, r_inf, open_uniform(rng));
    const double lm = config.channel.sample_log(rng);
    real.distance.push_back(r);
    real.log_mark.push_back(lm);
    real.log_power.push_back(lm - config.pathloss.log_evaluate(r));
  }
  return real;
}

double sinr_of(const Realization& real, std::size_t i, double noise) {
  if (i >= real.count()) return 0.0;
  const double ref = real.log_power[i];
  double others = 0.0;
  for (std::size_t j = 0; j < real.count(); ++j) {
    if (j != i) others += std::exp(real.log_power[j] - ref);
  }
  const double den = others + noise * std::exp(-ref);
  return den == 0.0 ? kInf : 1.0 / den;
}

double sinr(const Realization& real, double noise) {
  if (real.count() == 0) return 0.0;
  return sinr_of(real, real.strongest(), noise);
}

double nearest_sinr(const Realization& real, double noise) {
  if (real.count() == 0) return 0.0;
  const auto i = static_cast<std::size_t>(
      std::min_element(real.distance.begin(), real.distance.end()) - real.distance.begin());
  return sinr_of(real, i, noise);
}

double TrialOutcome::log_sinr(double noise) const {
  if (empty()) return -kInf;
  const double a = excess > 0.0 ? std::log(excess) : -kInf;
  const double b = noise > 0.0 ? std::log(noise) - log_max : -kInf;
  const double den = log_add(a, b);
  return den == -kInf ? kInf : -den;
}

TrialOutcome summarize(const Realization& real) {
  TrialOutcome out;
  if (real.count() == 0) return out;
  const std::size_t i = real.strongest();
  out.log_max = real.log_power[i];
  for (std::size_t j = 0; j < real.count(); ++j) {
    if (j != i) out.excess += std::exp(real.log_power[j] - out.log_max);
  }
  return out;
}

Simulator::Simulator(SimOptions options) : options_(options) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

const LinkTable& Simulator::table_for(const NetworkConfig& config) {
  if (!table_ || !(table_key_->pathloss == config.pathloss) ||
      !(table_key_->channel == config.channel)) {
    table_ = std::make_unique<LinkTable>(LinkTail(config.pathloss, config.channel, 1e-9));
    table_key_ = std::make_unique<NetworkConfig>(config);
  }
  return *table_;
}

TrialOutcome Simulator::power_domain_trial(const NetworkConfig& config, RandomStream& rng) {
  return power_trial(table_for(config), config, options_.top_count, rng);
}

std::vector<TrialOutcome> Simulator::run(const NetworkConfig& config, std::size_t trials,
                                         std::uint64_t seed) {
  config.validate();
  Engine engine = options_.engine;
  if (engine == Engine::Auto) {
    engine = config.mean_count() <= options_.spatial_max_mean ? Engine::Spatial
                                                              : Engine::PowerDomain;
  }
  const LinkTable* table = engine == Engine::PowerDomain ? &table_for(config) : nullptr;
  const std::size_t top = std::max<std::size_t>(1, options_.top_count);

  std::vector<TrialOutcome> out(trials);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rng = derive_stream(seed, i);
      out[i] = table ? power_trial(*table, config, top, rng) : spatial_trial(config, rng);
    }
  };

  unsigned threads = options_.threads ? options_.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, trials)));
  if (threads == 1) {
    work(0, trials);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (trials + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(trials, t * chunk);
    const std::size_t end = std::min(trials, begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate mean_estimate(std::span<const double> values) {
  Estimate e;
  e.samples = values.size();
  if (values.empty()) return e;
  const double n = static_cast<double>(values.size());
  e.value = pairwise_sum(values) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    std::ranges::transform(values, sq.begin(), [&](double v) { return (v - e.value) * (v - e.value); });
    e.ci95 = 1.96 * std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return e;
}

Estimate coverage_from(std::span<const TrialOutcome> outcomes, double noise, double y_linear) {
  const double log_y = std::log(y_linear);
  std::vector<double> hits(outcomes.size());
  std::ranges::transform(outcomes, hits.begin(), [&](const TrialOutcome& o) {
    return o.log_sinr(noise) >= log_y ? 1.0 : 0.0;
  });
  return mean_estimate(hits);
}

RateEstimate rate_from(std::span<const TrialOutcome> outcomes, double noise) {
  RateEstimate out;
  std::vector<double> rates;
  rates.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    const double ls = o.log_sinr(noise);
    if (ls == kInf) {
      out.diverged = true;
      continue;
    }
    rates.push_back(softplus(ls));
  }
  out.rate = mean_estimate(rates);
  return out;
}

Estimate laplace_from(std::span<const TrialOutcome> outcomes, double noise, double s) {
  std::vector<double> values(outcomes.size());
  std::ranges::transform(outcomes, values.begin(), [&](const TrialOutcome& o) {
    const double ls = o.log_sinr(noise);
    if (ls == kInf) return 1.0;
    if (ls == -kInf) return 0.0;
    return std::exp(-s * std::exp(-ls));
  });
  return mean_estimate(values);
}

RatioSummary ratio_from(std::span<const TrialOutcome> outcomes) {
  RatioSummary out;
  std::vector<double> ratios;
  ratios.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.empty()) {
      ++out.empty_trials;
    } else {
      ratios.push_back(o.max_over_total());
    }
  }
  out.mean = mean_estimate(ratios);
  if (ratios.empty()) return out;
  auto quantile = [&](double q) {
    auto nth = ratios.begin() +
               static_cast<std::ptrdiff_t>(std::floor(q * static_cast<double>(ratios.size() - 1)));
    std::nth_element(ratios.begin(), nth, ratios.end());
    return *nth;
  };
  out.q10 = quantile(0.1);
  out.q50 = quantile(0.5);
  out.q90 = quantile(0.9);
  return out;
}

Estimate estimate_coverage(const NetworkConfig& config, double y_linear, std::size_t trials,
                           std::uint64_t seed, const SimOptions& options) {
  Simulator sim(options);
  const auto outcomes = sim.run(config, trials, seed);
  return coverage_from(outcomes, config.noise, y_linear);
}

RateEstimate estimate_rate(const NetworkConfig& config, std::size_t trials, std::uint64_t seed,
                           const SimOptions& options) {
  Simulator sim(options);
  const auto outcomes = sim.run(config, trials, seed);
  return rate_from(outcomes, config.noise);
}

std::vector<Estimate> estimate_sinr_ccdf(const NetworkConfig& config,
                                         std::span<const double> y_grid_db, std::size_t trials,
                                         std::uint64_t seed, const SimOptions& options) {
  if (y_grid_db.empty()) throw Error(ErrorCode::InvalidArgument, "threshold grid is empty");
  Simulator sim(options);
  const auto outcomes = sim.run(config, trials, seed);
  std::vector<Estimate> out;
  for (const double y : y_grid_db) out.push_back(coverage_from(outcomes, config.noise, db_to_linear(y)));
  return out;
}

RatioSummary estimate_mi_ratio(const NetworkConfig& config, std::size_t trials,
                               std::uint64_t seed, const SimOptions& options) {
  Simulator sim(options);
  const auto outcomes = sim.run(config, trials, seed);
  return ratio_from(outcomes);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

SweepResult sweep(const NetworkConfig& base, std::span<const double> lambda_grid_per_km2,
                  std::span<const double> y_grid_db, std::size_t trials, std::uint64_t seed,
                  Simulator& simulator) {
  SweepResult result;
  result.trials = trials;
  result.seed = seed;
  for (const double lambda : lambda_grid_per_km2) {
    NetworkConfig config = base;
    config.lambda = lambda * 1e-6;
    const auto outcomes = simulator.run(config, trials, seed);
    const RateEstimate rate = rate_from(outcomes, config.noise);
    for (const double y_db : y_grid_db) {
      SweepPoint p;
      p.lambda_per_km2 = lambda;
      p.y_db = y_db;
      p.y_linear = db_to_linear(y_db);
      p.coverage = coverage_from(outcomes, config.noise, p.y_linear);
      p.rate = rate;
      p.coverage_density = lambda * p.coverage.value;
      p.ase = lambda * rate.rate.value;
      result.points.push_back(p);
    }
  }
  return result;
}

SparseCheck monotone_sparse_check(const NetworkConfig& base,
                                  std::span<const double> lambda_grid_per_km2, double y_linear,
                                  std::size_t trials, std::uint64_t seed,
                                  const SimOptions& options) {
  SparseCheck out;
  Simulator sim(options);
  for (const double lambda : lambda_grid_per_km2) {
    NetworkConfig config = base;
    config.lambda = lambda * 1e-6;
    const auto outcomes = sim.run(config, trials, seed);
    out.coverage.push_back(coverage_from(outcomes, config.noise, y_linear));
  }
  for (std::size_t i = 1; i < out.coverage.size(); ++i) {
    const auto& a = out.coverage[i - 1];
    const auto& b = out.coverage[i];
    if (b.value + b.ci95 + a.ci95 < a.value) out.nondecreasing = false;
  }
  return out;
}

}  // namespace udn
