#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "udn/error.hpp"
#include "udn/simulator.hpp"

using udn::ChannelPowerDist;
using udn::Engine;
using udn::NetworkConfig;
using udn::PathlossModel;
using udn::Realization;
using udn::SimOptions;

namespace {

NetworkConfig small_net(double lambda_per_km2, ChannelPowerDist m, double beta0 = 0.0) {
  return NetworkConfig::from_km2(lambda_per_km2, udn::kDefaultNoise,
                                 PathlossModel::build_multislope(1.0, {beta0, 4.0}, {10.0}, 300.0, 2),
                                 std::move(m));
}

Realization hand_made(std::vector<double> powers) {
  Realization r;
  for (double p : powers) {
    r.distance.push_back(1.0);
    r.log_mark.push_back(std::log(p));
    r.log_power.push_back(std::log(p));
  }
  return r;
}

bool separated(const udn::Estimate& a, const udn::Estimate& b, double k = 4.0) {
  return std::abs(a.value - b.value) > k * std::hypot(a.ci95, b.ci95) / 1.96;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(udn::unit_ball_volume(1) == 2.0);
  CHECK(udn::unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(udn::unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
}

TEST_CASE("sinr of a hand-made realization") {
  const auto r = hand_made({1.0, 4.0, 2.0});
  CHECK(r.strongest() == 1);
  CHECK(udn::sinr(r, 1.0) == doctest::Approx(1.0));
  CHECK(udn::sinr_of(r, 2, 1.0) == doctest::Approx(1.0 / 3.0));
  const auto o = udn::summarize(r);
  CHECK(o.log_max == doctest::Approx(std::log(4.0)));
  CHECK(o.excess == doctest::Approx(0.75));
  CHECK(o.log_sinr(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(o.max_over_total() == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("empty and interference-free edge cases") {
  const Realization empty;
  CHECK(udn::sinr(empty, 1.0) == 0.0);
  CHECK(udn::summarize(empty).empty());
  CHECK(std::isinf(udn::sinr(hand_made({2.0}), 0.0)));
  const std::vector<udn::TrialOutcome> outcomes{udn::summarize(hand_made({2.0})),
                                                udn::summarize(hand_made({2.0, 2.0}))};
  const auto rate = udn::rate_from(outcomes, 0.0);
  CHECK(rate.diverged);
  CHECK(rate.rate.samples == 1);
  CHECK(rate.rate.value == doctest::Approx(std::log(2.0)));
}

TEST_CASE("strongest cell dominates nearest cell") {
  const auto config = small_net(1e4, ChannelPowerDist::composite());
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto rng = udn::derive_stream(9, i);
    const auto r = udn::sample_realization(config, rng);
    CHECK(udn::sinr(r, config.noise) >= udn::nearest_sinr(r, config.noise));
  }
}

TEST_CASE("node counts are Poisson") {
  const auto config = small_net(1e3, ChannelPowerDist::rayleigh());
  const double mean = config.mean_count();
  CHECK(mean == doctest::Approx(1e-3 * M_PI * 300.0 * 300.0));
  double sum = 0.0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto rng = udn::derive_stream(1, static_cast<std::uint64_t>(i));
    sum += static_cast<double>(udn::sample_count(config, rng));
  }
  CHECK(std::abs(sum / n - mean) < 5.0 * std::sqrt(mean / n));
}

TEST_CASE("coverage at a vanishing threshold is the probability of a node") {
  const auto config = small_net(10.0, ChannelPowerDist::rayleigh());
  const auto est = udn::estimate_coverage(config, 1e-30, 20000, 3);
  const double exact = -std::expm1(-config.mean_count());
  CHECK(std::abs(est.value - exact) < 4.0 * est.ci95 / 1.96 + 1e-9);
}

TEST_CASE("results do not depend on the thread count") {
  const auto config = small_net(1e4, ChannelPowerDist::composite());
  SimOptions one;
  one.threads = 1;
  SimOptions four;
  four.threads = 4;
  udn::Simulator a(one), b(four);
  const auto x = a.run(config, 3000, 42);
  const auto y = b.run(config, 3000, 42);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].log_max == y[i].log_max);
    CHECK(x[i].excess == y[i].excess);
  }
  const auto z = b.run(config, 3000, 43);
  CHECK(z[0].log_max != x[0].log_max);
}

TEST_CASE("spatial and power-domain engines agree") {
  for (const auto& m : {ChannelPowerDist::composite(), ChannelPowerDist::pareto(0.5),
                        ChannelPowerDist::deterministic(1.0)}) {
    for (double beta0 : {0.0, 3.0}) {
      CAPTURE(m.describe());
      CAPTURE(beta0);
      const auto config = small_net(1e4, m, beta0);  // about 2800 nodes
      SimOptions spatial;
      spatial.engine = Engine::Spatial;
      SimOptions power;
      power.engine = Engine::PowerDomain;
      const auto a = udn::Simulator(spatial).run(config, 6000, 5);
      const auto b = udn::Simulator(power).run(config, 6000, 6);
      for (double y : {0.1, 1.0, 10.0}) {
        CHECK_FALSE(separated(udn::coverage_from(a, config.noise, y), udn::coverage_from(b, config.noise, y)));
      }
      CHECK_FALSE(separated(udn::rate_from(a, config.noise).rate, udn::rate_from(b, config.noise).rate));
      CHECK_FALSE(separated(udn::ratio_from(a).mean, udn::ratio_from(b).mean));
    }
  }
}

TEST_CASE("coverage is nonincreasing in the threshold") {
  const auto config = small_net(1e3, ChannelPowerDist::composite());
  const std::vector<double> grid{-10, -5, 0, 5, 10, 20};
  const auto ccdf = udn::estimate_sinr_ccdf(config, grid, 4000, 8);
  for (std::size_t i = 1; i < ccdf.size(); ++i) CHECK(ccdf[i].value <= ccdf[i - 1].value);
}

TEST_CASE("pairwise sum and estimates") {
  std::vector<double> v(1001);
  std::iota(v.begin(), v.end(), 0.0);
  CHECK(udn::pairwise_sum(v) == 500500.0);
  CHECK(udn::pairwise_sum(std::vector<double>{}) == 0.0);
  const auto e = udn::mean_estimate(std::vector<double>{1.0, 3.0});
  CHECK(e.value == 2.0);
  CHECK(e.ci95 == doctest::Approx(1.96 * std::sqrt(2.0) / std::sqrt(2.0)));
  CHECK(udn::db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(udn::db_to_linear(-3.0) == doctest::Approx(0.501187).epsilon(1e-5));
}

TEST_CASE("laplace and ratio summaries") {
  const std::vector<udn::TrialOutcome> outcomes{udn::summarize(hand_made({4.0, 2.0, 1.0}))};
  // sinr = 4 / 3 with no noise
  CHECK(udn::laplace_from(outcomes, 0.0, 2.0).value == doctest::Approx(std::exp(-1.5)));
  CHECK(udn::ratio_from(outcomes).q50 == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("sweep layout and seed reuse") {
  const auto base = small_net(0.0, ChannelPowerDist::rayleigh());
  udn::Simulator sim;
  const std::vector<double> lambdas{10.0, 100.0};
  const std::vector<double> ys{0.0, 5.0, 10.0};
  const auto result = udn::sweep(base, lambdas, ys, 2000, 4, sim);
  REQUIRE(result.points.size() == 6);
  CHECK(result.at(1, 2, 3).lambda_per_km2 == 100.0);
  CHECK(result.at(1, 2, 3).y_db == 10.0);
  CHECK(result.at(1, 2, 3).coverage_density ==
        doctest::Approx(100.0 * result.at(1, 2, 3).coverage.value));
  const auto again = udn::sweep(base, lambdas, ys, 2000, 4, sim);
  CHECK(again.points[3].coverage.value == result.points[3].coverage.value);
}

TEST_CASE("invalid network") {
  CHECK_THROWS_AS(small_net(-1.0, ChannelPowerDist::rayleigh()), udn::Error);
  auto bad = small_net(1.0, ChannelPowerDist::rayleigh());
  bad.noise = std::nan("");
  CHECK_THROWS_AS(bad.validate(), udn::Error);
  udn::Simulator sim;
  CHECK_THROWS_AS(sim.run(bad, 10, 1), udn::Error);
}
