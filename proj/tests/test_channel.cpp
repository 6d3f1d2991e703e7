#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "udn/channel.hpp"
#include "udn/error.hpp"
#include "udn/random.hpp"

using udn::ChannelPowerDist;
using udn::TailClass;

namespace {

std::vector<ChannelPowerDist> all_marks() {
  return {ChannelPowerDist::deterministic(2.0), ChannelPowerDist::rayleigh(1.5),
          ChannelPowerDist::lognormal(8.0),     ChannelPowerDist::composite(8.0),
          ChannelPowerDist::pareto(0.5),        ChannelPowerDist::pareto(4.0, 2.0),
          ChannelPowerDist::gamma(2.5, 0.7),    ChannelPowerDist::slowly_varying()};
}

}  // namespace

TEST_CASE("closed-form tails") {
  CHECK(ChannelPowerDist::rayleigh(2.0).tail(3.0) == doctest::Approx(std::exp(-1.5)));
  CHECK(ChannelPowerDist::pareto(0.5).tail(3.0) == doctest::Approx(0.5));
  CHECK(ChannelPowerDist::pareto(2.0, 2.0).tail(2.0) == doctest::Approx(0.25));
  CHECK(ChannelPowerDist::deterministic(2.0).tail(1.999) == 1.0);
  CHECK(ChannelPowerDist::deterministic(2.0).tail(2.0) == 0.0);
  // median of a lognormal factor is 1
  CHECK(ChannelPowerDist::lognormal(8.0).tail(1.0) == doctest::Approx(0.5));
  CHECK(ChannelPowerDist::gamma(1.0, 2.0).tail(3.0) == doctest::Approx(std::exp(-1.5)));
}

TEST_CASE("sigma in dB converts to natural log units") {
  CHECK(udn::sigma_ln_from_db(8.0) == doctest::Approx(8.0 * std::log(10.0) / 20.0));
}

TEST_CASE("tail and cdf are complementary and consistent on the log scale") {
  for (const auto& m : all_marks()) {
    CAPTURE(m.describe());
    for (double x : {1e-6, 1e-2, 0.3, 1.0, 4.0, 50.0, 1e4}) {
      CHECK(m.tail(x) + m.cdf(x) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(m.tail_at_log(std::log(x)) == doctest::Approx(m.tail(x)).epsilon(1e-10));
      CHECK(m.cdf_at_log(std::log(x)) == doctest::Approx(m.cdf(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("tails are nonincreasing") {
  for (const auto& m : all_marks()) {
    CAPTURE(m.describe());
    double prev = 1.0;
    for (double lx = -20.0; lx <= 40.0; lx += 0.25) {
      const double t = m.tail_at_log(lx);
      CHECK(t <= prev);
      CHECK(t >= 0.0);
      prev = t;
    }
  }
}

TEST_CASE("samples follow the tail function") {
  for (const auto& m : all_marks()) {
    if (m.has_atom()) continue;
    CAPTURE(m.describe());
    auto rng = udn::derive_stream(11, 0);
    constexpr int n = 40000;
    std::vector<double> logs(n);
    for (auto& v : logs) v = m.sample_log(rng);
    std::sort(logs.begin(), logs.end());
    for (double q : {0.1, 0.5, 0.9, 0.99}) {
      const double lx = logs[static_cast<std::size_t>(q * n)];
      const double se = std::sqrt(q * (1 - q) / n);
      CHECK(std::abs(m.cdf_at_log(lx) - q) < 5.0 * se + 1e-12);
    }
  }
}

TEST_CASE("sample and sample_log agree") {
  auto a = udn::derive_stream(3, 1);
  auto b = udn::derive_stream(3, 1);
  const auto m = ChannelPowerDist::composite(8.0);
  for (int i = 0; i < 100; ++i) CHECK(std::log(m.sample(a)) == doctest::Approx(m.sample_log(b)));
}

TEST_CASE("slowly varying proxy stays finite on the log scale") {
  auto rng = udn::derive_stream(5, 0);
  const auto m = ChannelPowerDist::slowly_varying();
  for (int i = 0; i < 10000; ++i) CHECK(std::isfinite(m.sample_log(rng)));
}

TEST_CASE("fractional moments match the quadrature oracle") {
  for (const auto& m : all_marks()) {
    if (m.has_atom()) continue;
    for (double delta : {0.02, 0.25, 0.5, 2.0 / 3.0, 1.5}) {
      CAPTURE(m.describe());
      CAPTURE(delta);
      const double closed = m.fractional_moment(delta);
      if (std::isinf(closed)) continue;
      CHECK(udn::fractional_moment_by_quadrature(m, delta) == doctest::Approx(closed).epsilon(1e-7));
    }
  }
  CHECK(std::isinf(ChannelPowerDist::pareto(0.5).fractional_moment(0.5)));
  CHECK(ChannelPowerDist::rayleigh(1.0).fractional_moment(1.0) == doctest::Approx(1.0));
}

TEST_CASE("tail classes") {
  using K = TailClass::Kind;
  CHECK(ChannelPowerDist::pareto(0.5).tail_class().kind == K::RegularlyVarying);
  CHECK(ChannelPowerDist::pareto(0.5).tail_class().index == 0.5);
  CHECK(ChannelPowerDist::slowly_varying().tail_class().index == 0.0);
  CHECK(ChannelPowerDist::composite().tail_class().kind == K::RapidlyVarying);
  CHECK(ChannelPowerDist::rayleigh().tail_class().kind == K::RapidlyVarying);
  CHECK(ChannelPowerDist::deterministic(1.0).tail_class().kind == K::LighterThanRapid);
  CHECK(std::isinf(ChannelPowerDist::rayleigh().tail_class().effective_index()));
  CHECK(ChannelPowerDist::composite().describe() == "Composite(8dB)");
  CHECK(ChannelPowerDist::pareto(0.4).describe() == "Pareto(0.4)");
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(ChannelPowerDist::pareto(0.0), udn::Error);
  CHECK_THROWS_AS(ChannelPowerDist::rayleigh(-1.0), udn::Error);
  CHECK_THROWS_AS(ChannelPowerDist::gamma(1.0, 0.0), udn::Error);
  try {
    ChannelPowerDist::rayleigh().tail(-1.0);
    FAIL("expected NegativeArgument");
  } catch (const udn::Error& e) {
    CHECK(e.code() == udn::ErrorCode::NegativeArgument);
  }
}
