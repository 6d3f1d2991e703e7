#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "udn/error.hpp"
#include "udn/random.hpp"
#include "udn/tail_analysis.hpp"

using udn::ChannelPowerDist;
using udn::LinkTail;
using udn::PathlossModel;
using udn::TailClass;

namespace {

PathlossModel figure_model(double beta0) {
  return PathlossModel::build_multislope(1.0, {beta0, 4.0}, {10.0}, 40000.0, 2);
}

// P(m / r^2 > t) for Pareto(alpha, 1) marks and uniform r in the disc of radius R.
double pareto_square_law_tail(double alpha, double r_inf, double t) {
  const double x = t * r_inf * r_inf;
  return (std::pow(1.0 + x, 1.0 - alpha) - 1.0) / ((1.0 - alpha) * x);
}

}  // namespace

TEST_CASE("distance distribution") {
  CHECK(udn::distance_cdf(2, 100.0, 50.0) == doctest::Approx(0.25));
  CHECK(udn::distance_cdf(3, 100.0, 50.0) == doctest::Approx(0.125));
  CHECK(udn::distance_cdf(2, 100.0, 200.0) == 1.0);
  for (int d = 1; d <= 3; ++d) {
    for (double u : {0.0, 1e-9, 0.3, 0.999, 1.0}) {
      CHECK(udn::distance_cdf(d, 40.0, udn::distance_quantile(d, 40.0, u)) ==
            doctest::Approx(u).epsilon(1e-12));
    }
  }
}

TEST_CASE("link tail classification") {
  using K = TailClass::Kind;
  const auto rv = [](double a) { return TailClass::regularly_varying(a); };
  CHECK(udn::classify_link_tail(3.0, 2, TailClass::rapidly_varying()).index == doctest::Approx(2.0 / 3.0));
  CHECK(udn::classify_link_tail(1.0, 2, TailClass::rapidly_varying()).index == doctest::Approx(2.0));
  CHECK(udn::classify_link_tail(0.0, 2, TailClass::rapidly_varying()).kind == K::RapidlyVarying);
  CHECK(udn::classify_link_tail(0.0, 2, rv(0.5)).index == 0.5);
  CHECK(udn::classify_link_tail(3.0, 2, rv(0.5)).index == 0.5);
  CHECK(udn::classify_link_tail(3.0, 2, rv(4.0)).index == doctest::Approx(2.0 / 3.0));
  CHECK(udn::classify_link_tail(0.0, 2, TailClass::lighter_than_rapid()).kind == K::LighterThanRapid);
  CHECK(udn::classify_link_tail(2.0, 2, TailClass::lighter_than_rapid()).index == 1.0);
  const auto tie = udn::classify_link_tail(4.0, 2, rv(0.5));
  CHECK(tie.index == 0.5);
  CHECK(tie.borderline);
}

TEST_CASE("single-slope Pareto link tail matches the closed form") {
  const auto pl = PathlossModel::single_slope(1.0, 2.0, 50.0, 2);
  for (double alpha : {0.4, 0.5, 1.5}) {
    const LinkTail link(pl, ChannelPowerDist::pareto(alpha));
    for (double t : {1e-6, 1e-3, 0.1, 1.0, 1e3, 1e6}) {
      CAPTURE(alpha);
      CAPTURE(t);
      CHECK(link.received_power_tail(t) ==
            doctest::Approx(pareto_square_law_tail(alpha, 50.0, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("deterministic marks give an exact distance law") {
  const auto pl = PathlossModel::single_slope(1.0, 3.0, 100.0, 2);
  const LinkTail link(pl, ChannelPowerDist::deterministic(1.0));
  for (double t : {1e-5, 1e-3, 1.0, 1e4}) {
    const double r = std::pow(t, -1.0 / 3.0);
    CHECK(link.received_power_tail(t) == doctest::Approx(std::min(1.0, r * r / 1e4)).epsilon(1e-12));
  }
  const LinkTail flat(figure_model(0.0), ChannelPowerDist::deterministic(1.0));
  // l = 1 up to 10 m, then 1e-4 r^4
  const double r_half = 10.0 * std::pow(2.0, 0.25);
  CHECK(flat.received_power_tail(0.5) == doctest::Approx(r_half * r_half / 1.6e9).epsilon(1e-12));
  CHECK(flat.received_power_tail(1.5) == 0.0);
}

TEST_CASE("tail and cdf add to one") {
  const LinkTail link(figure_model(1.0), ChannelPowerDist::composite());
  for (double lt = -40.0; lt <= 10.0; lt += 5.0) {
    CHECK(link.received_power_tail_at_log(lt) + link.received_power_cdf_at_log(lt) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("decomposition equals direct quadrature") {
  for (double beta0 : {0.0, 1.0, 3.0}) {
    for (const auto& m : {ChannelPowerDist::composite(), ChannelPowerDist::pareto(0.5),
                          ChannelPowerDist::rayleigh()}) {
      const LinkTail link(figure_model(beta0), m);
      for (double lt = -30.0; lt <= 20.0; lt += 2.5) {
        const double t = std::exp(lt);
        CAPTURE(beta0);
        CAPTURE(m.describe());
        CAPTURE(t);
        CHECK(std::abs(link.tail_decomposition(t).total() - link.received_power_tail(t)) < 1e-10);
      }
    }
  }
}

TEST_CASE("asymptotic tail is approached") {
  struct Case {
    double beta0;
    ChannelPowerDist mark;
  };
  for (const auto& c : {Case{3.0, ChannelPowerDist::composite()}, Case{0.0, ChannelPowerDist::pareto(0.5)},
                        Case{3.0, ChannelPowerDist::pareto(0.5)}, Case{1.0, ChannelPowerDist::rayleigh()}}) {
    const LinkTail link(figure_model(c.beta0), c.mark);
    const double t = 1e12;
    CAPTURE(c.beta0);
    CAPTURE(c.mark.describe());
    CHECK(link.asymptotic_tail(t) / link.received_power_tail(t) == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("unsupported asymptotic branches") {
  const LinkTail tie(PathlossModel::build_multislope(1.0, {4.0, 5.0}, {10.0}, 1000.0, 2),
                     ChannelPowerDist::pareto(0.5));
  CHECK_THROWS_AS(tie.asymptotic_tail(1e6), udn::Error);
  const LinkTail proxy(figure_model(0.0), ChannelPowerDist::slowly_varying());
  CHECK_THROWS_AS(proxy.asymptotic_tail(1e6), udn::Error);
}

TEST_CASE("Monte Carlo link powers follow the computed tail") {
  const auto pl = figure_model(1.0);
  const auto m = ChannelPowerDist::composite();
  const LinkTail link(pl, m);
  const auto logs = udn::sample_log_link_powers(pl, m, 200000, 17);
  for (double lt : {-25.0, -20.0, -15.0, -10.0}) {
    const double p = link.received_power_tail_at_log(lt);
    const double freq =
        static_cast<double>(std::count_if(logs.begin(), logs.end(), [&](double v) { return v > lt; })) /
        logs.size();
    CHECK(std::abs(freq - p) < 5.0 * std::sqrt(p * (1 - p) / logs.size()) + 1e-6);
  }
}

TEST_CASE("Hill estimator recovers a Pareto index") {
  auto rng = udn::derive_stream(2, 0);
  std::vector<double> logs(200000);
  // exact Pareto: ln X = E / alpha
  for (auto& v : logs) v = -std::log(udn::open_uniform(rng)) / 0.7;
  const auto h = udn::empirical_tail_index_log(logs, 0.01);
  CHECK(h.alpha == doctest::Approx(0.7).epsilon(0.05));
  CHECK(h.order_statistics == 2000);
  const auto diag = udn::tail_index_diagnostic_log(logs);
  CHECK(diag.regularly_varying);
  CHECK_THROWS_AS(udn::empirical_tail_index_log(std::vector<double>{1.0, 2.0}, 0.01), udn::Error);
}

TEST_CASE("Hill drift flags a lognormal sample") {
  auto rng = udn::derive_stream(4, 0);
  std::normal_distribution<double> z(0.0, 2.0);
  std::vector<double> logs(1000000);
  for (auto& v : logs) v = z(rng);
  CHECK_FALSE(udn::tail_index_diagnostic_log(logs).regularly_varying);
}

TEST_CASE("diagnostic CSV") {
  const LinkTail link(figure_model(0.0), ChannelPowerDist::pareto(0.5));
  std::ostringstream out;
  const std::vector<double> grid{1.0, 10.0};
  udn::write_tail_diagnostic_csv(out, link, grid);
  const std::string text = out.str();
  CHECK(text.starts_with("t,exact_tail,decomposition_tail,asymptotic_tail\n"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
