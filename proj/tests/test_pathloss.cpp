#include <doctest.h>

#include <cmath>
#include <random>

#include "udn/error.hpp"
#include "udn/pathloss.hpp"

using udn::ErrorCode;
using udn::PathlossModel;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const udn::Error& e) {
    return e.code();
  }
  FAIL("expected udn::Error");
  return ErrorCode::IoError;
}

PathlossModel figure_model(double beta0) {
  return PathlossModel::build_multislope(1.0, {beta0, 4.0}, {10.0}, 40000.0, 2);
}

}  // namespace

TEST_CASE("two-slope model is continuous at the breakpoint") {
  const auto pl = figure_model(3.0);
  CHECK(pl.scales()[1] == doctest::Approx(0.1));
  CHECK(pl.evaluate(10.0) == doctest::Approx(1000.0));
  CHECK(pl.evaluate(std::nextafter(10.0, 0.0)) == doctest::Approx(1000.0));
  CHECK(pl.evaluate(20.0) == doctest::Approx(0.1 * std::pow(20.0, 4.0)));
  CHECK(pl.segment(10.0) == 1);
  CHECK(pl.segment(9.999) == 0);
}

TEST_CASE("bounded near field") {
  const auto pl = figure_model(0.0);
  CHECK(pl.is_bounded());
  CHECK(pl.is_physical());
  CHECK(pl.evaluate(0.0) == 1.0);
  CHECK(pl.evaluate(5.0) == 1.0);
  CHECK(pl.log_evaluate(0.0) == 0.0);
  CHECK(std::isinf(pl.delta(0)));
  CHECK(pl.delta(1) == doctest::Approx(0.5));
}

TEST_CASE("singular model") {
  const auto pl = PathlossModel::single_slope(1.0, 3.0, 100.0, 2);
  CHECK_FALSE(pl.is_bounded());
  CHECK(pl.evaluate(0.0) == 0.0);
  CHECK(std::isinf(pl.log_evaluate(0.0)));
  CHECK(pl.delta(0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("log_evaluate matches evaluate") {
  std::mt19937_64 rng(7);
  for (double beta0 : {0.0, 1.0, 3.0}) {
    const auto pl = PathlossModel::build_multislope(2.0, {beta0, 3.0, 4.5}, {10.0, 300.0}, 5000.0, 2);
    std::uniform_real_distribution<double> u(1e-3, 5000.0);
    for (int i = 0; i < 200; ++i) {
      const double r = u(rng);
      CHECK(pl.log_evaluate(r) == doctest::Approx(std::log(pl.evaluate(r))).epsilon(1e-12));
    }
  }
}

TEST_CASE("pathloss is nondecreasing in distance") {
  const auto pl = PathlossModel::build_multislope(1.0, {1.0, 3.0, 4.0}, {10.0, 200.0}, 40000.0, 2);
  double prev = -1.0;
  for (double r = 0.0; r <= 40000.0; r += 7.3) {
    const double v = pl.evaluate(r);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("invalid models") {
  CHECK(code_of([] { PathlossModel::build_multislope(1.0, {0.0, 4.0}, {}, 100.0, 2); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { PathlossModel::build_multislope(1.0, {0.0, 4.0}, {200.0}, 100.0, 2); }) ==
        ErrorCode::NonIncreasingBreakpoints);
  CHECK(code_of([] { PathlossModel::build_multislope(1.0, {-1.0, 4.0}, {10.0}, 100.0, 2); }) ==
        ErrorCode::NegativeExponent);
  CHECK(code_of([] { PathlossModel::build_multislope(1.0, {0.0, 0.5}, {10.0}, 100.0, 2); }) ==
        ErrorCode::ExponentBelowDimension);
  CHECK(code_of([] { figure_model(3.0).evaluate(50000.0); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([] { figure_model(3.0).evaluate(-1.0); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("non-increasing exponents are accepted with a warning") {
  const auto pl = PathlossModel::build_multislope(1.0, {4.0, 3.0}, {10.0}, 100.0, 2);
  REQUIRE(pl.warnings().size() == 1);
  CHECK(pl.warnings()[0].starts_with("NonIncreasingExponents"));
  CHECK(figure_model(3.0).warnings().empty());
}
