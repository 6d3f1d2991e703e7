#pragma once

#include <optional>
#include <span>
#include <vector>

#include "udn/pathloss.hpp"
#include "udn/tail_analysis.hpp"

namespace udn {

/// Tabulated distribution of the link power P on a log grid, used to draw the
/// strongest points of a dense Poisson field directly in the power domain.
///
/// The grid runs from P(P <= t) ~ 1e-9 up to P(P > t) ~ e^-70, with a step
/// adapted to the local log-slope of both tails.
class LinkTable {
 public:
  explicit LinkTable(const LinkTail& link);

  std::span<const double> log_t() const { return log_t_; }
  std::span<const double> log_tail() const { return log_tail_; }

  /// ln t such that P(P > t) = e^{log_prob}; log_prob <= 0.
  double log_quantile_upper(double log_prob) const;

  struct Moments {
    double h1 = 0.0;  // E[P 1(P < tau)] / tau
    double h2 = 0.0;  // E[P^2 1(P < tau)] / tau^2
  };
  Moments truncated_moments(double log_tau) const;

 private:
  std::vector<double> log_t_;
  std::vector<double> log_tail_;
  std::vector<double> h1_;
  std::vector<double> h2_;
  // Constant marks: exact quantile through the distance distribution.
  std::optional<PathlossModel> pathloss_;
  double log_constant_mark_ = 0.0;
};

}  // namespace udn
