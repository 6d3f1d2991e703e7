#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "udn/channel.hpp"
#include "udn/pathloss.hpp"

namespace udn {

/// CDF of the distance from the origin to a uniform node in the d-ball.
double distance_cdf(int dimension, double r_inf, double r);
/// Inverse of distance_cdf on [0, 1].
double distance_quantile(int dimension, double r_inf, double u);

/// Classification of the received power P = m / l(r) from the near-field
/// exponent and the class of the mark distribution.
TailClass classify_link_tail(double beta0, int dimension, const TailClass& mark);
TailClass classify_link_tail(const PathlossModel& pathloss, const ChannelPowerDist& channel);

/// Split of P(P > t) into the far-edge term P(m > a_K t) plus per-slope
/// contributions J_k(t) for k = first_index..K-1.
struct TailTerms {
  double boundary = 0.0;
  int first_index = 0;
  std::vector<double> terms;

  double total() const;
};

/// Distribution of the power received from a uniformly placed node.
class LinkTail {
 public:
  /// `rel_tol` is the relative tolerance of every adaptive quadrature.
  LinkTail(PathlossModel pathloss, ChannelPowerDist channel, double rel_tol = 1e-12);

  const PathlossModel& pathloss() const { return pathloss_; }
  const ChannelPowerDist& channel() const { return channel_; }

  /// a_0..a_K: l evaluated at the left end of each slope, a_K = l(R_inf).
  std::span<const double> levels() const { return levels_; }
  /// 0 when beta_0 > 0, 1 when the near field is flat.
  int first_term() const { return pathloss_.exponents().front() > 0.0 ? 0 : 1; }
  const TailClass& classification() const { return class_; }

  /// P(P > t) by quadrature over the distance, split at every breakpoint.
  double received_power_tail(double t) const;
  double received_power_tail_at_log(double log_t) const;
  /// P(P <= t), accurate when small.
  double received_power_cdf_at_log(double log_t) const;

  TailTerms tail_decomposition(double t) const;

  /// Large-t closed form matching the link and mark classes.
  double asymptotic_tail(double t) const;

 private:
  double segment_integral(int k, double log_t, bool upper) const;
  double deterministic_tail_at_log(double log_t) const;
  double truncated_moment_term(int k, double log_t) const;

  PathlossModel pathloss_;
  ChannelPowerDist channel_;
  std::vector<double> levels_;
  TailClass class_;
  double rel_tol_ = 1e-12;
  double log_mark_floor_ = 0.0;  // ln x with P(m <= x) ~ 1e-18
};

struct HillEstimate {
  double alpha = 0.0;
  double std_error = 0.0;
  std::size_t order_statistics = 0;
};

/// Hill estimator over the top ceil(top_fraction * n) samples, from the
/// natural logs of positive samples.
HillEstimate empirical_tail_index_log(std::span<const double> log_samples,
                                      double top_fraction = 0.01);
HillEstimate empirical_tail_index(std::span<const double> samples, double top_fraction = 0.01);

/// Hill estimates at top fractions 0.5%, 1% and 2%. A stable index is
/// expected for regularly varying data; a drift that is both large and
/// statistically significant marks the sample as not regularly varying.
struct TailIndexDiagnostic {
  std::array<HillEstimate, 3> estimates;
  double relative_spread = 0.0;
  double drift_z = 0.0;
  bool regularly_varying = true;
};

TailIndexDiagnostic tail_index_diagnostic_log(std::span<const double> log_samples);

/// ln(m_i / l(r_i)) for n independent uniformly placed nodes.
std::vector<double> sample_log_link_powers(const PathlossModel& pathloss,
                                           const ChannelPowerDist& channel, std::size_t n,
                                           std::uint64_t seed);

/// Writes `t,exact_tail,decomposition_tail,asymptotic_tail` rows.
void write_tail_diagnostic_csv(std::ostream& out, const LinkTail& link,
                               std::span<const double> t_grid);

}  // namespace udn
