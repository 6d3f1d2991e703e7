#include "udn/tail_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "udn/error.hpp"
#include "udn/quadrature.hpp"
#include "udn/random.hpp"

namespace udn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadratureAbsTol = 1e-9;

// Largest ln x with P(m <= x) below `level`, by bisection.
double log_mark_quantile_low(const ChannelPowerDist& channel, double level) {
  double lo = -800.0, hi = 800.0;
  if (channel.cdf_at_log(lo) >= level) return lo;
  for (int i = 0; i < 200 && hi - lo > 1e-9; ++i) {
    const double mid = 0.5 * (lo + hi);
    (channel.cdf_at_log(mid) < level ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

double distance_cdf(int dimension, double r_inf, double r) {
  if (!(r >= 0.0)) throw Error(ErrorCode::NegativeRadius, "distance must be nonnegative");
  if (r >= r_inf) return 1.0;
  return std::pow(r / r_inf, dimension);
}

double distance_quantile(int dimension, double r_inf, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorCode::InvalidArgument, "u must lie in [0, 1]");
  return r_inf * std::pow(u, 1.0 / dimension);
}

TailClass classify_link_tail(double beta0, int dimension, const TailClass& mark) {
  if (!(beta0 >= 0.0)) throw Error(ErrorCode::NegativeExponent, "beta_0 must be nonnegative");
  const double delta0 = beta0 == 0.0 ? kInf : dimension / beta0;
  if (mark.kind == TailClass::Kind::LighterThanRapid) {
    // Tail-equivalent to P(m > A_0 t) for a flat near field.
    if (beta0 == 0.0) return TailClass::lighter_than_rapid();
    return TailClass::regularly_varying(delta0);
  }
  const double alpha = mark.effective_index();
  const double rho = std::min(delta0, alpha);
  if (rho == kInf) return TailClass::rapidly_varying();
  const bool borderline = (delta0 == alpha) || (alpha <= delta0 && mark.borderline);
  return TailClass::regularly_varying(rho, borderline);
}

TailClass classify_link_tail(const PathlossModel& pathloss, const ChannelPowerDist& channel) {
  return classify_link_tail(pathloss.exponents().front(), pathloss.dimension(),
                            channel.tail_class());
}

double TailTerms::total() const {
  return boundary + std::accumulate(terms.begin(), terms.end(), 0.0);
}

LinkTail::LinkTail(PathlossModel pathloss, ChannelPowerDist channel, double rel_tol)
    : pathloss_(std::move(pathloss)),
      channel_(std::move(channel)),
      class_(classify_link_tail(pathloss_, channel_)),
      rel_tol_(rel_tol) {
  const auto r = pathloss_.breakpoints();
  const auto beta = pathloss_.exponents();
  const auto scale = pathloss_.scales();
  const int slopes = pathloss_.slopes();
  levels_.resize(static_cast<std::size_t>(slopes) + 1);
  levels_[0] = beta[0] > 0.0 ? 0.0 : scale[0];
  for (int k = 1; k < slopes; ++k) levels_[k] = scale[k] * std::pow(r[k], beta[k]);
  levels_[slopes] = scale[slopes - 1] * std::pow(r[slopes], beta[slopes - 1]);
  log_mark_floor_ = log_mark_quantile_low(channel_, 1e-18);
}

double LinkTail::segment_integral(int k, double log_t, bool upper) const {
  const auto r = pathloss_.breakpoints();
  const double beta = pathloss_.exponents()[k];
  const double log_a = std::log(pathloss_.scales()[k]);
  const int d = pathloss_.dimension();
  const double r_inf = pathloss_.r_inf();
  auto mark = [&](double lx) {
    return upper ? channel_.tail_at_log(lx) : channel_.cdf_at_log(lx);
  };

  if (beta == 0.0) {
    const double width = distance_cdf(d, r_inf, r[k + 1]) - distance_cdf(d, r_inf, r[k]);
    return width * mark(log_t + log_a);
  }

  const double w_hi = std::log(r[k + 1]);
  double w_lo;
  if (k > 0) {
    w_lo = std::log(r[k]);
  } else {
    // Below w_lo the mark factor is flat; its G-mass is negligible there.
    const double w_flat = (log_mark_floor_ - log_t - log_a) / beta;
    w_lo = std::min(w_hi, w_flat) - (upper ? 40.0 : 60.0) / d;
  }
  const double log_r_inf = std::log(r_inf);
  auto f = [&](double w) {
    return d * std::exp(d * (w - log_r_inf)) * mark(log_t + log_a + beta * w);
  };

  // Split at the mark transition so the adaptive rule sees one feature per piece.
  const double w_mid = (log_mark_floor_ + 18.0 - log_t - log_a) / beta;
  double value = 0.0, error = 0.0;
  auto add = [&](double a, double b) {
    if (!(b > a)) return;
    const auto res = quad::adaptive(f, a, b, rel_tol_);
    value += res.value;
    error += res.error;
  };
  if (w_mid > w_lo && w_mid < w_hi) {
    add(w_lo, w_mid);
    add(w_mid, w_hi);
  } else {
    add(w_lo, w_hi);
  }
  if (error > kQuadratureAbsTol) {
    std::ostringstream msg;
    msg << "slope " << k << " at ln t = " << log_t << ": achieved error bound " << error;
    throw Error(ErrorCode::QuadratureFailure, msg.str());
  }
  return value;
}

double LinkTail::deterministic_tail_at_log(double log_t) const {
  // P(c / l(r) > t) = G-measure of {r : l(r) < c / t}; l is increasing on each slope.
  const auto& det = std::get<channel::Deterministic>(channel_.params());
  const double log_level = std::log(det.value) - log_t;
  const auto r = pathloss_.breakpoints();
  const int d = pathloss_.dimension();
  const double r_inf = pathloss_.r_inf();
  double measure = 0.0;
  for (int k = 0; k < pathloss_.slopes(); ++k) {
    const double beta = pathloss_.exponents()[k];
    const double log_a = std::log(pathloss_.scales()[k]);
    double r_cross;
    if (beta == 0.0) {
      r_cross = log_a < log_level ? r[k + 1] : r[k];
    } else {
      r_cross = std::clamp(std::exp((log_level - log_a) / beta), r[k], r[k + 1]);
    }
    measure += distance_cdf(d, r_inf, r_cross) - distance_cdf(d, r_inf, r[k]);
  }
  return measure;
}

double LinkTail::received_power_tail(double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  return received_power_tail_at_log(std::log(t));
}

double LinkTail::received_power_tail_at_log(double log_t) const {
  if (channel_.has_atom()) return deterministic_tail_at_log(log_t);
  double total = 0.0;
  for (int k = 0; k < pathloss_.slopes(); ++k) total += segment_integral(k, log_t, true);
  return std::min(total, 1.0);
}

double LinkTail::received_power_cdf_at_log(double log_t) const {
  if (channel_.has_atom()) return 1.0 - deterministic_tail_at_log(log_t);
  double total = 0.0;
  for (int k = 0; k < pathloss_.slopes(); ++k) total += segment_integral(k, log_t, false);
  return std::min(total, 1.0);
}

double LinkTail::truncated_moment_term(int k, double log_t) const {
  // J_k(t) = E[m^delta 1(a_k t <= m < a_{k+1} t)] t^{-delta} / (A_k^delta R^d)
  // with delta = d / beta_k. Integration by parts against the tail:
  //   E[m^delta 1(a <= m < b)] = a^delta F(a) - b^delta F(b) + int_a^b delta x^{delta-1} F(x) dx.
  const double delta = pathloss_.delta(k);
  const double log_a = std::log(pathloss_.scales()[k]);
  const double log_r_inf = std::log(pathloss_.r_inf());
  const double lo_level = levels_[k];
  const double hi_level = levels_[k + 1];

  if (channel_.has_atom()) {
    const double c = std::get<channel::Deterministic>(channel_.params()).value;
    const double log_c = std::log(c);
    const bool inside = (lo_level == 0.0 || log_c >= std::log(lo_level) + log_t) &&
                        log_c < std::log(hi_level) + log_t;
    if (!inside) return 0.0;
    return std::exp(delta * (log_c - log_t - log_a) - pathloss_.dimension() * log_r_inf);
  }

  const int d = pathloss_.dimension();
  const double g_lo = distance_cdf(d, pathloss_.r_inf(), pathloss_.breakpoints()[k]);
  const double g_hi = distance_cdf(d, pathloss_.r_inf(), pathloss_.breakpoints()[k + 1]);
  double value = -g_hi * channel_.tail_at_log(std::log(hi_level) + log_t);
  double u_lo;
  if (lo_level > 0.0) {
    value += g_lo * channel_.tail_at_log(std::log(lo_level) + log_t);
    u_lo = std::log(lo_level);
  } else {
    u_lo = std::min(std::log(hi_level), log_mark_floor_ - log_t) - 40.0 / delta;
  }
  const double u_hi = std::log(hi_level);
  auto f = [&](double u) {
    return delta * std::exp(delta * (u - log_a) - d * log_r_inf) * channel_.tail_at_log(u + log_t);
  };
  const double u_mid = log_mark_floor_ + 18.0 - log_t;
  double error = 0.0;
  auto add = [&](double a, double b) {
    if (!(b > a)) return;
    const auto res = quad::adaptive(f, a, b, rel_tol_);
    value += res.value;
    error += res.error;
  };
  if (u_mid > u_lo && u_mid < u_hi) {
    add(u_lo, u_mid);
    add(u_mid, u_hi);
  } else {
    add(u_lo, u_hi);
  }
  if (error > kQuadratureAbsTol) {
    std::ostringstream msg;
    msg << "truncated moment of slope " << k << ": achieved error bound " << error;
    throw Error(ErrorCode::QuadratureFailure, msg.str());
  }
  return value;
}

TailTerms LinkTail::tail_decomposition(double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  const double log_t = std::log(t);
  const auto beta = pathloss_.exponents();
  for (int k = 1; k < pathloss_.slopes(); ++k) {
    if (beta[k] == 0.0) {
      throw Error(ErrorCode::UnsupportedBranch, "flat slope beyond the near field");
    }
  }
  TailTerms out;
  out.first_index = first_term();
  out.boundary = channel_.tail_at_log(std::log(levels_.back()) + log_t);
  for (int k = out.first_index; k < pathloss_.slopes(); ++k) {
    out.terms.push_back(truncated_moment_term(k, log_t));
  }
  return out;
}

double LinkTail::asymptotic_tail(double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  const auto beta = pathloss_.exponents();
  const auto scale = pathloss_.scales();
  const int d = pathloss_.dimension();
  const double r_inf = pathloss_.r_inf();
  const double delta0 = pathloss_.delta(0);
  const TailClass mark = channel_.tail_class();
  const double r_inf_d = std::pow(r_inf, d);

  // Near-field moment term E(m^delta_0) A_0^{-delta_0} R^{-d} t^{-delta_0}.
  auto near_field_term = [&] {
    return channel_.fractional_moment(delta0) * std::pow(scale[0] * t, -delta0) / r_inf_d;
  };

  if (mark.kind != TailClass::Kind::RegularlyVarying) {
    if (beta[0] > 0.0) return near_field_term();
    const double r1 = pathloss_.slopes() > 1 ? pathloss_.breakpoints()[1] : r_inf;
    return distance_cdf(d, r_inf, r1) * channel_.tail(scale[0] * t);
  }

  const auto* pareto = std::get_if<channel::Pareto>(&channel_.params());
  if (pareto == nullptr) {
    throw Error(ErrorCode::UnsupportedBranch,
                "no closed-form asymptote for " + channel_.describe() + " marks");
  }
  const double alpha = pareto->alpha;
  const double slowly_varying = std::pow(pareto->sigma, alpha);  // L(t) for Pareto

  auto c_term = [&](int k) {
    const double dk = pathloss_.delta(k);
    const double lo = levels_[k];
    const double hi = levels_[k + 1];
    const double norm = std::pow(scale[k], dk) * r_inf_d;
    if (dk == alpha) return alpha * std::log(hi / lo) / norm;
    const double lo_pow = lo > 0.0 ? std::pow(lo, dk - alpha) : 0.0;
    return alpha * (std::pow(hi, dk - alpha) - lo_pow) / ((dk - alpha) * norm);
  };

  double coefficient = std::pow(levels_.back(), -alpha);
  for (int k = 1; k < pathloss_.slopes(); ++k) coefficient += c_term(k);
  const double pareto_part = coefficient * slowly_varying * std::pow(t, -alpha);

  if (beta[0] == 0.0) return pareto_part;
  if (delta0 > alpha) return pareto_part + c_term(0) * slowly_varying * std::pow(t, -alpha);
  if (delta0 < alpha) return pareto_part + near_field_term();
  throw Error(ErrorCode::UnsupportedBranch,
              "delta_0 equals the mark index; the near-field term carries a log factor");
}

HillEstimate empirical_tail_index_log(std::span<const double> log_samples, double top_fraction) {
  if (log_samples.size() < 10000) {
    throw Error(ErrorCode::TooFewSamples, "Hill estimator needs at least 1e4 samples");
  }
  if (!(top_fraction > 0.0 && top_fraction <= 0.05)) {
    throw Error(ErrorCode::InvalidArgument, "top fraction must lie in (0, 0.05]");
  }
  const auto n = log_samples.size();
  const auto k = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(n)));
  std::vector<double> sorted(log_samples.begin(), log_samples.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end(),
                   std::greater<>());
  const double threshold = sorted[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += sorted[i] - threshold;
  HillEstimate out;
  out.order_statistics = k;
  out.alpha = static_cast<double>(k) / sum;
  out.std_error = out.alpha / std::sqrt(static_cast<double>(k));
  return out;
}

HillEstimate empirical_tail_index(std::span<const double> samples, double top_fraction) {
  std::vector<double> logs(samples.size());
  std::ranges::transform(samples, logs.begin(), [](double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "Hill samples must be positive");
    return std::log(x);
  });
  return empirical_tail_index_log(logs, top_fraction);
}

TailIndexDiagnostic tail_index_diagnostic_log(std::span<const double> log_samples) {
  TailIndexDiagnostic out;
  constexpr std::array<double, 3> fractions{0.005, 0.01, 0.02};
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    out.estimates[i] = empirical_tail_index_log(log_samples, fractions[i]);
  }
  const auto [lo, hi] = std::ranges::minmax(out.estimates, {}, &HillEstimate::alpha);
  out.relative_spread = (hi.alpha - lo.alpha) / lo.alpha;
  const auto& a = out.estimates.front();
  const auto& b = out.estimates.back();
  out.drift_z = std::abs(a.alpha - b.alpha) / std::hypot(a.std_error, b.std_error);
  out.regularly_varying = !(out.relative_spread > 0.15 && out.drift_z > 4.0);
  return out;
}

std::vector<double> sample_log_link_powers(const PathlossModel& pathloss,
                                           const ChannelPowerDist& channel, std::size_t n,
                                           std::uint64_t seed) {
  std::vector<double> out(n);
  auto rng = derive_stream(seed, 0);
  const int d = pathloss.dimension();
  const double r_inf = pathloss.r_inf();
  for (auto& v : out) {
    const double r = distance_quantile(d, r_inf, open_uniform(rng));
    v = channel.sample_log(rng) - pathloss.log_evaluate(r);
  }
  return out;
}

void write_tail_diagnostic_csv(std::ostream& out, const LinkTail& link,
                               std::span<const double> t_grid) {
  out << "t,exact_tail,decomposition_tail,asymptotic_tail\n";
  char buf[128];
  for (const double t : t_grid) {
    const double exact = link.received_power_tail(t);
    const double decomposition = link.tail_decomposition(t).total();
    double asymptotic = std::numeric_limits<double>::quiet_NaN();
    try {
      asymptotic = link.asymptotic_tail(t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedBranch) throw;
    }
    std::snprintf(buf, sizeof buf, "%.11e,%.11e,%.11e,%.11e\n", t, exact, decomposition,
                  asymptotic);
    out << buf;
  }
}

}  // namespace udn
