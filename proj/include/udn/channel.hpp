#pragma once

#include <string>
#include <variant>

#include "udn/random.hpp"

namespace udn {

/// Tail behaviour of a distribution at infinity. Only the index is kept;
/// the slowly varying factor of a regularly varying tail is not modelled.
struct TailClass {
  enum class Kind { RegularlyVarying, RapidlyVarying, LighterThanRapid };

  Kind kind = Kind::RapidlyVarying;
  double index = 0.0;       // alpha, meaningful for RegularlyVarying only
  bool borderline = false;  // tail carries an unresolved slowly varying factor

  static TailClass regularly_varying(double alpha, bool borderline = false);
  static TailClass rapidly_varying() { return {Kind::RapidlyVarying, 0.0, false}; }
  static TailClass lighter_than_rapid() { return {Kind::LighterThanRapid, 0.0, false}; }

  /// alpha for regularly varying tails, +inf otherwise.
  double effective_index() const;
  std::string describe() const;

  friend bool operator==(const TailClass&, const TailClass&) = default;
};

namespace channel {

struct Deterministic {
  double value;
};
struct RayleighPower {
  double mean;
};
struct LognormalShadow {
  double sigma_db;
};
struct CompositeRayleighLognormal {
  double sigma_db;
};
struct Pareto {
  double alpha;
  double sigma;
};
struct GammaPower {
  double shape;
  double scale;
};
/// Pareto(0.03, 1) standing in for a slowly varying tail.
struct SlowlyVaryingProxy {};

inline constexpr double kDefaultSigmaDb = 8.0;
inline constexpr double kDefaultParetoScale = 1.0;
inline constexpr double kSlowlyVaryingProxyAlpha = 0.03;

}  // namespace channel

/// Distribution of the channel power mark m (transmit power times fading,
/// shadowing and antenna gains, pathloss excluded).
class ChannelPowerDist {
 public:
  using Variant = std::variant<channel::Deterministic, channel::RayleighPower,
                               channel::LognormalShadow, channel::CompositeRayleighLognormal,
                               channel::Pareto, channel::GammaPower, channel::SlowlyVaryingProxy>;

  static ChannelPowerDist deterministic(double value);
  static ChannelPowerDist rayleigh(double mean = 1.0);
  static ChannelPowerDist lognormal(double sigma_db = channel::kDefaultSigmaDb);
  static ChannelPowerDist composite(double sigma_db = channel::kDefaultSigmaDb);
  static ChannelPowerDist pareto(double alpha, double sigma = channel::kDefaultParetoScale);
  static ChannelPowerDist gamma(double shape, double scale);
  static ChannelPowerDist slowly_varying();

  const Variant& params() const { return params_; }

  double sample(RandomStream& rng) const;
  /// ln m, finite even when m itself would overflow a double.
  double sample_log(RandomStream& rng) const;

  /// P(m > x). Throws NegativeArgument for x < 0.
  double tail(double x) const;
  /// P(m <= x), accurate when small.
  double cdf(double x) const;
  /// tail(e^log_x) without forming e^log_x.
  double tail_at_log(double log_x) const;
  double cdf_at_log(double log_x) const;

  TailClass tail_class() const;

  /// E[m^delta], +inf when divergent.
  double fractional_moment(double delta) const;

  /// True when m has a point mass (the marked link power then has atoms).
  bool has_atom() const;

  std::string describe() const;

  friend bool operator==(const ChannelPowerDist&, const ChannelPowerDist&);

 private:
  explicit ChannelPowerDist(Variant v) : params_(std::move(v)) {}
  Variant params_;
};

/// Natural-log spread of a lognormal factor with the given dB spread.
double sigma_ln_from_db(double sigma_db);

/// E[m^delta] computed as int_0^inf delta x^{delta-1} P(m > x) dx by
/// adaptive quadrature; independent of the closed forms above.
double fractional_moment_by_quadrature(const ChannelPowerDist& dist, double delta);

}  // namespace udn
