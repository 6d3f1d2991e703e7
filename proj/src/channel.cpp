#include "udn/channel.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "udn/error.hpp"
#include "udn/quadrature.hpp"

namespace udn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
  }
}

double normal_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// w solving w + ln w = y, i.e. W0(e^y).
double lambert_w_of_exp(double y) {
  double w = y > 1.0 ? y - std::log(y) : std::exp(y);
  for (int i = 0; i < 60; ++i) {
    const double step = (w + std::log(w) - y) / (1.0 + 1.0 / w);
    const double next = w - step;
    w = next > 0.0 ? next : 0.5 * w;
    if (std::abs(step) <= 1e-15 * std::max(1.0, w)) break;
  }
  return w;
}

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// P(E * e^{sigma Z} > e^{lx}) with E ~ Exp(1), Z ~ N(0,1):
//   int phi(z) exp(-e^{lx - sigma z}) dz.
// The integrand peaks at z* = W(sigma^2 x) / sigma; panels are placed around
// it so that the 64-point rule keeps relative accuracy deep in the tail.
double composite_tail_at_log(double sigma, double lx) {
  const double z_peak = lambert_w_of_exp(lx + 2.0 * std::log(sigma)) / sigma;
  auto f = [&](double z) {
    const double e = lx - sigma * z;
    if (e > 700.0) return 0.0;
    return std_normal_pdf(z) * std::exp(-std::exp(e));
  };
  const double z_lo = std::max(-38.0, (lx - std::log(750.0)) / sigma);
  const double z_hi = z_peak + 10.0;
  double sum = 0.0;
  const double left_mid = std::max(z_lo, z_peak - 3.0);
  if (z_lo < left_mid) sum += quad::gauss64(f, z_lo, left_mid);
  if (left_mid < z_peak) sum += quad::gauss64(f, left_mid, z_peak);
  sum += quad::gauss64(f, z_peak, z_peak + 3.0);
  sum += quad::gauss64(f, z_peak + 3.0, z_hi);
  return sum;
}

// P(E * e^{sigma Z} <= e^{lx}) = int phi(z) (1 - exp(-e^{lx - sigma z})) dz.
double composite_cdf_at_log(double sigma, double lx) {
  const double tail = composite_tail_at_log(sigma, lx);
  if (tail < 0.5) return 1.0 - tail;
  auto f = [&](double z) {
    const double e = lx - sigma * z;
    if (e > 700.0) return std_normal_pdf(z);
    return -std_normal_pdf(z) * std::expm1(-std::exp(e));
  };
  // Small-x mass sits around z = -sigma; the transition is at z = lx / sigma.
  const double c = std::min(-sigma, lx / sigma);
  const double lo = c - 12.0;
  const double hi = std::max(-sigma, lx / sigma) + 12.0;
  double sum = quad::gauss64(f, lo, c - 3.0);
  sum += quad::gauss64(f, c - 3.0, c);
  sum += quad::gauss64(f, c, c + 3.0);
  sum += quad::gauss64(f, c + 3.0, hi);
  return sum;
}

// ln(1 + e^u) without overflow.
double softplus(double u) { return u > 35.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

double pareto_tail_at_log(double alpha, double sigma, double lx) {
  return std::exp(-alpha * softplus(lx - std::log(sigma)));
}

double pareto_cdf_at_log(double alpha, double sigma, double lx) {
  return -std::expm1(-alpha * softplus(lx - std::log(sigma)));
}

double pareto_sample_log(double alpha, double sigma, RandomStream& rng) {
  // m = sigma (U^{-1/alpha} - 1), evaluated in logs.
  const double w = -std::log(open_uniform(rng)) / alpha;
  const double log_expm1 = w > 35.0 ? w + std::log1p(-std::exp(-w)) : std::log(std::expm1(w));
  return std::log(sigma) + log_expm1;
}

double pareto_moment(double alpha, double sigma, double delta) {
  if (delta >= alpha) return kInf;
  return std::pow(sigma, delta) *
         std::exp(std::lgamma(delta + 1.0) + std::lgamma(alpha - delta) - std::lgamma(alpha));
}

}  // namespace

TailClass TailClass::regularly_varying(double alpha, bool borderline) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "regular variation index must be finite and >= 0");
  }
  return {Kind::RegularlyVarying, alpha, borderline};
}

double TailClass::effective_index() const {
  return kind == Kind::RegularlyVarying ? index : kInf;
}

std::string TailClass::describe() const {
  switch (kind) {
    case Kind::RegularlyVarying: {
      std::ostringstream out;
      out << "RegularlyVarying(" << index << ")" << (borderline ? "[borderline]" : "");
      return out.str();
    }
    case Kind::RapidlyVarying: return "RapidlyVarying";
    case Kind::LighterThanRapid: return "LighterThanRapid";
  }
  return "?";
}

double sigma_ln_from_db(double sigma_db) { return sigma_db * std::numbers::ln10 / 20.0; }

ChannelPowerDist ChannelPowerDist::deterministic(double value) {
  require_positive(value, "deterministic channel power");
  return ChannelPowerDist(channel::Deterministic{value});
}

ChannelPowerDist ChannelPowerDist::rayleigh(double mean) {
  require_positive(mean, "Rayleigh mean power");
  return ChannelPowerDist(channel::RayleighPower{mean});
}

ChannelPowerDist ChannelPowerDist::lognormal(double sigma_db) {
  require_positive(sigma_db, "lognormal dB spread");
  return ChannelPowerDist(channel::LognormalShadow{sigma_db});
}

ChannelPowerDist ChannelPowerDist::composite(double sigma_db) {
  require_positive(sigma_db, "composite dB spread");
  return ChannelPowerDist(channel::CompositeRayleighLognormal{sigma_db});
}

ChannelPowerDist ChannelPowerDist::pareto(double alpha, double sigma) {
  require_positive(alpha, "Pareto index");
  require_positive(sigma, "Pareto scale");
  return ChannelPowerDist(channel::Pareto{alpha, sigma});
}

ChannelPowerDist ChannelPowerDist::gamma(double shape, double scale) {
  require_positive(shape, "Gamma shape");
  require_positive(scale, "Gamma scale");
  return ChannelPowerDist(channel::GammaPower{shape, scale});
}

ChannelPowerDist ChannelPowerDist::slowly_varying() {
  return ChannelPowerDist(channel::SlowlyVaryingProxy{});
}

double ChannelPowerDist::sample(RandomStream& rng) const {
  return std::visit(
      overloaded{
          [](const channel::Deterministic& p) { return p.value; },
          [&](const channel::RayleighPower& p) { return -p.mean * std::log(open_uniform(rng)); },
          [&](const auto&) { return std::exp(sample_log(rng)); },
      },
      params_);
}

double ChannelPowerDist::sample_log(RandomStream& rng) const {
  return std::visit(
      overloaded{
          [](const channel::Deterministic& p) { return std::log(p.value); },
          [&](const channel::RayleighPower& p) {
            return std::log(p.mean) + std::log(-std::log(open_uniform(rng)));
          },
          [&](const channel::LognormalShadow& p) {
            std::normal_distribution<double> z;
            return sigma_ln_from_db(p.sigma_db) * z(rng);
          },
          [&](const channel::CompositeRayleighLognormal& p) {
            const double fading = std::log(-std::log(open_uniform(rng)));
            std::normal_distribution<double> z;
            return fading + sigma_ln_from_db(p.sigma_db) * z(rng);
          },
          [&](const channel::Pareto& p) { return pareto_sample_log(p.alpha, p.sigma, rng); },
          [&](const channel::GammaPower& p) {
            std::gamma_distribution<double> g(p.shape, p.scale);
            double v = g(rng);
            while (!(v > 0.0)) v = g(rng);
            return std::log(v);
          },
          [&](const channel::SlowlyVaryingProxy&) {
            return pareto_sample_log(channel::kSlowlyVaryingProxyAlpha, 1.0, rng);
          },
      },
      params_);
}

double ChannelPowerDist::tail(double x) const {
  if (!(x >= 0.0)) throw Error(ErrorCode::NegativeArgument, "tail evaluated at negative power");
  if (x == 0.0) return 1.0;
  return tail_at_log(std::log(x));
}

double ChannelPowerDist::cdf(double x) const {
  if (!(x >= 0.0)) throw Error(ErrorCode::NegativeArgument, "cdf evaluated at negative power");
  if (x == 0.0) return 0.0;
  return cdf_at_log(std::log(x));
}

double ChannelPowerDist::tail_at_log(double lx) const {
  if (lx == -kInf) return 1.0;
  return std::visit(
      overloaded{
          [&](const channel::Deterministic& p) { return lx < std::log(p.value) ? 1.0 : 0.0; },
          [&](const channel::RayleighPower& p) {
            return lx > 710.0 ? 0.0 : std::exp(-std::exp(lx) / p.mean);
          },
          [&](const channel::LognormalShadow& p) {
            return normal_tail(lx / sigma_ln_from_db(p.sigma_db));
          },
          [&](const channel::CompositeRayleighLognormal& p) {
            return composite_tail_at_log(sigma_ln_from_db(p.sigma_db), lx);
          },
          [&](const channel::Pareto& p) { return pareto_tail_at_log(p.alpha, p.sigma, lx); },
          [&](const channel::GammaPower& p) {
            return lx > 710.0 ? 0.0 : boost::math::gamma_q(p.shape, std::exp(lx) / p.scale);
          },
          [&](const channel::SlowlyVaryingProxy&) {
            return pareto_tail_at_log(channel::kSlowlyVaryingProxyAlpha, 1.0, lx);
          },
      },
      params_);
}

double ChannelPowerDist::cdf_at_log(double lx) const {
  if (lx == -kInf) return 0.0;
  return std::visit(
      overloaded{
          [&](const channel::Deterministic& p) { return lx < std::log(p.value) ? 0.0 : 1.0; },
          [&](const channel::RayleighPower& p) {
            return lx > 710.0 ? 1.0 : -std::expm1(-std::exp(lx) / p.mean);
          },
          [&](const channel::LognormalShadow& p) {
            return normal_tail(-lx / sigma_ln_from_db(p.sigma_db));
          },
          [&](const channel::CompositeRayleighLognormal& p) {
            return composite_cdf_at_log(sigma_ln_from_db(p.sigma_db), lx);
          },
          [&](const channel::Pareto& p) { return pareto_cdf_at_log(p.alpha, p.sigma, lx); },
          [&](const channel::GammaPower& p) {
            return lx > 710.0 ? 1.0 : boost::math::gamma_p(p.shape, std::exp(lx) / p.scale);
          },
          [&](const channel::SlowlyVaryingProxy&) {
            return pareto_cdf_at_log(channel::kSlowlyVaryingProxyAlpha, 1.0, lx);
          },
      },
      params_);
}

TailClass ChannelPowerDist::tail_class() const {
  return std::visit(
      overloaded{
          [](const channel::Deterministic&) { return TailClass::lighter_than_rapid(); },
          [](const channel::Pareto& p) { return TailClass::regularly_varying(p.alpha); },
          [](const channel::SlowlyVaryingProxy&) { return TailClass::regularly_varying(0.0); },
          [](const auto&) { return TailClass::rapidly_varying(); },
      },
      params_);
}

double ChannelPowerDist::fractional_moment(double delta) const {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "moment order must be positive");
  return std::visit(
      overloaded{
          [&](const channel::Deterministic& p) { return std::pow(p.value, delta); },
          [&](const channel::RayleighPower& p) {
            return std::pow(p.mean, delta) * std::tgamma(1.0 + delta);
          },
          [&](const channel::LognormalShadow& p) {
            const double s = sigma_ln_from_db(p.sigma_db);
            return std::exp(0.5 * delta * delta * s * s);
          },
          [&](const channel::CompositeRayleighLognormal& p) {
            const double s = sigma_ln_from_db(p.sigma_db);
            return std::tgamma(1.0 + delta) * std::exp(0.5 * delta * delta * s * s);
          },
          [&](const channel::Pareto& p) { return pareto_moment(p.alpha, p.sigma, delta); },
          [&](const channel::GammaPower& p) {
            return std::pow(p.scale, delta) * boost::math::tgamma_ratio(p.shape + delta, p.shape);
          },
          [&](const channel::SlowlyVaryingProxy&) {
            return pareto_moment(channel::kSlowlyVaryingProxyAlpha, 1.0, delta);
          },
      },
      params_);
}

bool ChannelPowerDist::has_atom() const {
  return std::holds_alternative<channel::Deterministic>(params_);
}

std::string ChannelPowerDist::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const channel::Deterministic& p) { out << "Deterministic(" << p.value << ")"; },
                 [&](const channel::RayleighPower& p) { out << "Rayleigh(" << p.mean << ")"; },
                 [&](const channel::LognormalShadow& p) { out << "Lognormal(" << p.sigma_db << "dB)"; },
                 [&](const channel::CompositeRayleighLognormal& p) {
                   out << "Composite(" << p.sigma_db << "dB)";
                 },
                 [&](const channel::Pareto& p) {
                   out << "Pareto(" << p.alpha;
                   if (p.sigma != 1.0) out << "," << p.sigma;
                   out << ")";
                 },
                 [&](const channel::GammaPower& p) {
                   out << "Gamma(" << p.shape << "," << p.scale << ")";
                 },
                 [&](const channel::SlowlyVaryingProxy&) { out << "SlowlyVarying"; },
             },
             params_);
  return out.str();
}

bool operator==(const ChannelPowerDist& a, const ChannelPowerDist& b) {
  return std::visit(
      [](const auto& x, const auto& y) -> bool {
        using X = std::decay_t<decltype(x)>;
        using Y = std::decay_t<decltype(y)>;
        if constexpr (!std::is_same_v<X, Y>) {
          return false;
        } else if constexpr (std::is_same_v<X, channel::SlowlyVaryingProxy>) {
          return true;
        } else if constexpr (std::is_same_v<X, channel::Pareto>) {
          return x.alpha == y.alpha && x.sigma == y.sigma;
        } else if constexpr (std::is_same_v<X, channel::GammaPower>) {
          return x.shape == y.shape && x.scale == y.scale;
        } else if constexpr (std::is_same_v<X, channel::Deterministic>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<X, channel::RayleighPower>) {
          return x.mean == y.mean;
        } else {
          return x.sigma_db == y.sigma_db;
        }
      },
      a.params_, b.params_);
}

double fractional_moment_by_quadrature(const ChannelPowerDist& dist, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "moment order must be positive");
  // E[m^delta] = int delta e^{delta u} P(m > e^u) du over the whole line.
  auto f = [&](double u) { return delta * std::exp(delta * u) * dist.tail_at_log(u); };
  // Below lo the tail is ~1 and the integral is e^{delta lo}.
  const double lo = std::min(-60.0, -40.0 / delta);
  double hi = 60.0;
  while (hi < 1e7 && f(hi) > 1e-30) hi *= 2.0;
  if (f(hi) > 1e-30) return kInf;
  double total = std::exp(delta * lo) * dist.tail_at_log(lo);
  for (double a = lo; a < hi;) {
    const double b = std::min(hi, a + std::max(10.0, 0.5 * std::abs(a)));
    total += quad::adaptive(f, a, b, 1e-12).value;
    a = b;
  }
  return total;
}

}  // namespace udn
