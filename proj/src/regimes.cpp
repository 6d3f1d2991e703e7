#include "udn/regimes.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "udn/error.hpp"
#include "udn/quadrature.hpp"
#include "udn/tail_analysis.hpp"

namespace udn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// alpha sum_{k>=1} (-1)^{k+1} s^k eps^{k-alpha} / (k! (k - alpha)).
double phi_series(double alpha, double s, double eps) {
  double term = 1.0;  // (s eps)^k / k!
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= s * eps / k;
    const double add = (k % 2 == 1 ? term : -term) / (k - alpha);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return alpha * std::pow(eps, -alpha) * sum;
}

std::string index_text(const TailClass& c) {
  switch (c.kind) {
    case TailClass::Kind::RegularlyVarying: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", c.index);
      return buf;
    }
    case TailClass::Kind::RapidlyVarying: return "inf";
    case TailClass::Kind::LighterThanRapid: return "light";
  }
  return "";
}

}  // namespace

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Growth: return "Growth";
    case RegimeKind::Saturation: return "Saturation";
    case RegimeKind::Deficit: return "Deficit";
  }
  return "";
}

std::string to_string(SinrLimit limit) {
  switch (limit) {
    case SinrLimit::DivergesInProbability: return "DivergesInProbability";
    case SinrLimit::ConvergesToNondegenerate: return "ConvergesToNondegenerate";
    case SinrLimit::ConvergesToZeroAS: return "ConvergesToZeroAS";
  }
  return "";
}

std::string to_string(NetworkScaling scaling) {
  switch (scaling) {
    case NetworkScaling::LinearFullCoverage: return "LinearFullCoverage";
    case NetworkScaling::LinearWithConstants: return "LinearWithConstants";
    case NetworkScaling::Sublinear: return "Sublinear";
  }
  return "";
}

std::string boundary_flags(const Regime& regime) {
  std::string out;
  auto add = [&](const char* flag) {
    if (!out.empty()) out += ';';
    out += flag;
  };
  if (regime.boundary) add("alpha_one");
  if (regime.dimension_boundary) add("beta0_eq_d");
  if (regime.borderline) add("borderline");
  return out.empty() ? "none" : out;
}

Regime classify_regime(const TailClass& link_class) {
  Regime r;
  r.borderline = link_class.borderline;
  const double alpha = link_class.effective_index();
  if (link_class.kind == TailClass::Kind::RegularlyVarying && alpha == 0.0) {
    r.kind = RegimeKind::Growth;
    r.sinr_limit = SinrLimit::DivergesInProbability;
    r.network_scaling = NetworkScaling::LinearFullCoverage;
  } else if (alpha < 1.0) {
    r.kind = RegimeKind::Saturation;
    r.sinr_limit = SinrLimit::ConvergesToNondegenerate;
    r.network_scaling = NetworkScaling::LinearWithConstants;
  } else {
    r.kind = RegimeKind::Deficit;
    r.sinr_limit = SinrLimit::ConvergesToZeroAS;
    r.network_scaling = NetworkScaling::Sublinear;
    r.boundary = alpha == 1.0;
  }
  return r;
}

Regime classify_from_model(double beta0, int dimension, const TailClass& mark_class) {
  Regime r = classify_regime(classify_link_tail(beta0, dimension, mark_class));
  r.dimension_boundary = beta0 == static_cast<double>(dimension);
  return r;
}

double laplace_phi(double alpha, double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::NegativeS, "s must be nonnegative");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "phi is finite only for alpha in [0, 1)");
  }
  if (alpha == 0.0 || s == 0.0) return 0.0;
  if (s <= 2.0) return phi_series(alpha, s, 1.0);
  // Integration by parts: -(1 - e^{-s}) + s^alpha gamma(1 - alpha, s).
  return std::expm1(-s) + std::pow(s, alpha) * boost::math::tgamma_lower(1.0 - alpha, s);
}

double laplace_phi_by_quadrature(double alpha, double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::NegativeS, "s must be nonnegative");
  if (alpha == 0.0 || s == 0.0) return 0.0;
  const double eps = std::min(1.0, 0.5 / s);
  double value = phi_series(alpha, s, eps);
  if (eps < 1.0) {
    auto f = [&](double t) { return -alpha * std::expm1(-s * t) * std::pow(t, -alpha - 1.0); };
    value += quad::adaptive(f, eps, 1.0, 1e-13).value;
  }
  return value;
}

double laplace_Z(double alpha, double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::NegativeS, "s must be nonnegative");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  if (s == 0.0) return 1.0;
  if (alpha >= 1.0) return 0.0;
  return 1.0 / (1.0 + laplace_phi(alpha, s));
}

double laplace_Z(const TailClass& link_class, double s) {
  return laplace_Z(link_class.effective_index(), s);
}

std::string to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::FirstDominates: return "FirstDominates";
    case Ordering::SecondDominates: return "SecondDominates";
    case Ordering::Equal: return "Equal";
    case Ordering::Incomparable: return "Incomparable";
  }
  return "";
}

Ordering predict_ordering(const TailClass& first, const TailClass& second) {
  auto index = [](const TailClass& c) {
    const double a = c.effective_index();
    if (std::isnan(a) || a < 0.0) {
      throw Error(ErrorCode::UnclassifiedInput, "tail class without a valid index");
    }
    return a;
  };
  const double a1 = index(first);
  const double a2 = index(second);
  if (a1 < a2) return Ordering::FirstDominates;
  if (a2 < a1) return Ordering::SecondDominates;
  if (a1 == kInf || first.borderline == second.borderline) return Ordering::Equal;
  return Ordering::Incomparable;
}

std::vector<TableOneRow> table_one_rows() {
  const std::vector<std::pair<std::string, ChannelPowerDist>> marks = {
      {"Pareto(0.03)", ChannelPowerDist::slowly_varying()},
      {"Pareto(0.5)", ChannelPowerDist::pareto(0.5)},
      {"Pareto(4)", ChannelPowerDist::pareto(4.0)},
      {"Composite(8dB)", ChannelPowerDist::composite(8.0)},
      {"Rayleigh(1)", ChannelPowerDist::rayleigh(1.0)},
      {"Deterministic(1)", ChannelPowerDist::deterministic(1.0)},
  };
  std::vector<TableOneRow> rows;
  for (const auto& [name, mark] : marks) {
    for (const double beta0 : {0.0, 1.0, 3.0}) {
      TableOneRow row;
      row.beta0 = beta0;
      row.dimension = 2;
      row.mark_name = name;
      row.mark = mark;
      row.link_class = classify_link_tail(beta0, 2, mark.tail_class());
      row.regime = classify_from_model(beta0, 2, mark.tail_class());
      rows.push_back(row);
    }
  }
  return rows;
}

void write_regime_csv(std::ostream& out, const std::vector<TableOneRow>& rows) {
  out << "beta0,d,mark_dist,alpha,link_rho,regime,boundary_flags\n";
  for (const auto& row : rows) {
    char beta[32];
    std::snprintf(beta, sizeof beta, "%.6g", row.beta0);
    out << beta << ',' << row.dimension << ',' << row.mark_name << ','
        << index_text(row.mark.tail_class()) << ',' << index_text(row.link_class) << ','
        << to_string(row.regime.kind) << ',' << boundary_flags(row.regime) << '\n';
  }
}

void write_regime_table(std::ostream& out, const std::vector<TableOneRow>& rows) {
  std::vector<double> betas;
  for (const auto& row : rows) {
    if (std::find(betas.begin(), betas.end(), row.beta0) == betas.end()) betas.push_back(row.beta0);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-18s", "mark");
  out << buf;
  for (const double b : betas) {
    std::snprintf(buf, sizeof buf, "  beta0=%-12g", b);
    out << buf;
  }
  out << '\n';
  std::string current;
  for (const auto& row : rows) {
    if (row.mark_name != current) {
      if (!current.empty()) out << '\n';
      current = row.mark_name;
      std::snprintf(buf, sizeof buf, "%-18s", current.c_str());
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "  %-18s", to_string(row.regime.kind).c_str());
    out << buf;
  }
  if (!current.empty()) out << '\n';
}

}  // namespace udn
