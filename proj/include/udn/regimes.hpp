#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "udn/channel.hpp"

namespace udn {

enum class RegimeKind { Growth, Saturation, Deficit };
enum class SinrLimit { DivergesInProbability, ConvergesToNondegenerate, ConvergesToZeroAS };
enum class NetworkScaling { LinearFullCoverage, LinearWithConstants, Sublinear };

struct Regime {
  RegimeKind kind = RegimeKind::Deficit;
  SinrLimit sinr_limit = SinrLimit::ConvergesToZeroAS;
  NetworkScaling network_scaling = NetworkScaling::Sublinear;
  bool boundary = false;            // link index exactly 1
  bool dimension_boundary = false;  // beta_0 == d
  bool borderline = false;          // link tail carries an extra slowly varying factor

  friend bool operator==(const Regime&, const Regime&) = default;
};

std::string to_string(RegimeKind kind);
std::string to_string(SinrLimit limit);
std::string to_string(NetworkScaling scaling);
/// "none" or a ';'-joined list of alpha_one, beta0_eq_d, borderline.
std::string boundary_flags(const Regime& regime);

/// Regime from the class of the received power tail.
Regime classify_regime(const TailClass& link_class);
/// classify_link_tail followed by classify_regime.
Regime classify_from_model(double beta0, int dimension, const TailClass& mark_class);

/// phi(s) = alpha int_0^1 (1 - e^{-st}) t^{-alpha-1} dt for alpha in [0, 1).
double laplace_phi(double alpha, double s);
/// Same integral by a power series near 0 plus adaptive quadrature.
double laplace_phi_by_quadrature(double alpha, double s);
/// Limit Laplace transform of 1/sinr, 1 / (1 + phi(s)); 0 for alpha >= 1 and s > 0.
double laplace_Z(double alpha, double s);
double laplace_Z(const TailClass& link_class, double s);

enum class Ordering { FirstDominates, SecondDominates, Equal, Incomparable };
std::string to_string(Ordering ordering);

/// Ordering of E[sinr] and E[log(1 + sinr)] for two equally dense networks
/// with the given link tail classes.
Ordering predict_ordering(const TailClass& first, const TailClass& second);

struct TableOneRow {
  double beta0 = 0.0;
  int dimension = 2;
  std::string mark_name;
  ChannelPowerDist mark = ChannelPowerDist::deterministic(1.0);
  TailClass link_class;
  Regime regime;
};

/// beta_0 in {0, 1, 3}, d = 2, marks Pareto(0.03), Pareto(0.5), Pareto(4),
/// composite, Rayleigh and deterministic.
std::vector<TableOneRow> table_one_rows();

/// `beta0,d,mark_dist,alpha,link_rho,regime,boundary_flags`
void write_regime_csv(std::ostream& out, const std::vector<TableOneRow>& rows);
/// Plain-text grid: one line per mark class, one column per beta_0.
void write_regime_table(std::ostream& out, const std::vector<TableOneRow>& rows);

}  // namespace udn
