#pragma once

#include <span>
#include <string>
#include <vector>

namespace udn {

/// Piecewise power-law attenuation l(r) = A_k r^{beta_k} on [R_k, R_{k+1}).
///
/// Only A_0 is supplied; the remaining scales follow from continuity at each
/// breakpoint, so a constructed model is always continuous. The last slope is
/// closed on the right so that l(R_inf) is defined.
class PathlossModel {
 public:
  /// Builds a K-slope model. `interior_breakpoints` holds R_1..R_{K-1} and
  /// must have exactly `exponents.size() - 1` entries. Throws udn::Error on
  /// invalid input; a non-increasing exponent sequence is accepted and
  /// recorded in warnings().
  static PathlossModel build_multislope(double a0, std::vector<double> exponents,
                                        std::vector<double> interior_breakpoints, double r_inf,
                                        int dimension);

  /// Single-slope singular model l(r) = a0 r^beta on [0, r_inf].
  static PathlossModel single_slope(double a0, double beta, double r_inf, int dimension);

  double evaluate(double r) const;
  /// ln l(r); -inf at r = 0 when beta_0 > 0.
  double log_evaluate(double r) const;

  bool is_bounded() const { return exponents_.front() == 0.0; }
  bool is_physical() const { return is_bounded() && scales_.front() >= 1.0; }

  int slopes() const { return static_cast<int>(exponents_.size()); }
  int dimension() const { return dimension_; }
  double r_inf() const { return breakpoints_.back(); }

  /// R_0..R_K (R_0 = 0, R_K = R_inf).
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> exponents() const { return exponents_; }
  std::span<const double> scales() const { return scales_; }

  /// delta_k = d / beta_k, +inf when beta_k = 0.
  double delta(int k) const;
  /// Index of the slope whose segment contains r.
  int segment(double r) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  PathlossModel() = default;

  std::vector<double> breakpoints_;
  std::vector<double> exponents_;
  std::vector<double> scales_;
  int dimension_ = 2;
  std::vector<std::string> warnings_;
};

bool operator==(const PathlossModel& a, const PathlossModel& b);

}  // namespace udn
