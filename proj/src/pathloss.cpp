#include "udn/pathloss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "udn/error.hpp"

namespace udn {

PathlossModel PathlossModel::build_multislope(double a0, std::vector<double> exponents,
                                              std::vector<double> interior_breakpoints,
                                              double r_inf, int dimension) {
  if (exponents.empty()) {
    throw Error(ErrorCode::InvalidArgument, "at least one pathloss exponent is required");
  }
  if (interior_breakpoints.size() + 1 != exponents.size()) {
    std::ostringstream msg;
    msg << exponents.size() << " exponents need " << exponents.size() - 1
        << " interior breakpoints, got " << interior_breakpoints.size();
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  if (!(a0 > 0.0) || !std::isfinite(a0)) {
    throw Error(ErrorCode::InvalidArgument, "A_0 must be positive and finite");
  }
  if (dimension < 1) {
    throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  }
  if (!std::isfinite(r_inf)) {
    throw Error(ErrorCode::InvalidArgument, "R_inf must be finite");
  }

  PathlossModel model;
  model.dimension_ = dimension;
  model.breakpoints_.reserve(exponents.size() + 1);
  model.breakpoints_.push_back(0.0);
  model.breakpoints_.insert(model.breakpoints_.end(), interior_breakpoints.begin(),
                            interior_breakpoints.end());
  model.breakpoints_.push_back(r_inf);
  for (std::size_t k = 1; k < model.breakpoints_.size(); ++k) {
    if (!(model.breakpoints_[k] > model.breakpoints_[k - 1])) {
      std::ostringstream msg;
      msg << "R_" << k << " = " << model.breakpoints_[k] << " does not exceed R_" << k - 1
          << " = " << model.breakpoints_[k - 1];
      throw Error(ErrorCode::NonIncreasingBreakpoints, msg.str());
    }
  }

  if (!(exponents[0] >= 0.0) || !std::isfinite(exponents[0])) {
    throw Error(ErrorCode::NegativeExponent, "beta_0 must be nonnegative");
  }
  for (std::size_t k = 1; k < exponents.size(); ++k) {
    if (!std::isfinite(exponents[k]) || exponents[k] < dimension - 1) {
      std::ostringstream msg;
      msg << "beta_" << k << " = " << exponents[k] << " is below d - 1 = " << dimension - 1;
      throw Error(ErrorCode::ExponentBelowDimension, msg.str());
    }
  }
  for (std::size_t k = 0; k + 1 < exponents.size(); ++k) {
    if (exponents[k] >= exponents[k + 1]) {
      std::ostringstream msg;
      msg << "beta_" << k << " = " << exponents[k] << " is not below beta_" << k + 1 << " = "
          << exponents[k + 1];
      model.warnings_.push_back("NonIncreasingExponents: " + msg.str());
    }
  }

  model.exponents_ = std::move(exponents);
  model.scales_.resize(model.exponents_.size());
  model.scales_[0] = a0;
  for (std::size_t k = 0; k + 1 < model.exponents_.size(); ++k) {
    const double r = model.breakpoints_[k + 1];
    model.scales_[k + 1] =
        model.scales_[k] * std::pow(r, model.exponents_[k] - model.exponents_[k + 1]);
  }
  return model;
}

PathlossModel PathlossModel::single_slope(double a0, double beta, double r_inf, int dimension) {
  return build_multislope(a0, {beta}, {}, r_inf, dimension);
}

int PathlossModel::segment(double r) const {
  // upper_bound over R_1..R_{K-1}: r == R_k belongs to slope k.
  const auto first = breakpoints_.begin() + 1;
  const auto last = breakpoints_.end() - 1;
  return static_cast<int>(std::upper_bound(first, last, r) - first);
}

double PathlossModel::evaluate(double r) const {
  if (!(r >= 0.0) || r > r_inf()) {
    std::ostringstream msg;
    msg << "r = " << r << " outside [0, " << r_inf() << "]";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  const int k = segment(r);
  if (exponents_[k] == 0.0) return scales_[k];
  return scales_[k] * std::pow(r, exponents_[k]);
}

double PathlossModel::log_evaluate(double r) const {
  if (!(r >= 0.0) || r > r_inf()) {
    std::ostringstream msg;
    msg << "r = " << r << " outside [0, " << r_inf() << "]";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  const int k = segment(r);
  if (exponents_[k] == 0.0) return std::log(scales_[k]);
  return std::log(scales_[k]) + exponents_[k] * std::log(r);
}

double PathlossModel::delta(int k) const {
  const double beta = exponents_.at(static_cast<std::size_t>(k));
  if (beta == 0.0) return std::numeric_limits<double>::infinity();
  return dimension_ / beta;
}

bool operator==(const PathlossModel& a, const PathlossModel& b) {
  return a.dimension() == b.dimension() &&
         std::ranges::equal(a.breakpoints(), b.breakpoints()) &&
         std::ranges::equal(a.exponents(), b.exponents()) &&
         a.scales().front() == b.scales().front();
}

}  // namespace udn
