#include "udn/link_table.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "udn/error.hpp"

namespace udn {

namespace {

constexpr double kLowCdf = 1e-9;
constexpr double kLogTailEnd = -70.0;
constexpr std::size_t kMaxNodes = 400000;

double lerp(double x0, double x1, double y0, double y1, double x) {
  if (x1 == x0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

LinkTable::LinkTable(const LinkTail& link) {
  if (link.channel().has_atom()) {
    pathloss_ = link.pathloss();
    log_constant_mark_ =
        std::log(std::get<channel::Deterministic>(link.channel().params()).value);
  }

  auto tails = [&](double lt) {
    const double upper = link.received_power_tail_at_log(lt);
    const double lower = upper > 0.5 ? link.received_power_cdf_at_log(lt) : 1.0 - upper;
    return std::pair{upper, lower};
  };

  double lt = 0.0;
  auto [upper, lower] = tails(lt);
  if (lower >= kLowCdf) {
    while (lower >= kLowCdf) {
      lt -= 2.0;
      std::tie(upper, lower) = tails(lt);
      if (lt < -2000.0) throw Error(ErrorCode::InvalidArgument, "link power grid has no lower end");
    }
  } else {
    while (true) {
      const auto next = tails(lt + 2.0);
      if (next.second >= kLowCdf) break;
      lt += 2.0;
      std::tie(upper, lower) = next;
      if (lt > 2000.0) throw Error(ErrorCode::InvalidArgument, "link power grid has no lower end");
    }
  }

  std::vector<double> cdf;
  double step = 0.01;
  while (true) {
    log_t_.push_back(lt);
    log_tail_.push_back(upper > 0.0 ? std::log(upper) : -std::numeric_limits<double>::infinity());
    cdf.push_back(lower);
    if (log_tail_.back() < kLogTailEnd) break;
    if (log_t_.size() > kMaxNodes) {
      throw Error(ErrorCode::InvalidArgument, "link power grid did not reach the far tail");
    }
    const std::size_t n = log_t_.size();
    if (n >= 2) {
      const double h = log_t_[n - 1] - log_t_[n - 2];
      const double s_upper = std::abs(log_tail_[n - 1] - log_tail_[n - 2]) / h;
      const double s_lower = cdf[n - 2] > 0.0 ? std::abs(std::log(cdf[n - 1] / cdf[n - 2])) / h : 1.0;
      const double slope = std::max({s_upper, s_lower, 1e-6});
      step = std::clamp(0.1 / slope, 0.01, 1.0);
    }
    lt += step;
    std::tie(upper, lower) = tails(lt);
  }

  // Q1 = e^{-l} int F(e^u) e^u du, Q2 = e^{-2l} int F(e^u) e^{2u} du, with F
  // linear in u on each cell.
  const std::size_t n = log_t_.size();
  h1_.resize(n);
  h2_.resize(n);
  double q1 = cdf[0] / 2.0;
  double q2 = cdf[0] / 3.0;
  h1_[0] = std::max(0.0, cdf[0] - q1);
  h2_[0] = std::max(0.0, cdf[0] - 2.0 * q2);
  for (std::size_t i = 1; i < n; ++i) {
    const double h = log_t_[i] - log_t_[i - 1];
    const double e1 = std::exp(-h);
    const double e2 = std::exp(-2.0 * h);
    const double df = cdf[i] - cdf[i - 1];
    q1 = e1 * q1 - cdf[i - 1] * std::expm1(-h) + df * (h + std::expm1(-h)) / h;
    q2 = e2 * q2 - cdf[i - 1] * std::expm1(-2.0 * h) / 2.0 +
         df * (h / 2.0 - 0.25 + e2 / 4.0) / h;
    h1_[i] = std::max(0.0, cdf[i] - q1);
    h2_[i] = std::max(0.0, cdf[i] - 2.0 * q2);
  }
}

double LinkTable::log_quantile_upper(double log_prob) const {
  if (pathloss_) {
    // P > t iff the node is closer than the radius where l(r) = c / t.
    const double u = std::min(1.0, std::exp(log_prob));
    const double r = distance_quantile(pathloss_->dimension(), pathloss_->r_inf(), u);
    return log_constant_mark_ - pathloss_->log_evaluate(r);
  }
  if (log_prob >= log_tail_.front()) return log_t_.front();
  const auto it = std::lower_bound(log_tail_.begin(), log_tail_.end(), log_prob, std::greater<>());
  std::size_t j = static_cast<std::size_t>(it - log_tail_.begin());
  if (j >= log_tail_.size()) j = log_tail_.size() - 1;
  if (j == 0) j = 1;
  const std::size_t i = j - 1;
  if (!std::isfinite(log_tail_[j])) return log_t_[j];
  return lerp(log_tail_[i], log_tail_[j], log_t_[i], log_t_[j], log_prob);
}

LinkTable::Moments LinkTable::truncated_moments(double log_tau) const {
  if (log_tau <= log_t_.front()) return {h1_.front(), h2_.front()};
  if (log_tau >= log_t_.back()) return {h1_.back(), h2_.back()};
  const auto it = std::upper_bound(log_t_.begin(), log_t_.end(), log_tau);
  const std::size_t j = static_cast<std::size_t>(it - log_t_.begin());
  const std::size_t i = j - 1;
  return {lerp(log_t_[i], log_t_[j], h1_[i], h1_[j], log_tau),
          lerp(log_t_[i], log_t_[j], h2_[i], h2_[j], log_tau)};
}

}  // namespace udn
