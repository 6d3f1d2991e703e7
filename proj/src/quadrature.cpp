#include "udn/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace udn::quad {

Result adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                unsigned max_depth) {
  Result r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, max_depth,
                                                                          rel_tol, &r.error, &l1);
  // Boost reports the error relative to the L1 norm.
  r.error *= l1;
  return r;
}

namespace {

GaussLegendre64 build_gauss_legendre_64() {
  GaussLegendre64 rule{};
  constexpr int n = 64;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);  // positive roots, ascending
  std::size_t i = 0;
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it, ++i) {
    const double x = -*it;
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (const double x : zeros) {
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    ++i;
  }
  return rule;
}

}  // namespace

const GaussLegendre64& gauss_legendre_64() {
  static const GaussLegendre64 rule = build_gauss_legendre_64();
  return rule;
}

}  // namespace udn::quad
