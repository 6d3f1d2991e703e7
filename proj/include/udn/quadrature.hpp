#pragma once

#include <array>
#include <functional>

namespace udn::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive 21-point Gauss-Kronrod on [a, b] (b may be +inf).
Result adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol = 1e-12, unsigned max_depth = 18);

struct GaussLegendre64 {
  std::array<double, 64> nodes;    // on [-1, 1]
  std::array<double, 64> weights;
};

const GaussLegendre64& gauss_legendre_64();

/// 64-point Gauss-Legendre on [a, b].
template <class F>
double gauss64(F&& f, double a, double b) {
  const auto& rule = gauss_legendre_64();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

}  // namespace udn::quad
