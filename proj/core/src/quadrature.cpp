#include "bacs/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace bacs {
namespace {

QuadratureRule build_rule(int points) {
  // Newton iteration on P_n from the Chebyshev-like initial guesses.
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(points));
  rule.weights.resize(static_cast<std::size_t>(points));
  rule.complements.resize(static_cast<std::size_t>(points));
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= points; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = points * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1,1] -> [0,1].
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    rule.nodes[static_cast<std::size_t>(points - 1 - i)] = 0.5 * (1.0 + z);
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    rule.weights[static_cast<std::size_t>(points - 1 - i)] = 0.5 * w;
    rule.complements[static_cast<std::size_t>(i)] = rule.nodes[static_cast<std::size_t>(points - 1 - i)];
    rule.complements[static_cast<std::size_t>(points - 1 - i)] = rule.nodes[static_cast<std::size_t>(i)];
  }
  return rule;
}

QuadratureRule grade(QuadratureRule rule) {
  const double p = kGradingPower;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double u = rule.nodes[j];
    const double v = rule.complements[j];
    const double a = std::pow(u, p);
    const double b = std::pow(v, p);
    const double s = a + b;
    rule.nodes[j] = a / s;
    rule.complements[j] = b / s;
    // d/du [a / (a + b)] = p u^(p-1) (1-u)^(p-1) / s^2
    rule.weights[j] *= p * std::pow(u * v, p - 1.0) / (s * s);
  }
  return rule;
}

const QuadratureRule& cached(int points, bool graded) {
  if (points < 1) throw std::invalid_argument("quadrature needs at least one node");
  static std::mutex mutex;
  static std::map<std::pair<int, bool>, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{points, graded}];
  if (!slot) {
    slot = std::make_unique<QuadratureRule>(graded ? grade(build_rule(points)) : build_rule(points));
  }
  return *slot;
}

}  // namespace

const QuadratureRule& gauss_legendre_unit(int points) { return cached(points, false); }

const QuadratureRule& graded_unit(int points) { return cached(points, true); }

}  // namespace bacs
