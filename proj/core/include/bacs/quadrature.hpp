#pragma once

#include <vector>

namespace bacs {

/// Gauss-Legendre rule mapped to [0,1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> complements;  // 1 - nodes, without cancellation
};

/// Returns the cached `points`-node rule (computed once per point count).
const QuadratureRule& gauss_legendre_unit(int points);

/// Gauss-Legendre pushed through x = u^p / (u^p + (1-u)^p), p = kGradingPower.
/// Nodes crowd both endpoints. Used for beta components with a shape below
/// kGradedShapeThreshold (unbounded or steep endpoint behaviour) or a mean
/// within kGradedMeanMargin of an endpoint; peaked interior components stay
/// on the plain rule.
const QuadratureRule& graded_unit(int points);

inline constexpr int kGradingPower = 3;
inline constexpr double kGradedShapeThreshold = 2.0;
inline constexpr double kGradedMeanMargin = 0.1;

inline constexpr int kDefaultQuadratureNodes = 64;

}  // namespace bacs
