#pragma once

// One-step log-growth maximisation. For a predictive Q and candidate mu the
// betting coefficient maximises E_Q[log(1 + lambda (X - mu))] over I_{mu,c}.
// The objective is concave, so the maximiser is an endpoint or the unique
// root of the score E_Q[(X - mu) / (1 + lambda (X - mu))].

#include "bacs/predictive.hpp"
#include "bacs/wealth.hpp"

namespace bacs {

inline constexpr double kDefaultLambdaTolerance = 1e-10;

struct LambdaSolution {
  double lambda = 0.0;
  bool at_boundary = false;
  double foc_residual = 0.0;  // score at the returned lambda
};

double expected_score(const ScoreMeasure& measure, double lambda, double mu);
double expected_loggrowth(const ScoreMeasure& measure, double lambda, double mu);

double expected_score(const PredictiveDistribution& pred, double lambda, double mu);
double expected_loggrowth(const PredictiveDistribution& pred, double lambda, double mu);

/// Maximiser over I_{mu,c}. The sentinel and all-mass-at-mu predictives yield
/// lambda = 0; an empty predictive throws std::invalid_argument. `guess` only
/// seeds the iteration.
LambdaSolution solve_lambda(const ScoreMeasure& measure, double mu, double c,
                            double tol = kDefaultLambdaTolerance, double guess = 0.0);
LambdaSolution solve_lambda(const PredictiveDistribution& pred, double mu, double c,
                            double tol = kDefaultLambdaTolerance, double guess = 0.0);

}  // namespace bacs
