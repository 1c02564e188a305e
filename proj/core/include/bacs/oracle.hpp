#pragma once

// Known-law baselines: expected log-growth M(lambda, mu), the oracle
// coefficient lambda*(mu), the oracle confidence sequence, and a few
// constants used by the diagnostics.

#include <span>
#include <vector>

#include "bacs/lambda_solver.hpp"
#include "bacs/law.hpp"
#include "bacs/wealth.hpp"

namespace bacs {

inline constexpr double kOracleLambdaTolerance = 1e-13;

/// E[log(1 + lambda (X - mu))] under the law.
double oracle_growth(const TrueLaw& law, double lambda, double mu);

LambdaSolution oracle_lambda(const TrueLaw& law, double mu, double c,
                             double tol = kOracleLambdaTolerance);

/// clip((p - mu) / (mu (1 - mu)), I_{mu,c}).
double bernoulli_oracle_lambda(double p, double mu, double c);

/// oracle_lambda at every point of the candidate grid.
std::vector<double> oracle_lambdas(const TrueLaw& law, const CandidateGrid& grid, double c);

/// Running intervals of the engine driven by the constant oracle coefficients.
std::vector<StepReport> oracle_cs_stream(const TrueLaw& law, std::span<const double> xs,
                                         const BettingConfig& config);

/// c / ((1 - c) min(mu, 1 - mu)).
double lipschitz_const(double mu, double c);

/// min(-log(1 - t/2), t^2 / 2) for t in (0, 1].
double separation_rate(double t);

}  // namespace bacs
