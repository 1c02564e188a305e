#include "bacs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bacs {

double oracle_growth(const TrueLaw& law, double lambda, double mu) {
  return expected_loggrowth(law.measure(), lambda, mu);
}

LambdaSolution oracle_lambda(const TrueLaw& law, double mu, double c, double tol) {
  return solve_lambda(law.measure(), mu, c, tol);
}

double bernoulli_oracle_lambda(double p, double mu, double c) {
  const auto range = betting_interval(mu, c);
  return std::clamp((p - mu) / (mu * (1.0 - mu)), range.lower, range.upper);
}

std::vector<double> oracle_lambdas(const TrueLaw& law, const CandidateGrid& grid, double c) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double mu : grid.points()) out.push_back(oracle_lambda(law, mu, c).lambda);
  return out;
}

std::vector<StepReport> oracle_cs_stream(const TrueLaw& law, std::span<const double> xs,
                                         const BettingConfig& config) {
  config.validate();
  WealthLedger ledger(config.grid_size);
  const auto lambdas = oracle_lambdas(law, ledger.grid, config.c);
  std::vector<StepReport> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(process_observation(ledger, x, lambdas, config));
  return out;
}

double lipschitz_const(double mu, double c) {
  betting_interval(mu, c);  // validates mu and c
  return c / ((1.0 - c) * std::min(mu, 1.0 - mu));
}

double separation_rate(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("separation t must lie in (0,1]");
  return std::min(-std::log1p(-0.5 * t), 0.5 * t * t);
}

}  // namespace bacs
