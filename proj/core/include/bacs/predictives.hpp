#pragma once

// Empirical and mixture-DP predictives built from the observation history.

#include <span>

#include "bacs/history.hpp"
#include "bacs/predictive.hpp"

namespace bacs {

struct MdpConfig {
  double kappa = 50.0;

  void validate() const;
};

/// Uniform atoms on the observations, duplicates merged. Fewer than two
/// observations give the sentinel.
PredictiveDistribution empirical_predictive(std::span<const double> history);
inline PredictiveDistribution empirical_predictive(const History& history) {
  return empirical_predictive(history.values());
}

/// Merged uniform atoms with no sentinel rule; empty history gives no atoms.
std::vector<Atom> empirical_atoms(std::span<const double> history);

/// kappa/(kappa+n) * param + n/(kappa+n) * empirical. kappa = 0 returns
/// empirical_predictive(history) unchanged.
PredictiveDistribution mdp_predictive(const PredictiveDistribution& param,
                                      std::span<const double> history, double kappa);
inline PredictiveDistribution mdp_predictive(const PredictiveDistribution& param,
                                             const History& history, double kappa) {
  return mdp_predictive(param, history.values(), kappa);
}

}  // namespace bacs
