#pragma once

// Exponentially tilted empirical likelihood on the mean, with an optional
// two-point regulariser H = (delta_0 + delta_1)/2 of weight tau (tau = 0 is
// BETEL, tau > 0 is RETEL).
//
// For a candidate mu0 the tilt gamma solves
//   mu0 = (S1(gamma) + (tau/2) e^gamma) / (S0(gamma) + (tau/2)(1 + e^gamma)),
// S0 = sum e^{gamma X_i}, S1 = sum X_i e^{gamma X_i}. All sums are evaluated
// with the largest exponent factored out.

#include <span>
#include <stdexcept>
#include <vector>

#include "bacs/beta_posterior.hpp"
#include "bacs/history.hpp"
#include "bacs/predictive.hpp"

namespace bacs {

inline constexpr double kDefaultTiltTolerance = 1e-10;

struct EtelConfig {
  double tau = 1.0;
  int grid_size = 1000;
  BetaPrior mu_prior{1.0, 1.0};
  /// Grid points whose log pseudo-posterior falls this far below the running
  /// maximum end the outward scan. Ignored for priors with a shape below one.
  double prune_nats = 60.0;

  void validate() const;
};

struct TiltSolution {
  double gamma = 0.0;
  std::vector<double> sample_weights;  // one per observation, in history order
  double regularizer_weight = 0.0;
  double endpoint_mass_p = 0.5;
  double mu0 = 0.5;
};

/// mu0 outside the open hull of the sample with tau = 0.
class HullViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

TiltSolution etel_tilt_solve(std::span<const double> history, double mu0, const EtelConfig& config,
                             double tol = kDefaultTiltTolerance);

struct PseudoPosteriorPoint {
  double mu0;
  double weight;
  double log_likelihood;  // sum_i log w_i(mu0)
  TiltSolution tilt;
};

struct PseudoPosterior {
  bool abstain = false;
  std::vector<PseudoPosteriorPoint> points;
};

/// Grid used for the pseudo-posterior: midpoints (k - 1/2)/G for tau > 0,
/// G equally spaced points on [min + d, max - d] with d = 1e-9 (max - min)
/// for tau = 0. Empty when the history cannot support a posterior.
std::vector<double> etel_grid(std::span<const double> history, const EtelConfig& config);

/// Full pseudo-posterior over the grid (no pruning). Sentinel when tau = 0 and
/// the hull has empty interior, or tau > 0 and the history is empty.
PseudoPosterior betel_pseudo_posterior(std::span<const double> history, const EtelConfig& config);

/// Mixture of tilted empirical measures over the pseudo-posterior: atoms at the
/// observed values, plus atoms at 0 and 1 when tau > 0.
PredictiveDistribution etel_predictive(std::span<const double> history, const EtelConfig& config);

inline TiltSolution etel_tilt_solve(const History& h, double mu0, const EtelConfig& config,
                                    double tol = kDefaultTiltTolerance) {
  return etel_tilt_solve(h.values(), mu0, config, tol);
}
inline PseudoPosterior betel_pseudo_posterior(const History& h, const EtelConfig& config) {
  return betel_pseudo_posterior(h.values(), config);
}
inline PredictiveDistribution etel_predictive(const History& h, const EtelConfig& config) {
  return etel_predictive(h.values(), config);
}

}  // namespace bacs
