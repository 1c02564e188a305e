#pragma once

// Posterior over the beta working model X | rho, nu ~ Beta(rho nu, (1 - rho) nu)
// carried by a weighted particle set. The default particle set is a
// deterministic product grid: on each axis half the nodes are prior quantiles
// and half span a wide fixed range, weighted by prior density x cell width.

#include <cstddef>
#include <memory>
#include <vector>

#include "bacs/predictive.hpp"

namespace bacs {

struct BetaPrior {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
  double mean() const noexcept { return a / (a + b); }
};

struct GammaPrior {
  double shape = 1.5;
  double rate = 1.0;

  void validate() const;
};

struct BetaWorkingPrior {
  BetaPrior rho{1.0, 1.0};
  GammaPrior nu{1.5, 1.0};
};

struct Particle {
  double rho;
  double nu;
  double log_weight;
};

class BetaPosterior {
 public:
  static constexpr double kClampEps = 1e-6;
  /// Fixed part of the default grid: logit(rho) in [-span, span], nu in
  /// [kNuMin, kNuMax] on a log scale.
  static constexpr double kRhoLogitSpan = 7.0;
  static constexpr double kNuMin = 0.05;
  static constexpr double kNuMax = 2000.0;

  /// Product grid of k_rho x k_nu particles (fewer if nodes coincide). Grids
  /// are memoised per (prior, k_rho, k_nu) so repeated streams share one family.
  static BetaPosterior from_prior_grid(const BetaWorkingPrior& prior, int k_rho = 40, int k_nu = 25);

  BetaPosterior(std::vector<Particle> particles, BetaWorkingPrior prior);
  BetaPosterior(std::vector<Particle> particles, BetaWorkingPrior prior,
                std::shared_ptr<const BetaFamily> family);

  /// Multiplies every particle weight by the Beta(rho nu, (1-rho) nu) density
  /// at x. Values are clamped to [eps, 1 - eps]; clamps are counted.
  void update(double x);

  const std::vector<Particle>& particles() const noexcept { return particles_; }
  const BetaWorkingPrior& prior() const noexcept { return prior_; }
  std::size_t clamp_count() const noexcept { return clamp_count_; }
  const std::shared_ptr<const BetaFamily>& family() const noexcept { return family_; }

  std::vector<double> normalized_weights() const;
  double posterior_mean_rho() const;

 private:
  void normalize();

  std::vector<Particle> particles_;
  BetaWorkingPrior prior_;
  std::shared_ptr<const BetaFamily> family_;
  std::size_t clamp_count_ = 0;
};

/// Functional form of BetaPosterior::update.
BetaPosterior beta_posterior_update(BetaPosterior post, double x);

/// Posterior predictive: one Beta(rho nu, (1 - rho) nu) component per particle.
/// Particles with normalised weight below `prune` are dropped and the rest
/// renormalised.
PredictiveDistribution beta_posterior_predictive(const BetaPosterior& post, double prune = 0.0);

}  // namespace bacs
