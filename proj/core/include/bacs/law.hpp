#pragma once

// Known data-generating laws on [0,1].

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bacs/predictive.hpp"

namespace bacs {

using Rng = std::mt19937_64;

class TrueLaw {
 public:
  enum class Kind { bernoulli, beta, beta_mixture, finite_atoms };

  static TrueLaw bernoulli(double p);
  static TrueLaw beta(double a, double b);
  static TrueLaw beta_mixture(std::vector<BetaComponent> components);
  static TrueLaw finite_atoms(std::vector<Atom> atoms);

  Kind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }
  /// Bernoulli success probability; only meaningful for Kind::bernoulli.
  double p() const noexcept { return p_; }
  const std::vector<BetaComponent>& components() const noexcept { return components_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  double sample(Rng& rng) const;
  std::vector<double> sample(Rng& rng, std::size_t n) const;

  /// The law as a predictive, and its compiled 64-node score measure.
  const PredictiveDistribution& as_predictive() const noexcept { return predictive_; }
  const ScoreMeasure& measure() const noexcept { return measure_; }

  /// Short label such as "bernoulli(0.1)" or "beta(10,30)".
  std::string describe() const;

 private:
  TrueLaw() = default;
  void finish();

  Kind kind_ = Kind::bernoulli;
  double p_ = 0.0;
  double mean_ = 0.0;
  std::vector<BetaComponent> components_;
  std::vector<Atom> atoms_;
  PredictiveDistribution predictive_;
  ScoreMeasure measure_;
};

/// Deterministic 64-bit seed for stream `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace bacs
