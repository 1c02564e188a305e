#pragma once

// Prediction-powered inference for a bounded mean. theta = m + Delta, where
// m = E f(X) is estimated by the unlabeled plug-in mean and treated as fixed,
// and the rectifier Delta = E[Y - f(X)] is covered by a bounded-mean
// confidence sequence on the rescaled residual Z = (R - ell) / (u - ell).

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bacs/beta_posterior.hpp"
#include "bacs/method.hpp"
#include "bacs/wealth.hpp"

namespace bacs {

struct ResidualBounds {
  double ell = -1.0;
  double u = 1.0;

  void validate() const;
  double span() const noexcept { return u - ell; }
};

struct PpiDataset {
  std::vector<double> unlabeled_predictions;
  std::vector<std::pair<double, double>> labeled_pairs;  // (y, f(x))
  ResidualBounds residual_bounds;
};

double plugin_mean(std::span<const double> unlabeled_predictions);

/// (r - ell) / (u - ell). `row` is reported when r escapes the bounds.
double rescale_residual(double r, const ResidualBounds& bounds, long row = -1);

/// xi(n0) = (n0 (u - ell)^2 / 4 - 1) / 2.
double prior_concentration(double n0, const ResidualBounds& bounds);

/// Beta prior on the rescaled rectifier centred at a zero residual, with
/// variance 1 / (n0 (u - ell)^2). Beta(xi, xi) for symmetric bounds.
BetaPrior rectifier_prior(double n0, const ResidualBounds& bounds);

/// Method spec with the rectifier prior and nu ~ Gamma(7.5, 1) applied.
MethodSpec ppi_method(MethodSpec base, double n0, const ResidualBounds& bounds);

/// z -> plugin + ell + (u - ell) z, applied to both ends.
ConfidenceInterval to_theta_scale(const ConfidenceInterval& z, double plugin,
                                  const ResidualBounds& bounds) noexcept;

struct PpiConfig {
  double n0 = 1000.0;
  BettingConfig betting;
  MethodSpec method;
  /// Feed y directly (no predictions); bounds are then bounds on y and the
  /// plug-in mean is 0.
  bool classical = false;
};

class PpiState {
 public:
  PpiState(const PpiDataset& ds, const PpiConfig& config);

  double plugin() const noexcept { return plugin_; }
  const ResidualBounds& bounds() const noexcept { return bounds_; }
  const CsStream& stream() const noexcept { return stream_; }
  ConfidenceInterval z_interval() const noexcept { return stream_.interval(); }
  ConfidenceInterval theta_interval() const noexcept;

  /// Feeds one labeled pair. Returns the running and raw intervals on the
  /// theta scale.
  StepReport step(double y, double fx, long row = -1);

 private:
  double plugin_;
  ResidualBounds bounds_;
  bool classical_;
  CsStream stream_;
};

/// The theta-scale report for one labeled pair.
inline StepReport ppi_cs_step(PpiState& state, std::pair<double, double> pair, long row = -1) {
  return state.step(pair.first, pair.second, row);
}

/// First n (1-based) at which the running theta interval lies strictly above
/// the threshold; an empty interval does not count.
std::optional<std::size_t> sequential_test_stop_time(const PpiDataset& ds, double null_threshold,
                                                     const PpiConfig& config);

}  // namespace bacs
