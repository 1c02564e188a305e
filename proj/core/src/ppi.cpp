#include "bacs/ppi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bacs/error.hpp"

namespace bacs {

void ResidualBounds::validate() const {
  if (!(ell < u) || !std::isfinite(ell) || !std::isfinite(u)) {
    throw ConfigError("residual bounds need ell < u");
  }
}

double plugin_mean(std::span<const double> unlabeled_predictions) {
  if (unlabeled_predictions.empty()) throw DataError("the unlabeled pool is empty");
  double s = 0.0;
  for (double v : unlabeled_predictions) s += v;
  return s / static_cast<double>(unlabeled_predictions.size());
}

double rescale_residual(double r, const ResidualBounds& bounds, long row) {
  bounds.validate();
  if (!(r >= bounds.ell && r <= bounds.u)) {
    throw DataError("residual " + std::to_string(r) + " outside the declared bounds", row);
  }
  return std::clamp((r - bounds.ell) / bounds.span(), 0.0, 1.0);
}

double prior_concentration(double n0, const ResidualBounds& bounds) {
  bounds.validate();
  const double scaled = n0 * bounds.span() * bounds.span() / 4.0;
  if (!(n0 >= 1.0) || !(scaled > 1.0)) {
    throw ConfigError("n0 (u - ell)^2 / 4 must exceed 1 for the prior variance to be attainable");
  }
  return 0.5 * (scaled - 1.0);
}

BetaPrior rectifier_prior(double n0, const ResidualBounds& bounds) {
  bounds.validate();
  if (bounds.ell == -bounds.u) {
    const double xi = prior_concentration(n0, bounds);
    return {xi, xi};
  }
  const double m = -bounds.ell / bounds.span();
  if (!(m > 0.0 && m < 1.0)) throw ConfigError("residual bounds must straddle zero");
  const double var = 1.0 / (n0 * bounds.span() * bounds.span());
  const double total = m * (1.0 - m) / var - 1.0;
  if (!(total > 0.0)) throw ConfigError("prior variance target unattainable for these bounds");
  return {m * total, (1.0 - m) * total};
}

MethodSpec ppi_method(MethodSpec base, double n0, const ResidualBounds& bounds) {
  const BetaPrior prior = rectifier_prior(n0, bounds);
  base.prior.rho = prior;
  base.prior.nu = {7.5, 1.0};
  base.etel.mu_prior = prior;
  return base;
}

ConfidenceInterval to_theta_scale(const ConfidenceInterval& z, double plugin,
                                  const ResidualBounds& bounds) noexcept {
  if (z.empty) return {plugin + bounds.ell, plugin + bounds.ell, true};
  return {plugin + bounds.ell + bounds.span() * z.lower, plugin + bounds.ell + bounds.span() * z.upper,
          false};
}

PpiState::PpiState(const PpiDataset& ds, const PpiConfig& config)
    : plugin_(config.classical ? 0.0 : plugin_mean(ds.unlabeled_predictions)),
      bounds_(ds.residual_bounds),
      classical_(config.classical),
      stream_(config.method, config.betting) {
  bounds_.validate();
}

ConfidenceInterval PpiState::theta_interval() const noexcept {
  return to_theta_scale(stream_.interval(), plugin_, bounds_);
}

StepReport PpiState::step(double y, double fx, long row) {
  const double r = classical_ ? y : y - fx;
  const StepReport z = stream_.push(rescale_residual(r, bounds_, row));
  return {to_theta_scale(z.running, plugin_, bounds_), to_theta_scale(z.raw, plugin_, bounds_)};
}

std::optional<std::size_t> sequential_test_stop_time(const PpiDataset& ds, double null_threshold,
                                                     const PpiConfig& config) {
  PpiState state(ds, config);
  for (std::size_t i = 0; i < ds.labeled_pairs.size(); ++i) {
    const auto& [y, fx] = ds.labeled_pairs[i];
    const auto report = state.step(y, fx, static_cast<long>(i + 1));
    if (!report.running.empty && report.running.lower > null_threshold) return i + 1;
  }
  return std::nullopt;
}

}  // namespace bacs
