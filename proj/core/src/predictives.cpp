#include "bacs/predictives.hpp"

#include <cmath>
#include <stdexcept>

namespace bacs {

void MdpConfig::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be >= 0");
}

std::vector<Atom> empirical_atoms(std::span<const double> history) {
  const auto compressed = CompressedHistory::from(history);
  std::vector<Atom> atoms;
  atoms.reserve(compressed.values.size());
  const double n = static_cast<double>(compressed.n);
  for (std::size_t j = 0; j < compressed.values.size(); ++j) {
    atoms.push_back({compressed.values[j], compressed.counts[j] / n});
  }
  return atoms;
}

PredictiveDistribution empirical_predictive(std::span<const double> history) {
  if (history.size() <= 1) return PredictiveDistribution::abstain();
  return PredictiveDistribution::from_atoms(empirical_atoms(history));
}

PredictiveDistribution mdp_predictive(const PredictiveDistribution& param,
                                      std::span<const double> history, double kappa) {
  MdpConfig{kappa}.validate();
  if (kappa == 0.0) return empirical_predictive(history);
  if (history.empty()) return param;
  const double n = static_cast<double>(history.size());
  return PredictiveDistribution::mix(kappa / (kappa + n), param, n / (kappa + n),
                                     PredictiveDistribution::from_atoms(empirical_atoms(history)));
}

}  // namespace bacs
