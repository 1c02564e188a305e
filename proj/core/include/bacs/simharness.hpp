#pragma once

// Repeated-stream experiments: coverage, width and width relative to the
// oracle, per step, aggregated over seeded repetitions.

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "bacs/law.hpp"
#include "bacs/method.hpp"
#include "bacs/wealth.hpp"

namespace bacs {

enum class PriorRegime { informative, noninformative, misspecified, custom };

std::string_view to_string(PriorRegime r) noexcept;
PriorRegime parse_prior_regime(std::string_view name);

struct PriorPreset {
  BetaWorkingPrior working;  // parametric and mdp
  BetaPrior mu_prior;        // betel and retel
};

/// Prior hyperparameters for the synthetic laws. The non-informative regime
/// applies to any law; the other two are defined for Bernoulli(p) (misspecified
/// only for p in {0.1, 0.5}), Beta(0.5,0.5), Beta(1,1), Beta(10,30) and the
/// mixture 0.25 Beta(5,15) + 0.75 Beta(15,5). Gamma priors are shape/rate.
PriorPreset preset_prior(const TrueLaw& law, PriorRegime regime, Method method);

struct Scenario {
  TrueLaw law = TrueLaw::bernoulli(0.5);
  MethodSpec method;
  PriorRegime prior_regime = PriorRegime::noninformative;
  int horizon = 200;
  int repetitions = 100;
  std::uint64_t seed = 0;
  BettingConfig config;
  /// Candidate means whose (1/n) log W_n is averaged. Empty means the grid
  /// point nearest mu* + 0.25 (mu* - 0.25 when that leaves (0,1)).
  std::vector<double> tracked_mu;
  /// Skip the oracle reference run; width_over_oracle is then NaN.
  bool oracle_reference = true;
  unsigned threads = 1;

  void validate() const;
};

struct StepAggregate {
  std::size_t n = 0;
  double mean_width = 0.0;
  double width_over_oracle = 0.0;
  double cum_miscoverage = 0.0;
  double mean_log_growth_rate = 0.0;  // at the first tracked mean
};

struct RunResult {
  std::uint64_t seed = 0;
  int repetitions = 0;
  std::vector<double> tracked_mu;  // grid points actually tracked
  std::vector<StepAggregate> steps;
  /// mean (1/n) log W_n per step (outer) and tracked mean (inner).
  std::vector<std::vector<double>> log_growth;
  /// Repetitions whose running interval was empty at some step.
  std::vector<std::size_t> empty_repetitions;
  /// Per repetition: true when mu* left the running interval at some step.
  std::vector<bool> missed;
};

/// Scenario with preset priors applied (no change for the custom regime).
MethodSpec resolve_method(const Scenario& s);

RunResult run_scenario(const Scenario& s);

/// CSV: a comment line with the seed, then n, mean_width, width_over_oracle,
/// cum_miscoverage, mean_log_growth_rate. Throws IoError with the path.
void export_results(const RunResult& r, const std::filesystem::path& path);
RunResult read_results(const std::filesystem::path& path);

}  // namespace bacs
