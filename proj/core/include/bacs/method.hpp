#pragma once

// Binds a predictive construction to the wealth engine.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bacs/beta_posterior.hpp"
#include "bacs/history.hpp"
#include "bacs/law.hpp"
#include "bacs/predictive.hpp"
#include "bacs/tilting.hpp"
#include "bacs/wealth.hpp"

namespace bacs {

enum class Method { empirical, parametric, mdp, betel, retel, oracle };

std::string_view to_string(Method m) noexcept;
/// Throws ConfigError listing the valid names.
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

struct MethodSpec {
  Method method = Method::empirical;
  BetaWorkingPrior prior;  // parametric and mdp
  double kappa = 50.0;     // mdp
  /// betel and retel; tau is forced to 0 for betel. Default tau for retel is 1.
  EtelConfig etel;
  int particles_rho = 40;
  int particles_nu = 25;
  int quadrature_nodes = kDefaultQuadratureNodes;
  /// Particles below this normalised weight are left out of the predictive.
  double particle_prune = 1e-15;
  /// Required for Method::oracle.
  std::optional<TrueLaw> law;

  void validate() const;
};

/// Produces the predictive for the next observation from the history so far.
class PredictiveSource {
 public:
  explicit PredictiveSource(MethodSpec spec);

  const MethodSpec& spec() const noexcept { return spec_; }
  const History& history() const noexcept { return history_; }
  PredictiveDistribution current() const;
  void observe(double x);
  /// Observations clamped away from {0,1} by the beta posterior update.
  std::size_t clamp_count() const noexcept;

 private:
  MethodSpec spec_;
  History history_;
  std::optional<BetaPosterior> posterior_;
};

/// Predictive-assisted confidence sequence over the candidate grid.
class CsStream {
 public:
  CsStream(MethodSpec spec, BettingConfig config);

  /// Bets with coefficients from the predictive on X_1..X_{n-1}, then folds in x.
  StepReport push(double x);

  const WealthLedger& ledger() const noexcept { return ledger_; }
  const BettingConfig& config() const noexcept { return config_; }
  const PredictiveSource& source() const noexcept { return source_; }
  ConfidenceInterval interval() const noexcept { return ledger_.running_interval; }
  std::size_t n() const noexcept { return ledger_.n; }
  /// Coefficients used at the most recent step, one per grid point.
  const std::vector<double>& last_lambdas() const noexcept { return lambdas_; }
  /// Number of steps whose raw interval was empty.
  std::size_t empty_steps() const noexcept { return empty_steps_; }

 private:
  void compute_lambdas();

  PredictiveSource source_;
  BettingConfig config_;
  WealthLedger ledger_;
  std::vector<double> lambdas_;
  bool constant_lambdas_ = false;
  std::size_t empty_steps_ = 0;
};

/// Log-wealth of the predictive-assisted bettor at a single candidate mean.
class PointTracker {
 public:
  PointTracker(MethodSpec spec, double mu, double c);

  void push(double x);
  double log_wealth() const noexcept { return log_wealth_; }
  double mu() const noexcept { return mu_; }
  double last_lambda() const noexcept { return last_lambda_; }
  std::size_t n() const noexcept { return source_.history().size(); }

 private:
  PredictiveSource source_;
  double mu_;
  double c_;
  double log_wealth_ = 0.0;
  double last_lambda_ = 0.0;
  std::optional<double> constant_lambda_;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means the
/// hardware concurrency). Results must be written to per-index slots.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace bacs
