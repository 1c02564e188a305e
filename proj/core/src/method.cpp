#include "bacs/method.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "bacs/error.hpp"
#include "bacs/lambda_solver.hpp"
#include "bacs/oracle.hpp"
#include "bacs/predictives.hpp"

namespace bacs {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::empirical: return "empirical";
    case Method::parametric: return "parametric";
    case Method::mdp: return "mdp";
    case Method::betel: return "betel";
    case Method::retel: return "retel";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::empirical, Method::parametric, Method::mdp,
                                           Method::betel,     Method::retel,      Method::oracle};
  return methods;
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  std::string valid;
  for (Method m : all_methods()) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(m);
  }
  throw ConfigError("unknown method '" + std::string(name) + "'; valid methods: " + valid);
}

void MethodSpec::validate() const {
  prior.rho.validate();
  prior.nu.validate();
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be >= 0");
  if (particles_rho < 1 || particles_nu < 1) throw ConfigError("particle counts must be >= 1");
  if (quadrature_nodes < 1) throw ConfigError("quadrature_nodes must be >= 1");
  try {
    etel.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (method == Method::oracle && !law) throw ConfigError("the oracle method needs the true law");
}

PredictiveSource::PredictiveSource(MethodSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.method == Method::betel) spec_.etel.tau = 0.0;
  if (spec_.method == Method::parametric || (spec_.method == Method::mdp && spec_.kappa > 0.0)) {
    posterior_ = BetaPosterior::from_prior_grid(spec_.prior, spec_.particles_rho, spec_.particles_nu);
  }
}

PredictiveDistribution PredictiveSource::current() const {
  switch (spec_.method) {
    case Method::empirical:
      return empirical_predictive(history_);
    case Method::parametric:
      return beta_posterior_predictive(*posterior_, spec_.particle_prune);
    case Method::mdp:
      if (spec_.kappa == 0.0) return empirical_predictive(history_);
      return mdp_predictive(beta_posterior_predictive(*posterior_, spec_.particle_prune), history_,
                            spec_.kappa);
    case Method::betel:
    case Method::retel:
      return etel_predictive(history_, spec_.etel);
    case Method::oracle:
      return spec_.law->as_predictive();
  }
  return PredictiveDistribution::abstain();
}

void PredictiveSource::observe(double x) {
  history_.push(x);
  if (posterior_) posterior_->update(x);
}

std::size_t PredictiveSource::clamp_count() const noexcept {
  return posterior_ ? posterior_->clamp_count() : 0;
}

CsStream::CsStream(MethodSpec spec, BettingConfig config)
    : source_(std::move(spec)), config_(config), ledger_(config.grid_size) {
  config_.validate();
  lambdas_.assign(ledger_.grid.size(), 0.0);
  if (source_.spec().method == Method::oracle) {
    lambdas_ = oracle_lambdas(*source_.spec().law, ledger_.grid, config_.c);
    constant_lambdas_ = true;
  }
}

void CsStream::compute_lambdas() {
  if (constant_lambdas_) return;
  const ScoreMeasure measure = compile(source_.current(), source_.spec().quadrature_nodes);
  const auto points = ledger_.grid.points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    lambdas_[i] =
        solve_lambda(measure, points[i], config_.c, kDefaultLambdaTolerance, lambdas_[i]).lambda;
  }
}

StepReport CsStream::push(double x) {
  compute_lambdas();
  StepReport report = process_observation(ledger_, x, lambdas_, config_);
  source_.observe(x);
  if (report.raw.empty) ++empty_steps_;
  return report;
}

PointTracker::PointTracker(MethodSpec spec, double mu, double c)
    : source_(std::move(spec)), mu_(mu), c_(c) {
  betting_interval(mu, c);
  if (source_.spec().method == Method::oracle) {
    constant_lambda_ = oracle_lambda(*source_.spec().law, mu, c).lambda;
  }
}

void PointTracker::push(double x) {
  if (constant_lambda_) {
    last_lambda_ = *constant_lambda_;
  } else {
    last_lambda_ = solve_lambda(compile(source_.current(), source_.spec().quadrature_nodes), mu_, c_,
                                kDefaultLambdaTolerance, last_lambda_)
                       .lambda;
  }
  log_wealth_ = wealth_step(log_wealth_, last_lambda_, x, mu_);
  source_.observe(x);
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bacs
