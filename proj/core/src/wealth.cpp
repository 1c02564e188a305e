#include "bacs/wealth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bacs {

void BettingConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("truncation c must lie in (0,1)");
  }
  if (grid_size < 2) {
    throw std::invalid_argument("grid_size must be at least 2");
  }
}

ClosedInterval betting_interval(double mu, double c) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw std::invalid_argument("candidate mean must lie in (0,1)");
  }
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("truncation c must lie in (0,1)");
  }
  return {-c / (1.0 - mu), c / mu};
}

bool ConfidenceInterval::subset_of(const ConfidenceInterval& other) const noexcept {
  if (empty) return true;
  if (other.empty) return false;
  return other.lower <= lower && upper <= other.upper;
}

ConfidenceInterval intersect(const ConfidenceInterval& a, const ConfidenceInterval& b) noexcept {
  if (a.empty || b.empty) return ConfidenceInterval::none();
  const double lo = std::max(a.lower, b.lower);
  const double hi = std::min(a.upper, b.upper);
  if (lo > hi) return ConfidenceInterval::none();
  return {lo, hi, false};
}

CandidateGrid::CandidateGrid(int grid_size) : grid_size_(grid_size) {
  if (grid_size < 2) {
    throw std::invalid_argument("grid_size must be at least 2");
  }
  points_.reserve(static_cast<std::size_t>(grid_size - 1));
  for (int i = 1; i < grid_size; ++i) {
    points_.push_back(static_cast<double>(i) / grid_size);
  }
}

std::size_t CandidateGrid::nearest_index(double mu) const {
  const double pos = mu * grid_size_ - 1.0;
  const double clamped = std::clamp(pos, 0.0, static_cast<double>(points_.size() - 1));
  auto idx = static_cast<std::size_t>(std::floor(clamped));
  if (idx + 1 < points_.size() && std::abs(points_[idx + 1] - mu) < std::abs(points_[idx] - mu)) {
    ++idx;
  }
  return idx;
}

double wealth_step(double log_w, double lambda, double x, double mu) {
  const double increment = lambda * (x - mu);
  if (!(1.0 + increment > 0.0)) {
    std::ostringstream os;
    os << "nonpositive wealth factor 1 + " << lambda << " * (" << x << " - " << mu << ")";
    throw InfeasibleBet(os.str());
  }
  return log_w + std::log1p(increment);
}

WealthLedger::WealthLedger(int grid_size)
    : grid(grid_size), log_wealth(grid.size(), 0.0) {}

ConfidenceInterval invert_grid(const WealthLedger& ledger, double alpha) {
  const double threshold = std::log(1.0 / alpha);
  const auto& lw = ledger.log_wealth;
  std::size_t first = lw.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    if (lw[i] <= threshold) {
      if (first == lw.size()) first = i;
      last = i;
    }
  }
  if (first == lw.size()) return ConfidenceInterval::none();
  const double step = ledger.grid.step();
  return {std::max(0.0, ledger.grid[first] - step), std::min(1.0, ledger.grid[last] + step), false};
}

ConfidenceInterval running_intersect(WealthLedger& ledger, const ConfidenceInterval& next) {
  ledger.running_interval = intersect(ledger.running_interval, next);
  return ledger.running_interval;
}

StepReport process_observation(WealthLedger& ledger, double x, std::span<const double> lambdas,
                               const BettingConfig& config) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("observation must lie in [0,1]");
  }
  if (config.grid_size != ledger.grid.grid_size()) {
    throw std::invalid_argument("config grid_size does not match the ledger grid");
  }
  if (lambdas.size() != ledger.log_wealth.size()) {
    throw std::invalid_argument("one coefficient per grid point is required");
  }
  // Validate the full step before mutating so a bad coefficient leaves the
  // ledger untouched.
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto range = betting_interval(ledger.grid[i], config.c);
    if (!range.contains(lambdas[i])) {
      std::ostringstream os;
      os << "coefficient " << lambdas[i] << " at grid index " << i << " (mu = " << ledger.grid[i]
         << ") lies outside [" << range.lower << ", " << range.upper << "]";
      throw InfeasibleBet(os.str(), static_cast<std::ptrdiff_t>(i));
    }
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    ledger.log_wealth[i] = wealth_step(ledger.log_wealth[i], lambdas[i], x, ledger.grid[i]);
  }
  ++ledger.n;
  StepReport report;
  report.raw = invert_grid(ledger, config.alpha);
  ledger.last_raw_interval = report.raw;
  report.running = running_intersect(ledger, report.raw);
  return report;
}

}  // namespace bacs
