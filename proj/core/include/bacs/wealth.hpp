#pragma once

// Grid-based wealth-process engine.
//
// For every candidate mean mu on the grid {1/G, ..., (G-1)/G} the engine keeps
// log W_n(mu) = sum_i log(1 + lambda_i(mu) (X_i - mu)). A candidate is retained
// while log W_n(mu) <= log(1/alpha); the retained set is reported as its
// covering interval widened by one grid step, and successive intervals are
// intersected so the reported sequence is nested.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bacs {

struct BettingConfig {
  double alpha = 0.1;
  double c = 0.95;  // truncation of the admissible betting range
  int grid_size = 500;

  void validate() const;
};

struct ClosedInterval {
  double lower;
  double upper;

  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

/// Admissible betting coefficients I_{mu,c} = [-c/(1-mu), c/mu].
ClosedInterval betting_interval(double mu, double c);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 1.0;
  bool empty = false;

  static ConfidenceInterval full() noexcept { return {0.0, 1.0, false}; }
  static ConfidenceInterval none() noexcept { return {0.0, 0.0, true}; }

  double width() const noexcept { return empty ? 0.0 : upper - lower; }
  bool contains(double v) const noexcept { return !empty && lower <= v && v <= upper; }
  bool subset_of(const ConfidenceInterval& other) const noexcept;

  friend bool operator==(const ConfidenceInterval&, const ConfidenceInterval&) = default;
};

ConfidenceInterval intersect(const ConfidenceInterval& a, const ConfidenceInterval& b) noexcept;

/// Equally spaced candidate means {1/G, ..., (G-1)/G}.
class CandidateGrid {
 public:
  explicit CandidateGrid(int grid_size);

  int grid_size() const noexcept { return grid_size_; }
  double step() const noexcept { return 1.0 / grid_size_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::span<const double> points() const noexcept { return points_; }
  double operator[](std::size_t i) const noexcept { return points_[i]; }

  /// Index of the grid point closest to mu (ties go to the lower index).
  std::size_t nearest_index(double mu) const;

 private:
  int grid_size_;
  std::vector<double> points_;
};

/// Thrown when a coefficient would make a wealth factor nonpositive.
class InfeasibleBet : public std::domain_error {
 public:
  InfeasibleBet(const std::string& what, std::ptrdiff_t grid_index = -1)
      : std::domain_error(what), grid_index_(grid_index) {}
  std::ptrdiff_t grid_index() const noexcept { return grid_index_; }

 private:
  std::ptrdiff_t grid_index_;
};

/// One multiplicative update in the log domain: log_w + log(1 + lambda (x - mu)).
double wealth_step(double log_w, double lambda, double x, double mu);

struct WealthLedger {
  explicit WealthLedger(int grid_size);

  CandidateGrid grid;
  std::vector<double> log_wealth;  // one entry per grid point
  std::size_t n = 0;
  std::optional<ConfidenceInterval> last_raw_interval;
  ConfidenceInterval running_interval = ConfidenceInterval::full();
};

/// Covering interval of {mu : log W(mu) <= log(1/alpha)}, widened by one grid
/// step and clipped to [0,1]. Flagged empty when no grid point is retained.
ConfidenceInterval invert_grid(const WealthLedger& ledger, double alpha);

/// Intersects the stored running interval with `next` and stores the result.
ConfidenceInterval running_intersect(WealthLedger& ledger, const ConfidenceInterval& next);

struct StepReport {
  ConfidenceInterval running;
  ConfidenceInterval raw;
};

/// Applies one observation at every grid point with the supplied coefficients
/// (lambdas[i] must lie in betting_interval(grid[i], c)), then re-inverts.
StepReport process_observation(WealthLedger& ledger, double x, std::span<const double> lambdas,
                               const BettingConfig& config);

}  // namespace bacs
