#include "bacs/lambda_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bacs {
namespace {

struct ScoreEval {
  double score;
  double slope;
};

ScoreEval score_and_slope(const ScoreMeasure& m, double lambda, double mu) noexcept {
  double s = 0.0;
  double ds = 0.0;
  const std::size_t n = m.x.size();
  const double* xs = m.x.data();
  const double* ws = m.w.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - mu;
    const double t = d / (1.0 + lambda * d);
    s += ws[i] * t;
    ds -= ws[i] * t * t;
  }
  return {s, ds};
}

void require_positive_factors(const ScoreMeasure& m, double lambda, double mu) {
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    if (m.w[i] != 0.0 && !(1.0 + lambda * (m.x[i] - mu) > 0.0)) {
      throw std::domain_error("coefficient makes a wealth factor nonpositive on the support");
    }
  }
}

}  // namespace

double expected_score(const ScoreMeasure& measure, double lambda, double mu) {
  if (measure.abstain) return 0.0;
  if (measure.empty()) throw std::invalid_argument("empty predictive distribution");
  require_positive_factors(measure, lambda, mu);
  return score_and_slope(measure, lambda, mu).score;
}

double expected_loggrowth(const ScoreMeasure& measure, double lambda, double mu) {
  if (measure.abstain) return 0.0;
  if (measure.empty()) throw std::invalid_argument("empty predictive distribution");
  require_positive_factors(measure, lambda, mu);
  double g = 0.0;
  for (std::size_t i = 0; i < measure.x.size(); ++i) {
    g += measure.w[i] * std::log1p(lambda * (measure.x[i] - mu));
  }
  return g;
}

double expected_score(const PredictiveDistribution& pred, double lambda, double mu) {
  return expected_score(compile(pred), lambda, mu);
}

double expected_loggrowth(const PredictiveDistribution& pred, double lambda, double mu) {
  return expected_loggrowth(compile(pred), lambda, mu);
}

LambdaSolution solve_lambda(const ScoreMeasure& measure, double mu, double c, double tol,
                            double guess) {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  const auto range = betting_interval(mu, c);
  if (measure.abstain) return {};
  if (measure.empty()) throw std::invalid_argument("empty predictive distribution");
  if (measure.degenerate_at(mu)) return {};

  // Safeguarded Newton on the decreasing score. [lo, hi] always brackets the
  // maximiser; an endpoint of I_{mu,c} is only evaluated when Newton points
  // past it or the bracket shrinks onto it.
  double lo = range.lower;
  double hi = range.upper;
  bool lo_seen = false;
  bool hi_seen = false;
  double lambda = std::isfinite(guess) ? std::clamp(guess, lo, hi) : 0.0;
  LambdaSolution best{lambda, false, std::numeric_limits<double>::infinity()};
  for (int iter = 0; iter < 300; ++iter) {
    const auto [s, ds] = score_and_slope(measure, lambda, mu);
    if (lambda == range.upper) {
      if (s >= 0.0) return {range.upper, true, s};
      hi_seen = true;
    }
    if (lambda == range.lower) {
      if (s <= 0.0) return {range.lower, true, s};
      lo_seen = true;
    }
    if (std::abs(s) < std::abs(best.foc_residual)) best = {lambda, false, s};
    if (std::abs(s) <= tol) return best;
    if (s > 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    double next = (ds < 0.0) ? lambda - s / ds : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) {
      if (next >= hi && hi == range.upper && !hi_seen) {
        next = range.upper;
      } else if (next <= lo && lo == range.lower && !lo_seen) {
        next = range.lower;
      } else {
        next = 0.5 * (lo + hi);
      }
    }
    if (next == lambda ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lambda))) {
      // The bracket has collapsed; an unvisited endpoint may still be the answer.
      if (hi == range.upper && !hi_seen) {
        next = range.upper;
      } else if (lo == range.lower && !lo_seen) {
        next = range.lower;
      } else {
        break;
      }
    }
    lambda = next;
  }
  return best;
}

LambdaSolution solve_lambda(const PredictiveDistribution& pred, double mu, double c, double tol,
                            double guess) {
  return solve_lambda(compile(pred), mu, c, tol, guess);
}

}  // namespace bacs
