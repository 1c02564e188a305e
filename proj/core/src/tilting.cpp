#include "bacs/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "tilt_kernel.hpp"

namespace bacs {

void EtelConfig::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be >= 0");
  if (grid_size < 2) throw std::invalid_argument("pseudo-posterior grid needs at least 2 points");
  if (!(prune_nats > 0.0)) throw std::invalid_argument("prune_nats must be positive");
  mu_prior.validate();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TiltEval {
  double mean;
  double var;
  double shift;      // M: largest exponent
  double log_denom;  // log of sum_i e^{gamma X_i - M} + (tau/2)(e^{-M} + e^{gamma - M})
};

class TiltKernel {
 public:
  TiltKernel(const CompressedHistory& h, double tau)
      : xs_(h.values), cs_(h.counts), n_(static_cast<double>(h.n)), half_tau_(0.5 * tau),
        scratch_(h.values.size()) {}

  bool empty() const noexcept { return xs_.empty(); }
  double xmin() const noexcept { return xs_.front(); }
  double xmax() const noexcept { return xs_.back(); }
  double n() const noexcept { return n_; }
  double half_tau() const noexcept { return half_tau_; }
  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& cs() const noexcept { return cs_; }

  double mean() const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < xs_.size(); ++j) s += cs_[j] * xs_[j];
    return s / n_;
  }

  TiltEval eval(double gamma) const {
    double m = -kInf;
    if (!xs_.empty()) m = std::max(gamma * xs_.front(), gamma * xs_.back());
    if (half_tau_ > 0.0) m = std::max({m, 0.0, gamma});
    const std::size_t k = xs_.size();
    const auto sums = detail::tilt_sums(xs_.data(), cs_.data(), scratch_.data(), k, gamma, m);
    const double r0 = half_tau_ > 0.0 ? half_tau_ * std::exp(-m) : 0.0;
    const double r1 = half_tau_ > 0.0 ? half_tau_ * std::exp(gamma - m) : 0.0;
    const double d = sums.s0 + r0 + r1;
    const double mean = (sums.s1 + r1) / d;
    const double second = (sums.s2 + r1) / d;
    double var = second - mean * mean;
    if (!(var > 1e-6 * second)) {
      // Near saturation the one-pass variance cancels; redo it centred.
      double v = r0 * mean * mean + r1 * (1.0 - mean) * (1.0 - mean);
      for (std::size_t j = 0; j < k; ++j) {
        const double dx = xs_[j] - mean;
        v += scratch_[j] * dx * dx;
      }
      var = v / d;
    }
    return {mean, var, m, std::log(d)};
  }

  double log_likelihood(double gamma, const TiltEval& e) const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < xs_.size(); ++j) s += cs_[j] * (gamma * xs_[j] - e.shift);
    return s - n_ * e.log_denom;
  }

  void check_feasible(double mu0) const {
    if (half_tau_ > 0.0) {
      if (!(mu0 > 0.0 && mu0 < 1.0)) throw std::domain_error("candidate mean must lie in (0,1)");
      return;
    }
    if (xs_.empty() || !(mu0 > xmin() && mu0 < xmax())) {
      throw HullViolation("candidate mean outside the open hull of the sample");
    }
  }

  struct Solved {
    double gamma;
    TiltEval eval;
  };

  /// Bracketed Newton on the increasing map gamma -> tilted mean. The bracket
  /// grows by doubling from the starting point until the residual changes sign.
  Solved solve(double mu0, double guess, double tol) const {
    double lo = -kInf;
    double hi = kInf;
    double g = guess;
    double widen = 1.0;
    Solved best{g, eval(g)};
    double best_res = kInf;
    for (int iter = 0; iter < 500; ++iter) {
      const TiltEval e = iter == 0 ? best.eval : eval(g);
      const double f = e.mean - mu0;
      if (std::abs(f) < best_res) {
        best_res = std::abs(f);
        best = {g, e};
      }
      if (std::abs(f) <= tol) break;
      if (f < 0.0) {
        lo = g;
      } else {
        hi = g;
      }
      double next = e.var > 0.0 ? g - f / e.var : std::numeric_limits<double>::quiet_NaN();
      if (!(next > lo && next < hi)) {
        if (std::isfinite(lo) && std::isfinite(hi)) {
          next = 0.5 * (lo + hi);
        } else if (std::isfinite(lo)) {
          next = lo + widen;
          widen *= 2.0;
        } else {
          next = hi - widen;
          widen *= 2.0;
        }
      }
      if (next == g || (std::isfinite(lo) && std::isfinite(hi) &&
                        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(1.0, std::abs(g)))) {
        break;
      }
      g = next;
    }
    return best;
  }

 private:
  std::vector<double> xs_;
  std::vector<double> cs_;
  double n_;
  double half_tau_;
  mutable std::vector<double> scratch_;
};

double log_beta_pdf(const BetaPrior& p, double x) {
  return (p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x) -
         (std::lgamma(p.a) + std::lgamma(p.b) - std::lgamma(p.a + p.b));
}

struct GridEval {
  bool done = false;
  double gamma = 0.0;
  TiltEval eval{};
  double log_likelihood = 0.0;
  double log_post = 0.0;
};

bool supports_posterior(const CompressedHistory& h, double tau) {
  if (tau > 0.0) return h.n >= 1;
  return h.n >= 2 && h.values.size() >= 2;
}

std::vector<double> make_grid(const CompressedHistory& h, const EtelConfig& config) {
  std::vector<double> grid;
  if (!supports_posterior(h, config.tau)) return grid;
  const int g = config.grid_size;
  grid.reserve(static_cast<std::size_t>(g));
  if (config.tau > 0.0) {
    for (int k = 1; k <= g; ++k) grid.push_back((k - 0.5) / g);
    return grid;
  }
  const double range = h.values.back() - h.values.front();
  const double lo = h.values.front() + 1e-9 * range;
  const double hi = h.values.back() - 1e-9 * range;
  for (int k = 0; k < g; ++k) grid.push_back(lo + (hi - lo) * k / (g - 1));
  return grid;
}

std::size_t nearest(const std::vector<double>& grid, double v) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), v);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return grid.size() - 1;
  const auto i = static_cast<std::size_t>(it - grid.begin());
  return (v - grid[i - 1] <= grid[i] - v) ? i - 1 : i;
}

/// Evaluates the log pseudo-posterior on the grid, warm-starting each tilt
/// from its neighbour. With pruning, the likelihood is unimodal with peak at
/// the sample mean and a prior with both shapes >= 1 is unimodal too, so
/// outside the span of the two peaks the log posterior is monotone and the
/// outward scan can stop once it drops prune_nats below the maximum.
std::vector<GridEval> scan(const TiltKernel& kernel, const std::vector<double>& grid,
                           const EtelConfig& config, bool prune, double tol) {
  std::vector<GridEval> out(grid.size());
  const auto& prior = config.mu_prior;
  const double xbar = kernel.mean();
  const bool can_prune = prune && prior.a >= 1.0 && prior.b >= 1.0;

  const std::size_t center = nearest(grid, xbar);
  std::size_t mid_lo = center;
  std::size_t mid_hi = center;
  if (can_prune) {
    double mode = xbar;
    if (prior.a > 1.0 && prior.b > 1.0) {
      mode = (prior.a - 1.0) / (prior.a + prior.b - 2.0);
    } else if (prior.a == 1.0 && prior.b > 1.0) {
      mode = 0.0;
    } else if (prior.a > 1.0 && prior.b == 1.0) {
      mode = 1.0;
    }
    mid_lo = std::min(center, nearest(grid, std::min(xbar, mode)));
    mid_hi = std::max(center, nearest(grid, std::max(xbar, mode)));
    // Nearest-point rounding can land one step inside the monotone region.
    if (mid_lo > 0) --mid_lo;
    if (mid_hi + 1 < grid.size()) ++mid_hi;
  } else {
    mid_lo = 0;
    mid_hi = grid.size() - 1;
  }

  auto evaluate = [&](std::size_t i, double guess) {
    kernel.check_feasible(grid[i]);
    const auto s = kernel.solve(grid[i], guess, tol);
    GridEval& g = out[i];
    g.done = true;
    g.gamma = s.gamma;
    g.eval = s.eval;
    g.log_likelihood = kernel.log_likelihood(s.gamma, s.eval);
    g.log_post = g.log_likelihood + log_beta_pdf(prior, grid[i]);
  };
  auto guess_from = [&](std::size_t from, std::size_t to) {
    const GridEval& g = out[from];
    const double step = g.eval.var > 0.0 ? (grid[to] - grid[from]) / g.eval.var : 0.0;
    return std::isfinite(step) ? g.gamma + step : g.gamma;
  };

  evaluate(center, 0.0);
  for (std::size_t i = center + 1; i <= mid_hi; ++i) evaluate(i, guess_from(i - 1, i));
  for (std::size_t i = center; i-- > mid_lo;) evaluate(i, guess_from(i + 1, i));

  double top = -kInf;
  for (std::size_t i = mid_lo; i <= mid_hi; ++i) top = std::max(top, out[i].log_post);
  const double floor = top - config.prune_nats;

  for (std::size_t i = mid_hi + 1; i < grid.size(); ++i) {
    evaluate(i, guess_from(i - 1, i));
    if (out[i].log_post < floor) break;
  }
  for (std::size_t i = mid_lo; i-- > 0;) {
    evaluate(i, guess_from(i + 1, i));
    if (out[i].log_post < floor) break;
  }
  return out;
}

/// Normalised posterior weights over evaluated grid points.
std::vector<double> normalize(const std::vector<GridEval>& evals) {
  double top = -kInf;
  for (const auto& g : evals) {
    if (g.done) top = std::max(top, g.log_post);
  }
  std::vector<double> w(evals.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (!evals[i].done) continue;
    w[i] = std::exp(evals[i].log_post - top);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

TiltSolution etel_tilt_solve(std::span<const double> history, double mu0, const EtelConfig& config,
                             double tol) {
  config.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tilt tolerance must be positive");
  const auto compressed = CompressedHistory::from(history);
  const TiltKernel kernel(compressed, config.tau);
  kernel.check_feasible(mu0);
  const auto s = kernel.solve(mu0, 0.0, tol);

  TiltSolution out;
  out.gamma = s.gamma;
  out.mu0 = mu0;
  out.sample_weights.reserve(history.size());
  for (double x : history) {
    out.sample_weights.push_back(std::exp(s.gamma * x - s.eval.shift - s.eval.log_denom));
  }
  if (config.tau > 0.0) {
    out.regularizer_weight = 0.5 * config.tau *
                             (std::exp(-s.eval.shift - s.eval.log_denom) +
                              std::exp(s.gamma - s.eval.shift - s.eval.log_denom));
  }
  out.endpoint_mass_p = 1.0 / (1.0 + std::exp(-s.gamma));
  return out;
}

std::vector<double> etel_grid(std::span<const double> history, const EtelConfig& config) {
  config.validate();
  return make_grid(CompressedHistory::from(history), config);
}

PseudoPosterior betel_pseudo_posterior(std::span<const double> history, const EtelConfig& config) {
  config.validate();
  const auto compressed = CompressedHistory::from(history);
  const auto grid = make_grid(compressed, config);
  PseudoPosterior post;
  if (grid.empty()) {
    post.abstain = true;
    return post;
  }
  const TiltKernel kernel(compressed, config.tau);
  const auto evals = scan(kernel, grid, config, false, kDefaultTiltTolerance);
  const auto weights = normalize(evals);
  post.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GridEval& g = evals[i];
    PseudoPosteriorPoint p;
    p.mu0 = grid[i];
    p.weight = weights[i];
    p.log_likelihood = g.log_likelihood;
    p.tilt.gamma = g.gamma;
    p.tilt.mu0 = grid[i];
    p.tilt.sample_weights.reserve(history.size());
    for (double x : history) {
      p.tilt.sample_weights.push_back(std::exp(g.gamma * x - g.eval.shift - g.eval.log_denom));
    }
    if (config.tau > 0.0) {
      p.tilt.regularizer_weight = 0.5 * config.tau *
                                  (std::exp(-g.eval.shift - g.eval.log_denom) +
                                   std::exp(g.gamma - g.eval.shift - g.eval.log_denom));
    }
    p.tilt.endpoint_mass_p = 1.0 / (1.0 + std::exp(-g.gamma));
    post.points.push_back(std::move(p));
  }
  return post;
}

PredictiveDistribution etel_predictive(std::span<const double> history, const EtelConfig& config) {
  config.validate();
  const auto compressed = CompressedHistory::from(history);
  const auto grid = make_grid(compressed, config);
  if (grid.empty()) return PredictiveDistribution::abstain();
  const TiltKernel kernel(compressed, config.tau);
  const auto evals = scan(kernel, grid, config, true, kDefaultTiltTolerance);
  const auto post = normalize(evals);

  const auto& xs = kernel.xs();
  const auto& cs = kernel.cs();
  std::vector<double> mass(xs.size(), 0.0);
  double at_zero = 0.0;
  double at_one = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (post[k] <= 0.0) continue;
    const GridEval& g = evals[k];
    const double base = -g.eval.shift - g.eval.log_denom;
    detail::accumulate_tilted(xs.data(), cs.data(), mass.data(), xs.size(), g.gamma, base, post[k]);
    if (config.tau > 0.0) {
      at_zero += post[k] * kernel.half_tau() * std::exp(base);
      at_one += post[k] * kernel.half_tau() * std::exp(g.gamma + base);
    }
  }

  std::vector<Atom> atoms;
  atoms.reserve(xs.size() + 2);
  double total = at_zero + at_one;
  for (double m : mass) total += m;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (mass[j] > 0.0) atoms.push_back({xs[j], mass[j] / total});
  }
  if (at_zero > 0.0) atoms.push_back({0.0, at_zero / total});
  if (at_one > 0.0) atoms.push_back({1.0, at_one / total});
  return PredictiveDistribution::from_atoms(std::move(atoms));
}

}  // namespace bacs
