#include "bacs/beta_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace bacs {

void BetaPrior::validate() const {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("beta prior shapes must be positive and finite");
  }
}

void GammaPrior::validate() const {
  if (!(shape > 0.0 && rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw std::invalid_argument("gamma prior shape and rate must be positive and finite");
  }
}

namespace {

// Midpoint-rule cell widths for sorted nodes inside [lo, hi]; hi may be
// infinite, in which case the last cell mirrors its left half.
std::vector<double> cell_widths(const std::vector<double>& x, double lo, double hi) {
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double left = i == 0 ? lo : 0.5 * (x[i - 1] + x[i]);
    double right = i + 1 == x.size() ? hi : 0.5 * (x[i] + x[i + 1]);
    if (!std::isfinite(right)) right = x[i] + (x[i] - left);
    w[i] = right - left;
  }
  return w;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Particle> build_prior_grid(const BetaWorkingPrior& prior, int k_rho, int k_nu) {
  // Half the nodes sit at prior quantiles (k - 1/2)/K', the rest on a wide
  // fixed grid (logit-uniform for rho, log-uniform for nu) so the posterior
  // can move away from a concentrated or misplaced prior. Each particle starts
  // with weight prior density x cell width.
  const int q_rho = k_rho - k_rho / 2;
  const int q_nu = k_nu - k_nu / 2;
  std::vector<double> rhos;
  std::vector<double> nus;
  for (int i = 1; i <= q_rho; ++i) {
    rhos.push_back(boost::math::ibeta_inv(prior.rho.a, prior.rho.b, (i - 0.5) / q_rho));
  }
  for (int i = 0; i < k_rho / 2; ++i) {
    const double z = BetaPosterior::kRhoLogitSpan * (2.0 * (i + 0.5) / (k_rho / 2) - 1.0);
    rhos.push_back(1.0 / (1.0 + std::exp(-z)));
  }
  for (int j = 1; j <= q_nu; ++j) {
    nus.push_back(boost::math::gamma_p_inv(prior.nu.shape, (j - 0.5) / q_nu) / prior.nu.rate);
  }
  for (int j = 0; j < k_nu / 2; ++j) {
    const double t = (j + 0.5) / (k_nu / 2);
    nus.push_back(std::exp(std::log(BetaPosterior::kNuMin) + t * (std::log(BetaPosterior::kNuMax) - std::log(BetaPosterior::kNuMin))));
  }
  // Keep shapes strictly positive for extreme priors.
  for (double& r : rhos) r = std::clamp(r, 1e-12, 1.0 - 1e-12);
  for (double& v : nus) v = std::max(v, 1e-300);
  rhos = sorted_unique(std::move(rhos));
  nus = sorted_unique(std::move(nus));
  const auto rho_w = cell_widths(rhos, 0.0, 1.0);
  const auto nu_w = cell_widths(nus, 0.0, std::numeric_limits<double>::infinity());

  const double ra = prior.rho.a;
  const double rb = prior.rho.b;
  const double log_beta_rho = std::lgamma(ra) + std::lgamma(rb) - std::lgamma(ra + rb);
  const double ks = prior.nu.shape;
  const double kr = prior.nu.rate;
  std::vector<Particle> particles;
  particles.reserve(rhos.size() * nus.size());
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const double r = rhos[i];
    const double lr = (ra - 1.0) * std::log(r) + (rb - 1.0) * std::log1p(-r) - log_beta_rho +
                      std::log(rho_w[i]);
    for (std::size_t j = 0; j < nus.size(); ++j) {
      const double v = nus[j];
      const double lv = ks * std::log(kr) - std::lgamma(ks) + (ks - 1.0) * std::log(v) - kr * v +
                        std::log(nu_w[j]);
      particles.push_back({r, v, lr + lv});
    }
  }
  return particles;
}

std::shared_ptr<const BetaFamily> family_of(const std::vector<Particle>& particles) {
  std::vector<std::pair<double, double>> shapes;
  shapes.reserve(particles.size());
  for (const auto& p : particles) {
    if (!(p.rho > 0.0 && p.rho < 1.0 && p.nu > 0.0)) {
      throw std::invalid_argument("particles need rho in (0,1) and nu > 0");
    }
    shapes.emplace_back(p.rho * p.nu, (1.0 - p.rho) * p.nu);
  }
  return std::make_shared<const BetaFamily>(std::move(shapes));
}

}  // namespace

BetaPosterior BetaPosterior::from_prior_grid(const BetaWorkingPrior& prior, int k_rho, int k_nu) {
  prior.rho.validate();
  prior.nu.validate();
  if (k_rho < 1 || k_nu < 1) throw std::invalid_argument("particle grid needs at least one point");
  using Key = std::tuple<double, double, double, double, int, int>;
  struct Entry {
    std::vector<Particle> particles;
    std::shared_ptr<const BetaFamily> family;
  };
  static std::mutex mutex;
  static std::map<Key, Entry> cache;
  const Key key{prior.rho.a, prior.rho.b, prior.nu.shape, prior.nu.rate, k_rho, k_nu};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto particles = build_prior_grid(prior, k_rho, k_nu);
    auto family = family_of(particles);
    it = cache.emplace(key, Entry{std::move(particles), std::move(family)}).first;
  }
  return BetaPosterior(it->second.particles, prior, it->second.family);
}

BetaPosterior::BetaPosterior(std::vector<Particle> particles, BetaWorkingPrior prior)
    : particles_(std::move(particles)), prior_(prior) {
  if (particles_.empty()) throw std::invalid_argument("posterior needs at least one particle");
  family_ = family_of(particles_);
  normalize();
}

BetaPosterior::BetaPosterior(std::vector<Particle> particles, BetaWorkingPrior prior,
                             std::shared_ptr<const BetaFamily> family)
    : particles_(std::move(particles)), prior_(prior), family_(std::move(family)) {
  if (particles_.empty()) throw std::invalid_argument("posterior needs at least one particle");
  if (!family_ || family_->size() != particles_.size()) {
    throw std::invalid_argument("beta family does not match the particle set");
  }
  normalize();
}

void BetaPosterior::update(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("observation must lie in [0,1]");
  if (x < kClampEps || x > 1.0 - kClampEps) {
    x = std::clamp(x, kClampEps, 1.0 - kClampEps);
    ++clamp_count_;
  }
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  for (std::size_t k = 0; k < particles_.size(); ++k) {
    particles_[k].log_weight +=
        (family_->a(k) - 1.0) * lx + (family_->b(k) - 1.0) * l1x - family_->log_beta(k);
  }
  normalize();
}

void BetaPosterior::normalize() {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : particles_) top = std::max(top, p.log_weight);
  double total = 0.0;
  for (const auto& p : particles_) total += std::exp(p.log_weight - top);
  const double shift = top + std::log(total);
  for (auto& p : particles_) p.log_weight -= shift;
}

std::vector<double> BetaPosterior::normalized_weights() const {
  std::vector<double> w;
  w.reserve(particles_.size());
  for (const auto& p : particles_) w.push_back(std::exp(p.log_weight));
  return w;
}

double BetaPosterior::posterior_mean_rho() const {
  double m = 0.0;
  for (const auto& p : particles_) m += std::exp(p.log_weight) * p.rho;
  return m;
}

BetaPosterior beta_posterior_update(BetaPosterior post, double x) {
  post.update(x);
  return post;
}

PredictiveDistribution beta_posterior_predictive(const BetaPosterior& post, double prune) {
  auto weights = post.normalized_weights();
  if (prune > 0.0) {
    double kept = 0.0;
    for (double& w : weights) {
      if (w < prune) w = 0.0;
      kept += w;
    }
    for (double& w : weights) w /= kept;
  }
  return PredictiveDistribution::from_family(post.family(), std::move(weights));
}

}  // namespace bacs
