#include "bacs/law.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bacs {
namespace {

double sample_beta(double a, double b, Rng& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  for (;;) {
    const double x = ga(rng);
    const double y = gb(rng);
    // Tiny shapes can underflow both draws.
    if (x + y > 0.0) return x / (x + y);
  }
}

}  // namespace

TrueLaw TrueLaw::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli p must lie in [0,1]");
  TrueLaw law;
  law.kind_ = Kind::bernoulli;
  law.p_ = p;
  if (p < 1.0) law.atoms_.push_back({0.0, 1.0 - p});
  if (p > 0.0) law.atoms_.push_back({1.0, p});
  law.finish();
  return law;
}

TrueLaw TrueLaw::beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("beta shapes must be positive");
  TrueLaw law;
  law.kind_ = Kind::beta;
  law.components_.push_back({a, b, 1.0});
  law.finish();
  return law;
}

TrueLaw TrueLaw::beta_mixture(std::vector<BetaComponent> components) {
  if (components.empty()) throw std::invalid_argument("beta mixture needs a component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.a > 0.0 && c.b > 0.0 && c.weight > 0.0)) {
      throw std::invalid_argument("beta mixture components need positive shapes and weights");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
  TrueLaw law;
  law.kind_ = Kind::beta_mixture;
  law.components_ = std::move(components);
  law.finish();
  return law;
}

TrueLaw TrueLaw::finite_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("finite law needs an atom");
  TrueLaw law;
  law.kind_ = Kind::finite_atoms;
  law.atoms_ = std::move(atoms);
  law.finish();
  return law;
}

void TrueLaw::finish() {
  if (components_.empty()) {
    predictive_ = PredictiveDistribution::from_atoms(atoms_);
  } else {
    predictive_ = PredictiveDistribution::from_betas(components_);
  }
  predictive_.validate();
  mean_ = predictive_.mean();
  measure_ = compile(predictive_);
}

double TrueLaw::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (kind_) {
    case Kind::bernoulli:
      return unif(rng) < p_ ? 1.0 : 0.0;
    case Kind::beta:
      return sample_beta(components_[0].a, components_[0].b, rng);
    case Kind::beta_mixture: {
      double u = unif(rng);
      for (const auto& c : components_) {
        if (u < c.weight) return sample_beta(c.a, c.b, rng);
        u -= c.weight;
      }
      return sample_beta(components_.back().a, components_.back().b, rng);
    }
    case Kind::finite_atoms: {
      double u = unif(rng);
      for (const auto& a : atoms_) {
        if (u < a.weight) return a.location;
        u -= a.weight;
      }
      return atoms_.back().location;
    }
  }
  return 0.0;
}

std::vector<double> TrueLaw::sample(Rng& rng, std::size_t n) const {
  std::vector<double> xs;
  xs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) xs.push_back(sample(rng));
  return xs;
}

std::string TrueLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::bernoulli:
      os << "bernoulli(" << p_ << ")";
      break;
    case Kind::beta:
      os << "beta(" << components_[0].a << "," << components_[0].b << ")";
      break;
    case Kind::beta_mixture:
      os << "beta_mixture(";
      for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) os << ";";
        os << components_[i].weight << "*beta(" << components_[i].a << "," << components_[i].b << ")";
      }
      os << ")";
      break;
    case Kind::finite_atoms:
      os << "atoms(" << atoms_.size() << ")";
      break;
  }
  return os.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  // splitmix64 finaliser applied to a counter offset from the seed.
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace bacs
