#include "bacs/predictive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace bacs {

BetaFamily::BetaFamily(std::vector<std::pair<double, double>> shapes) {
  a_.reserve(shapes.size());
  b_.reserve(shapes.size());
  log_beta_.reserve(shapes.size());
  for (const auto& [a, b] : shapes) {
    if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("beta shapes must be positive and finite");
    }
    a_.push_back(a);
    b_.push_back(b);
    log_beta_.push_back(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  }
}

double BetaFamily::log_pdf(std::size_t k, double x) const noexcept {
  return (a_[k] - 1.0) * std::log(x) + (b_[k] - 1.0) * std::log1p(-x) - log_beta_[k];
}

double BetaFamily::log_pdf(std::size_t k, double x, double one_minus_x) const noexcept {
  return (a_[k] - 1.0) * std::log(x) + (b_[k] - 1.0) * std::log(one_minus_x) - log_beta_[k];
}

const std::vector<double>& BetaFamily::node_table(int nodes) const {
  std::lock_guard lock(mutex_);
  auto& slot = node_tables_[nodes];
  if (!slot) {
    const auto& plain = gauss_legendre_unit(nodes);
    const auto& steep = graded_unit(nodes);
    const std::size_t n = plain.nodes.size();
    auto table = std::make_unique<std::vector<double>>(size() * n);
    for (std::size_t k = 0; k < size(); ++k) {
      const auto& rule = graded(k) ? steep : plain;
      for (std::size_t j = 0; j < n; ++j) {
        (*table)[k * n + j] =
            rule.weights[j] * std::exp(log_pdf(k, rule.nodes[j], rule.complements[j]));
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

const std::vector<double>& BetaFamily::cdf_table(int cells) const {
  std::lock_guard lock(mutex_);
  auto& slot = cdf_tables_[cells];
  if (!slot) {
    const auto stride = static_cast<std::size_t>(cells) + 1;
    auto table = std::make_unique<std::vector<double>>(size() * stride);
    for (std::size_t k = 0; k < size(); ++k) {
      double* row = table->data() + k * stride;
      row[0] = 0.0;
      row[cells] = 1.0;
      for (int j = 1; j < cells; ++j) {
        row[j] = boost::math::ibeta(a_[k], b_[k], static_cast<double>(j) / cells);
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

PredictiveDistribution PredictiveDistribution::abstain() {
  PredictiveDistribution p;
  p.abstain_ = true;
  return p;
}

PredictiveDistribution PredictiveDistribution::from_atoms(std::vector<Atom> atoms) {
  PredictiveDistribution p;
  p.atoms_ = std::move(atoms);
  return p;
}

PredictiveDistribution PredictiveDistribution::from_betas(std::span<const BetaComponent> components) {
  std::vector<std::pair<double, double>> shapes;
  std::vector<double> weights;
  shapes.reserve(components.size());
  weights.reserve(components.size());
  for (const auto& comp : components) {
    shapes.emplace_back(comp.a, comp.b);
    weights.push_back(comp.weight);
  }
  return from_family(std::make_shared<const BetaFamily>(std::move(shapes)), std::move(weights));
}

PredictiveDistribution PredictiveDistribution::from_family(std::shared_ptr<const BetaFamily> family,
                                                           std::vector<double> weights) {
  if (!family || family->size() != weights.size()) {
    throw std::invalid_argument("one weight per beta component is required");
  }
  PredictiveDistribution p;
  p.blocks_.push_back({std::move(family), std::move(weights)});
  return p;
}

PredictiveDistribution PredictiveDistribution::mix(double w_first, const PredictiveDistribution& first,
                                                   double w_second,
                                                   const PredictiveDistribution& second) {
  if (first.abstain_ || second.abstain_) {
    throw std::invalid_argument("cannot mix the safe-default sentinel");
  }
  PredictiveDistribution p;
  auto absorb = [&p](double scale, const PredictiveDistribution& src) {
    if (scale == 0.0) return;
    for (const auto& atom : src.atoms_) p.atoms_.push_back({atom.location, scale * atom.weight});
    for (const auto& block : src.blocks_) {
      BetaBlock scaled{block.family, block.weights};
      for (double& w : scaled.weights) w *= scale;
      p.blocks_.push_back(std::move(scaled));
    }
  };
  absorb(w_first, first);
  absorb(w_second, second);
  return p;
}

std::vector<BetaComponent> PredictiveDistribution::beta_components() const {
  std::vector<BetaComponent> out;
  for (const auto& block : blocks_) {
    for (std::size_t k = 0; k < block.weights.size(); ++k) {
      if (block.weights[k] == 0.0) continue;
      out.push_back({block.family->a(k), block.family->b(k), block.weights[k]});
    }
  }
  return out;
}

double PredictiveDistribution::total_weight() const {
  double total = 0.0;
  for (const auto& atom : atoms_) total += atom.weight;
  for (const auto& block : blocks_) {
    total += std::accumulate(block.weights.begin(), block.weights.end(), 0.0);
  }
  return total;
}

double PredictiveDistribution::mean() const {
  double m = 0.0;
  for (const auto& atom : atoms_) m += atom.weight * atom.location;
  for (const auto& block : blocks_) {
    for (std::size_t k = 0; k < block.weights.size(); ++k) {
      m += block.weights[k] * block.family->mean(k);
    }
  }
  return m;
}

void PredictiveDistribution::validate(double tol) const {
  if (abstain_) return;
  if (empty()) throw std::invalid_argument("predictive distribution is empty");
  for (const auto& atom : atoms_) {
    if (!(atom.location >= 0.0 && atom.location <= 1.0)) {
      throw std::invalid_argument("atom location outside [0,1]");
    }
    if (!(atom.weight >= 0.0)) throw std::invalid_argument("atom weight must be nonnegative");
  }
  for (const auto& block : blocks_) {
    for (double w : block.weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("beta weight must be nonnegative");
    }
  }
  if (std::abs(total_weight() - 1.0) > tol) {
    throw std::invalid_argument("predictive weights do not sum to one");
  }
}

bool ScoreMeasure::degenerate_at(double mu) const noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != mu && w[i] != 0.0) return false;
  }
  return true;
}

double ScoreMeasure::mean() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m += w[i] * x[i];
  return m;
}

ScoreMeasure compile(const PredictiveDistribution& pred, int nodes) {
  ScoreMeasure out;
  if (pred.is_abstain()) {
    out.abstain = true;
    return out;
  }
  std::vector<std::pair<double, double>> points;
  points.reserve(pred.atoms().size() + 2 * static_cast<std::size_t>(nodes) + 2);
  for (const auto& atom : pred.atoms()) {
    if (atom.weight != 0.0) points.emplace_back(atom.location, atom.weight);
  }

  if (!pred.beta_blocks().empty()) {
    const QuadratureRule* rules[2] = {&gauss_legendre_unit(nodes), &graded_unit(nodes)};
    const std::size_t n_nodes = rules[0]->nodes.size();
    std::vector<double> q[2] = {std::vector<double>(n_nodes, 0.0), std::vector<double>(n_nodes, 0.0)};
    bool used[2] = {false, false};
    double mass = 0.0;
    double first_moment = 0.0;
    for (const auto& block : pred.beta_blocks()) {
      const auto& table = block.family->node_table(nodes);
      for (std::size_t k = 0; k < block.weights.size(); ++k) {
        const double wk = block.weights[k];
        if (wk == 0.0) continue;
        mass += wk;
        first_moment += wk * block.family->mean(k);
        const int r = block.family->graded(k) ? 1 : 0;
        used[r] = true;
        const double* row = table.data() + k * n_nodes;
        for (std::size_t j = 0; j < n_nodes; ++j) q[r][j] += wk * row[j];
      }
    }
    double at_zero = mass - first_moment;
    double at_one = first_moment;
    for (int r = 0; r < 2; ++r) {
      if (!used[r]) continue;
      for (std::size_t j = 0; j < n_nodes; ++j) {
        at_zero -= q[r][j] * rules[r]->complements[j];
        at_one -= q[r][j] * rules[r]->nodes[j];
        points.emplace_back(rules[r]->nodes[j], q[r][j]);
      }
    }
    points.emplace_back(0.0, at_zero);
    points.emplace_back(1.0, at_one);
  }

  std::sort(points.begin(), points.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  for (const auto& [loc, weight] : points) {
    if (!out.x.empty() && out.x.back() == loc) {
      out.w.back() += weight;
    } else {
      out.x.push_back(loc);
      out.w.push_back(weight);
    }
  }
  return out;
}

}  // namespace bacs
