#include "bacs/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bacs {
namespace {

/// F_p - F_q split into signed atoms and a continuous part sampled at j / cells.
struct SignedCdf {
  std::vector<std::pair<double, double>> atoms;
  std::vector<double> continuous;
  bool has_continuous = false;

  void add(const PredictiveDistribution& d, double sign, int cells) {
    if (d.is_abstain()) throw std::invalid_argument("the sentinel predictive has no distribution");
    for (const auto& a : d.atoms()) atoms.emplace_back(a.location, sign * a.weight);
    for (const auto& block : d.beta_blocks()) {
      if (!has_continuous) {
        continuous.assign(static_cast<std::size_t>(cells) + 1, 0.0);
        has_continuous = true;
      }
      const auto& table = block.family->cdf_table(cells);
      const std::size_t stride = static_cast<std::size_t>(cells) + 1;
      for (std::size_t k = 0; k < block.weights.size(); ++k) {
        const double w = sign * block.weights[k];
        if (w == 0.0) continue;
        const double* row = table.data() + k * stride;
        for (std::size_t j = 0; j < stride; ++j) continuous[j] += w * row[j];
      }
    }
  }
};

/// Integral of |f| over [t0, t1] for f linear with end values f0, f1.
double abs_linear_integral(double f0, double f1, double length) {
  if ((f0 >= 0.0 && f1 >= 0.0) || (f0 <= 0.0 && f1 <= 0.0)) {
    return 0.5 * (std::abs(f0) + std::abs(f1)) * length;
  }
  return 0.5 * (f0 * f0 + f1 * f1) / (std::abs(f0) + std::abs(f1)) * length;
}

}  // namespace

double wasserstein1(const PredictiveDistribution& p, const PredictiveDistribution& q, int cells) {
  if (cells < 1) throw std::invalid_argument("CDF discretisation needs at least one cell");
  SignedCdf diff;
  diff.add(p, 1.0, cells);
  diff.add(q, -1.0, cells);
  auto& atoms = diff.atoms;
  for (const auto& a : atoms) {
    if (!(a.first >= 0.0 && a.first <= 1.0)) throw std::invalid_argument("atom outside [0,1]");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  std::size_t idx = 0;
  double jump = 0.0;  // signed atom mass at locations <= current point
  auto absorb_upto = [&](double t) {
    while (idx < atoms.size() && atoms[idx].first <= t) jump += atoms[idx++].second;
  };

  double total = 0.0;
  const int segments = diff.has_continuous ? cells : 1;
  for (int j = 0; j < segments; ++j) {
    const double a = static_cast<double>(j) / segments;
    const double b = static_cast<double>(j + 1) / segments;
    const double ca = diff.has_continuous ? diff.continuous[j] : 0.0;
    const double cb = diff.has_continuous ? diff.continuous[j + 1] : 0.0;
    auto cont = [&](double t) { return ca + (cb - ca) * (t - a) / (b - a); };
    absorb_upto(a);
    double t = a;
    while (idx < atoms.size() && atoms[idx].first < b) {
      const double s = atoms[idx].first;
      total += abs_linear_integral(jump + cont(t), jump + cont(s), s - t);
      absorb_upto(s);
      t = s;
    }
    total += abs_linear_integral(jump + cont(t), jump + cb, b - t);
  }
  return total;
}

double wasserstein1(const PredictiveDistribution& p, const TrueLaw& q, int cells) {
  return wasserstein1(p, q.as_predictive(), cells);
}

double wasserstein1(const TrueLaw& p, const TrueLaw& q, int cells) {
  return wasserstein1(p.as_predictive(), q.as_predictive(), cells);
}

}  // namespace bacs
