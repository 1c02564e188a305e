#pragma once

// Predictive distributions on [0,1]: weighted atoms plus weighted beta
// components. This is the only type exchanged between the predictive
// constructions and the coefficient solver.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "bacs/quadrature.hpp"

namespace bacs {

struct Atom {
  double location;
  double weight;
};

struct BetaComponent {
  double a;
  double b;
  double weight;
};

/// An immutable list of beta shapes with lazily cached quadrature and CDF
/// tables. Shared between predictive snapshots built from the same particle
/// set, so per-step work reduces to reweighting cached rows.
class BetaFamily {
 public:
  explicit BetaFamily(std::vector<std::pair<double, double>> shapes);

  std::size_t size() const noexcept { return a_.size(); }
  double a(std::size_t k) const noexcept { return a_[k]; }
  double b(std::size_t k) const noexcept { return b_[k]; }
  double mean(std::size_t k) const noexcept { return a_[k] / (a_[k] + b_[k]); }
  double log_beta(std::size_t k) const noexcept { return log_beta_[k]; }
  double log_pdf(std::size_t k, double x) const noexcept;
  /// Same, with 1 - x supplied by the caller.
  double log_pdf(std::size_t k, double x, double one_minus_x) const noexcept;
  /// Whether component k is integrated on the graded rule.
  bool graded(std::size_t k) const noexcept {
    const double m = mean(k);
    return std::min(a_[k], b_[k]) < kGradedShapeThreshold || std::min(m, 1.0 - m) < kGradedMeanMargin;
  }

  /// Row-major K x nodes table of w_j * pdf_k(x_j); row k uses graded_unit
  /// when graded(k) and gauss_legendre_unit otherwise.
  const std::vector<double>& node_table(int nodes) const;

  /// Row-major K x (cells+1) table of CDF_k(j / cells), j = 0..cells.
  const std::vector<double>& cdf_table(int cells) const;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> log_beta_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<std::vector<double>>> node_tables_;
  mutable std::map<int, std::unique_ptr<std::vector<double>>> cdf_tables_;
};

class PredictiveDistribution {
 public:
  struct BetaBlock {
    std::shared_ptr<const BetaFamily> family;
    std::vector<double> weights;  // absolute weights within the predictive
  };

  PredictiveDistribution() = default;

  /// The safe-default sentinel: no usable predictive, coefficients are zero.
  static PredictiveDistribution abstain();
  static PredictiveDistribution from_atoms(std::vector<Atom> atoms);
  static PredictiveDistribution from_betas(std::span<const BetaComponent> components);
  static PredictiveDistribution from_family(std::shared_ptr<const BetaFamily> family,
                                            std::vector<double> weights);
  /// w_first * first + w_second * second. Neither input may be the sentinel.
  static PredictiveDistribution mix(double w_first, const PredictiveDistribution& first,
                                    double w_second, const PredictiveDistribution& second);

  bool is_abstain() const noexcept { return abstain_; }
  bool empty() const noexcept { return !abstain_ && atoms_.empty() && blocks_.empty(); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<BetaBlock>& beta_blocks() const noexcept { return blocks_; }
  /// Flattened (a, b, weight) list over all beta blocks, zero weights skipped.
  std::vector<BetaComponent> beta_components() const;

  double total_weight() const;
  double mean() const;

  /// Throws std::invalid_argument unless weights are positive, sum to one
  /// within `tol`, and atom locations lie in [0,1].
  void validate(double tol = 1e-12) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<BetaBlock> blocks_;
  bool abstain_ = false;
};

/// A predictive flattened to a signed discrete measure on [0,1].
///
/// Beta components are integrated as E f = f(0)(1-m) + f(1) m + E[f - l_f],
/// where l_f is the chord of f through (0, f(0)) and (1, f(1)); the remainder
/// vanishes at both endpoints, which tames the x^(a-1) singularities, and is
/// integrated by Gauss-Legendre. Everything is linear in f, so the mixture
/// collapses to weights on {0, nodes, 1} plus the original atoms.
struct ScoreMeasure {
  std::vector<double> x;  // sorted, unique
  std::vector<double> w;  // may carry tiny negative quadrature weights
  bool abstain = false;

  bool empty() const noexcept { return !abstain && x.empty(); }
  /// True when every location coincides with mu (all mass at the candidate).
  bool degenerate_at(double mu) const noexcept;
  double mean() const noexcept;
};

ScoreMeasure compile(const PredictiveDistribution& pred, int nodes = kDefaultQuadratureNodes);

}  // namespace bacs
