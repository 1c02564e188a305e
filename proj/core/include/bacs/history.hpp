#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bacs {

/// Observations X_1..X_n in arrival order, each in [0,1].
class History {
 public:
  History() = default;
  explicit History(std::vector<double> observations);

  void push(double x);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double mean() const noexcept;

 private:
  std::vector<double> values_;
  double sum_ = 0.0;
};

/// Distinct observed values in increasing order with their multiplicities.
struct CompressedHistory {
  std::vector<double> values;
  std::vector<double> counts;
  std::size_t n = 0;

  static CompressedHistory from(std::span<const double> observations);
};

}  // namespace bacs
