#include "bacs/history.hpp"

#include <algorithm>
#include <stdexcept>

namespace bacs {

History::History(std::vector<double> observations) {
  values_.reserve(observations.size());
  for (double x : observations) push(x);
}

void History::push(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("observation must lie in [0,1]");
  values_.push_back(x);
  sum_ += x;
}

double History::mean() const noexcept {
  return values_.empty() ? 0.0 : sum_ / static_cast<double>(values_.size());
}

CompressedHistory CompressedHistory::from(std::span<const double> observations) {
  std::vector<double> sorted(observations.begin(), observations.end());
  std::sort(sorted.begin(), sorted.end());
  CompressedHistory out;
  out.n = sorted.size();
  for (double v : sorted) {
    if (!out.values.empty() && out.values.back() == v) {
      out.counts.back() += 1.0;
    } else {
      out.values.push_back(v);
      out.counts.push_back(1.0);
    }
  }
  return out;
}

}  // namespace bacs
