#include "tilt_kernel.hpp"

#include <cmath>

namespace bacs::detail {

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
#define BACS_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define BACS_CLONES
#endif

BACS_CLONES
TiltSums tilt_sums(const double* xs, const double* cs, double* e, std::size_t k, double gamma,
                   double shift) {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double v = cs[j] * std::exp(gamma * xs[j] - shift);
    e[j] = v;
    s0 += v;
    s1 += v * xs[j];
    s2 += v * xs[j] * xs[j];
  }
  return {s0, s1, s2};
}

BACS_CLONES
void accumulate_tilted(const double* xs, const double* cs, double* mass, std::size_t k,
                       double gamma, double base, double scale) {
  for (std::size_t j = 0; j < k; ++j) mass[j] += scale * cs[j] * std::exp(gamma * xs[j] + base);
}

}  // namespace bacs::detail
