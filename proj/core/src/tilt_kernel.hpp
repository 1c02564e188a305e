#pragma once

// Hot loops of the tilt solver. Built in their own translation unit with
// relaxed floating-point flags so the exponentials vectorise. Callers
// guarantee every exponent is finite and <= 0.

#include <cstddef>

namespace bacs::detail {

struct TiltSums {
  double s0;  // sum c_j e_j
  double s1;  // sum c_j e_j x_j
  double s2;  // sum c_j e_j x_j^2
};

/// e_j = c_j exp(gamma x_j - shift), stored in `e`, and the three moments.
TiltSums tilt_sums(const double* xs, const double* cs, double* e, std::size_t k, double gamma,
                   double shift);

/// mass_j += scale c_j exp(gamma x_j + base).
void accumulate_tilted(const double* xs, const double* cs, double* mass, std::size_t k,
                       double gamma, double base, double scale);

}  // namespace bacs::detail
