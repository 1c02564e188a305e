#pragma once

#include "bacs/law.hpp"
#include "bacs/predictive.hpp"

namespace bacs {

inline constexpr int kDefaultCdfCells = 4096;

/// Integral over [0,1] of |F_p - F_q|. Exact when both sides are atoms only.
/// Beta components use their CDF at `cells` equally spaced points, linearly
/// interpolated; atom jumps are kept exact. The sentinel has no distribution
/// and is rejected.
double wasserstein1(const PredictiveDistribution& p, const PredictiveDistribution& q,
                    int cells = kDefaultCdfCells);
double wasserstein1(const PredictiveDistribution& p, const TrueLaw& q, int cells = kDefaultCdfCells);
double wasserstein1(const TrueLaw& p, const TrueLaw& q, int cells = kDefaultCdfCells);

}  // namespace bacs
