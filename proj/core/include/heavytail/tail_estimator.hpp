#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "heavytail/matrix.hpp"

namespace heavytail {

enum class TailSide { positive, negative, magnitude };

inline constexpr double kTailClampMin = 0.05;
inline constexpr double kTailClampMax = 10.0;
inline constexpr std::size_t kTailMinSamples = 20;

// Hill estimate of the tail index from the top order statistics of a
// side-filtered sample. xi_hat is clamped to [kTailClampMin, kTailClampMax]
// so downstream power transforms stay valid; xi_raw keeps the unclamped
// value for diagnostics.
struct TailEstimate {
  double xi_hat = 0.0;
  double xi_raw = 0.0;
  std::size_t k_used = 0;
  std::size_t n = 0;  // samples retained after side filtering
  TailSide side = TailSide::magnitude;
};

// Mean log-ratio of the k largest samples to the (k+1)-th largest,
// X_(1) >= ... >= X_(n). All samples must be strictly positive.
double hill_estimator(std::span<const double> samples, std::size_t k);

// ceil(m^(2/3)), clamped into [1, m-1].
std::size_t default_hill_k(std::size_t m);

// Filters to the requested side (positive values; negated negatives;
// magnitudes with zeros dropped), runs the Hill estimator, and clamps.
TailEstimate estimate_tail_index(const SampleMatrix& samples, TailSide side,
                                 std::optional<std::size_t> k = std::nullopt);

const char* tail_side_name(TailSide side);

}  // namespace heavytail
