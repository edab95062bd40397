#include "heavytail/tail_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "heavytail/errors.hpp"

namespace heavytail {

double hill_estimator(std::span<const double> samples, std::size_t k) {
  const std::size_t n = samples.size();
  if (k < 1 || k >= n) {
    throw std::invalid_argument("hill_estimator: k must satisfy 1 <= k < n");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!(v > 0.0)) throw std::domain_error("hill_estimator: samples must be positive");
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const double pivot = sorted[k];  // X_(k+1)
  double acc = 0.0;
  // Log of the ratio rather than a difference of logs: exact under
  // power-of-two rescaling of the data.
  for (std::size_t i = 0; i < k; ++i) acc += std::log(sorted[i] / pivot);
  return acc / static_cast<double>(k);
}

std::size_t default_hill_k(std::size_t m) {
  const auto k = static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(m), 2.0 / 3.0)));
  return std::clamp<std::size_t>(k, 1, m > 1 ? m - 1 : 1);
}

TailEstimate estimate_tail_index(const SampleMatrix& samples, TailSide side,
                                 std::optional<std::size_t> k) {
  if (samples.cols() != 1) {
    throw std::invalid_argument("estimate_tail_index: expects an n x 1 sample");
  }
  std::vector<double> retained;
  retained.reserve(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    const double x = samples(i, 0);
    switch (side) {
      case TailSide::positive:
        if (x > 0.0) retained.push_back(x);
        break;
      case TailSide::negative:
        if (x < 0.0) retained.push_back(-x);
        break;
      case TailSide::magnitude:
        if (x != 0.0) retained.push_back(std::abs(x));
        break;
    }
  }
  const std::size_t m = retained.size();
  if (m < kTailMinSamples) {
    throw DataError("estimate_tail_index: fewer than " +
                    std::to_string(kTailMinSamples) + " samples retained on the " +
                    std::string(tail_side_name(side)) + " side");
  }
  TailEstimate est;
  est.side = side;
  est.n = m;
  est.k_used = k.value_or(default_hill_k(m));
  est.xi_raw = hill_estimator(retained, est.k_used);
  est.xi_hat = std::clamp(est.xi_raw, kTailClampMin, kTailClampMax);
  return est;
}

const char* tail_side_name(TailSide side) {
  switch (side) {
    case TailSide::positive:
      return "positive";
    case TailSide::negative:
      return "negative";
    case TailSide::magnitude:
      return "magnitude";
  }
  return "magnitude";
}

}  // namespace heavytail
