#pragma once

#include "heavytail/matrix.hpp"
#include "heavytail/metric.hpp"

namespace heavytail {

struct EnergyOptions {
  // The within-real term is constant in the generator parameters; keeping
  // it makes reported losses comparable across runs. Skipping it is a
  // training-time optimization only.
  bool include_real_within = true;
};

// Minibatch energy statistic 2 E d(X,Y) - E d(X,X') - E d(Y,Y'):
// V-statistic (all n*m pairs) for the cross term, U-statistic (distinct
// ordered pairs) within each set. The convention is fixed so the
// brute-force oracle tests are exact.
//
// Reductions run in row order regardless of thread count, so results are
// bit-identical under set_thread_count.
double energy_distance(const SampleMatrix& gen, const SampleMatrix& real,
                       const MetricSpec& metric, const EnergyOptions& opts = {});

// d(energy)/d(gen row i) =
//   (2/(n m)) sum_j grad d(gen_i, real_j)
//   - (2/(n(n-1))) sum_{i' != i} grad d(gen_i, gen_i').
// Finite everywhere via the metric epsilon clamp.
SampleMatrix energy_distance_grad(const SampleMatrix& gen, const SampleMatrix& real,
                                  const MetricSpec& metric);

// Mean absolute difference of ascending order statistics: the 1-D
// Euclidean transport cost between equal-size samples.
double wasserstein1_1d(const SampleMatrix& a, const SampleMatrix& b);

}  // namespace heavytail
