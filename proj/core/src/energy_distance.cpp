#include "heavytail/energy_distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "heavytail/parallel.hpp"

namespace heavytail {

namespace {

void check_pair(const SampleMatrix& gen, const SampleMatrix& real) {
  if (gen.cols() != real.cols()) {
    throw std::invalid_argument("energy_distance: dimension mismatch");
  }
  if (gen.rows() < 2 || real.rows() < 2) {
    throw std::invalid_argument("energy_distance: both samples need at least 2 rows");
  }
}

// Sum of d(a_i, b_j) over all j, per row i, then reduced in row order.
double cross_sum(const SampleMatrix& a, const SampleMatrix& b, const MetricSpec& m) {
  std::vector<double> row_sums(a.rows(), 0.0);
  parallel_for_rows(a.rows(), [&](std::size_t i) {
    const auto ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < b.rows(); ++j) s += metric_eval(m, ai, b.row(j));
    row_sums[i] = s;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total;
}

// Sum of d(a_i, a_j) over ordered pairs i != j; each unordered pair is
// visited twice so every row stays independent of the others.
double within_sum(const SampleMatrix& a, const MetricSpec& m) {
  std::vector<double> row_sums(a.rows(), 0.0);
  parallel_for_rows(a.rows(), [&](std::size_t i) {
    const auto ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j) {
      if (j == i) continue;
      s += metric_eval(m, ai, a.row(j));
    }
    row_sums[i] = s;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total;
}

}  // namespace

double energy_distance(const SampleMatrix& gen, const SampleMatrix& real,
                       const MetricSpec& metric, const EnergyOptions& opts) {
  check_pair(gen, real);
  const double n = static_cast<double>(gen.rows());
  const double m = static_cast<double>(real.rows());
  double value = 2.0 * cross_sum(gen, real, metric) / (n * m) -
                 within_sum(gen, metric) / (n * (n - 1.0));
  if (opts.include_real_within) {
    value -= within_sum(real, metric) / (m * (m - 1.0));
  }
  return value;
}

SampleMatrix energy_distance_grad(const SampleMatrix& gen, const SampleMatrix& real,
                                  const MetricSpec& metric) {
  check_pair(gen, real);
  const std::size_t n = gen.rows();
  const std::size_t m = real.rows();
  const std::size_t d = gen.cols();
  const double cross_coef = 2.0 / (static_cast<double>(n) * static_cast<double>(m));
  const double within_coef =
      2.0 / (static_cast<double>(n) * (static_cast<double>(n) - 1.0));

  SampleMatrix grads(n, d, 0.0);
  parallel_for_rows(n, [&](std::size_t i) {
    const auto gi = gen.row(i);
    auto out = grads.row(i);
    std::vector<double> g(d);
    for (std::size_t j = 0; j < m; ++j) {
      metric_grad_x(metric, gi, real.row(j), g);
      for (std::size_t c = 0; c < d; ++c) out[c] += cross_coef * g[c];
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      metric_grad_x(metric, gi, gen.row(j), g);
      for (std::size_t c = 0; c < d; ++c) out[c] -= within_coef * g[c];
    }
  });
  return grads;
}

double wasserstein1_1d(const SampleMatrix& a, const SampleMatrix& b) {
  if (a.cols() != 1 || b.cols() != 1) {
    throw std::invalid_argument("wasserstein1_1d: expects n x 1 samples");
  }
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("wasserstein1_1d: sample counts must match");
  }
  std::vector<double> sa = a.data();
  std::vector<double> sb = b.data();
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) total += std::abs(sa[i] - sb[i]);
  return total / static_cast<double>(sa.size());
}

}  // namespace heavytail
