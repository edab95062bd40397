#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heavytail/matrix.hpp"
#include "heavytail/tail_estimator.hpp"

namespace heavytail {

struct CcdfPoint {
  double value = 0.0;
  double exceedance_prob = 0.0;
};

// Descending sample values paired with empirical exceedance probabilities
// i/n; the raw material of the log-log tail plots.
using CcdfCurve = std::vector<CcdfPoint>;

CcdfCurve ccdf_export(const SampleMatrix& samples);  // n x 1

// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the pooled
// sample points, right-continuous empirical CDFs.
double ks_statistic(const SampleMatrix& a, const SampleMatrix& b);

struct AreaResult {
  double area = 0.0;
  std::size_t floor_events = 0;  // non-positive values floored, both sets
};

// Weighted L1 distance between log-log empirical CCDF curves:
//   sum_i |ln real_(i) - ln gen_(ceil(i m / n))| ln((i+1)/i)
// over the n descending real samples. Values <= 0 are floored at 1e-12 of
// the positive median of their own set (and counted) so n stays fixed.
// Each set needs at least 2 positive values.
AreaResult loglog_area(std::span<const double> real_vals,
                       std::span<const double> gen_vals);

enum class SideCoverage { both, positive_only, negative_only };

struct TwoSidedArea {
  double area = 0.0;  // mean of the available per-side areas
  SideCoverage coverage = SideCoverage::both;
  std::optional<double> positive_area;
  std::optional<double> negative_area;
  std::size_t floor_events = 0;
};

// Mean of loglog_area over positive parts and negated negative parts of
// two one-column samples. A side with fewer than 2 usable values in either
// set is dropped and flagged in `coverage` rather than treated as an error.
TwoSidedArea two_sided_area(const SampleMatrix& real, const SampleMatrix& gen);

const char* side_coverage_name(SideCoverage c);

// Linear manifold col(C) in a power-warped ambient space: points are
// x = pow(C y, t) elementwise. Construction orthonormalizes C (modified
// Gram-Schmidt, run twice) and rejects rank-deficient inputs.
class ManifoldSpec {
 public:
  ManifoldSpec(Matrix c, std::vector<double> t);  // c is d x latent

  std::size_t ambient_dim() const { return c_.rows(); }
  std::size_t latent_dim() const { return c_.cols(); }
  const Matrix& c_matrix() const { return c_; }
  const std::vector<double>& exponents() const { return t_; }

  // Euclidean distance between the power-unwarped point and its projection
  // onto col(C).
  double distance(std::span<const double> x_hat) const;

 private:
  Matrix c_;               // d x latent
  std::vector<double> t_;  // length d, entries > 0
  Matrix q_;               // orthonormal basis of col(C), d x latent
};

double manifold_distance(std::span<const double> x_hat, const ManifoldSpec& spec);

// Mean natural-log manifold distance across rows; the log keeps the
// summary finite under heavy-tailed excursions.
double mean_log_mdist(const SampleMatrix& samples, const ManifoldSpec& spec);

std::string manifold_spec_to_json(const ManifoldSpec& spec);
ManifoldSpec manifold_spec_from_json(const std::string& text);
void save_manifold_spec(const std::string& path, const ManifoldSpec& spec);
ManifoldSpec load_manifold_spec(const std::string& path);

// Per-column comparison bundle between a real and a generated sample set.
struct ColumnMetrics {
  std::size_t column = 0;
  double ks = 0.0;
  std::optional<double> upper_area;  // positive-side area when available
  TwoSidedArea two_sided;
  std::optional<TailEstimate> gen_tail_magnitude;
};

struct EvalMetrics {
  std::size_t n_real = 0;
  std::size_t n_generated = 0;
  std::vector<ColumnMetrics> columns;
  double mean_ks = 0.0;
  double mean_two_sided_area = 0.0;
  std::size_t total_floor_events = 0;
  std::optional<double> mean_log_mdist;
  std::optional<std::size_t> mdist_samples;
};

EvalMetrics evaluate_samples(const SampleMatrix& real, const SampleMatrix& gen,
                             const ManifoldSpec* manifold = nullptr,
                             std::size_t mdist_samples = 0);

std::string eval_metrics_to_json(const EvalMetrics& m);

void save_ccdf_csv(const std::string& path, const CcdfCurve& curve);

}  // namespace heavytail
