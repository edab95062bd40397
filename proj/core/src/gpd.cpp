#include "heavytail/gpd.hpp"

#include <cmath>
#include <stdexcept>

namespace heavytail {

double gpd_ccdf(double z, const GpdParams& p) {
  if (!(p.sigma > 0.0)) throw std::domain_error("gpd_ccdf: sigma must be positive");
  if (!(z >= 0.0)) throw std::domain_error("gpd_ccdf: z must be nonnegative");
  const double scaled = z / p.sigma;
  if (std::abs(p.xi) < kGpdBranchThreshold) return std::exp(-scaled);
  // exp(-log1p(xi z)/xi) keeps the needed precision near the branch point.
  return std::exp(-std::log1p(p.xi * scaled) / p.xi);
}

double gpd_quantile(double u, double xi) {
  if (!(u > 0.0 && u <= 1.0)) {
    throw std::domain_error("gpd_quantile: u must lie in (0, 1]");
  }
  if (std::abs(xi) < kGpdBranchThreshold) return -std::log(u);
  return std::expm1(-xi * std::log(u)) / xi;
}

SampleMatrix sample_gpd(std::size_t n, double xi, Rng& rng) {
  SampleMatrix out(n, 1);
  for (std::size_t i = 0; i < n; ++i) out(i, 0) = gpd_quantile(rng.uniform01(), xi);
  return out;
}

double empirical_conditional_excess(const SampleMatrix& samples, double u, double y) {
  if (samples.cols() != 1) {
    throw std::invalid_argument("empirical_conditional_excess: expects an n x 1 sample");
  }
  if (!(y >= 0.0)) throw std::domain_error("empirical_conditional_excess: y must be nonnegative");
  std::size_t exceed = 0;
  std::size_t within = 0;
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    const double x = samples(i, 0);
    if (x > u) {
      ++exceed;
      if (x <= u + y) ++within;
    }
  }
  if (exceed == 0) {
    throw std::domain_error("empirical_conditional_excess: no sample exceeds u");
  }
  return static_cast<double>(within) / static_cast<double>(exceed);
}

}  // namespace heavytail
