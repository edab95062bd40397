#pragma once

#include "heavytail/matrix.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

// |xi| below this uses the exponential branch; avoids catastrophic
// cancellation in (u^-xi - 1)/xi.
inline constexpr double kGpdBranchThreshold = 1e-8;

// Shape and scale of the generalized Pareto distribution. xi = 0 selects
// the exponential branch; xi > 0 gives polynomially decaying tails.
struct GpdParams {
  double xi = 0.0;
  double sigma = 1.0;
};

// Survival function S(z) = (1 + xi z / sigma)^(-1/xi), exp(-z/sigma) on the
// exponential branch. Defined for z >= 0; monotone non-increasing, S(0) = 1.
double gpd_ccdf(double z, const GpdParams& p);

// Inverse of the unit-scale survival function: the z with S(z; xi, 1) = u.
// u must lie in (0, 1]; u -> 0 runs off to the infinite quantile.
double gpd_quantile(double u, double xi);

// n i.i.d. unit-scale GPD draws by inverse transform on uniform (0,1]
// variates. Deterministic given the rng state.
SampleMatrix sample_gpd(std::size_t n, double xi, Rng& rng);

// Empirical P(X - u <= y | X > u) over a one-column sample:
// #{x : u < x <= u + y} / #{x : x > u}.
double empirical_conditional_excess(const SampleMatrix& samples, double u, double y);

}  // namespace heavytail
