#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "heavytail/eval.hpp"
#include "heavytail/matrix.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

struct CauchyComponent {
  double location = 0.0;
  double scale = 1.0;
  double weight = 1.0;
};

struct CauchyMixtureSpec {
  std::vector<CauchyComponent> components;

  void validate() const;  // scales > 0, weights positive and summing to 1

  // Two standard-scale components at locations -5 and +5, equal weights.
  static CauchyMixtureSpec default_two_component();
};

// location + scale * tan(pi (u - 1/2))
double cauchy_quantile(double u, double location, double scale);

SampleMatrix sample_cauchy(std::size_t n, double location, double scale, Rng& rng);

SampleMatrix sample_cauchy_mixture(const CauchyMixtureSpec& spec, std::size_t n,
                                   Rng& rng);

// One row of the 2-D joint distribution from latent Cauchy draws a, b:
// (a + b, sign(a - b)|a - b|^(1/2)). Exposed so tests can inject a and b.
std::array<double, 2> joint2d_row(double a, double b);

SampleMatrix sample_joint2d(std::size_t n, Rng& rng);

// x_k = signed_power((C y)_k, t_k) for a latent vector y.
std::vector<double> manifold_transform(const ManifoldSpec& spec,
                                       std::span<const double> y);

struct ManifoldSample {
  SampleMatrix samples;  // n x ambient_dim
  ManifoldSpec spec;
};

// C entries i.i.d. standard normal (d x c, row-major draw order), t entries
// i.i.d. uniform over [0.5, 3], latent rows i.i.d. standard Cauchy; all
// three streams derive from the one seed.
ManifoldSample sample_highd_manifold(std::size_t latent_dim, std::size_t ambient_dim,
                                     std::size_t n, std::uint64_t seed);

}  // namespace heavytail
