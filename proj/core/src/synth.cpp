#include "heavytail/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heavytail/generator.hpp"

namespace heavytail {

void CauchyMixtureSpec::validate() const {
  if (components.empty()) {
    throw std::invalid_argument("CauchyMixtureSpec: needs at least one component");
  }
  double weight_sum = 0.0;
  for (const auto& c : components) {
    if (!(c.scale > 0.0)) {
      throw std::invalid_argument("CauchyMixtureSpec: scales must be positive");
    }
    if (c.weight < 0.0) {
      throw std::invalid_argument("CauchyMixtureSpec: weights must be nonnegative");
    }
    weight_sum += c.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("CauchyMixtureSpec: weights must sum to 1");
  }
}

CauchyMixtureSpec CauchyMixtureSpec::default_two_component() {
  CauchyMixtureSpec spec;
  spec.components = {{-5.0, 1.0, 0.5}, {5.0, 1.0, 0.5}};
  return spec;
}

double cauchy_quantile(double u, double location, double scale) {
  return location + scale * std::tan(std::numbers::pi * (u - 0.5));
}

namespace {

double draw_cauchy(double location, double scale, Rng& rng) {
  // uniform01 is (0, 1]; u == 1 maps to tan(pi/2) and is rejected, matching
  // the open-interval convention.
  for (;;) {
    const double u = rng.uniform01();
    if (u != 1.0) return cauchy_quantile(u, location, scale);
  }
}

}  // namespace

SampleMatrix sample_cauchy(std::size_t n, double location, double scale, Rng& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("sample_cauchy: scale must be positive");
  SampleMatrix out(n, 1);
  for (std::size_t i = 0; i < n; ++i) out(i, 0) = draw_cauchy(location, scale, rng);
  return out;
}

SampleMatrix sample_cauchy_mixture(const CauchyMixtureSpec& spec, std::size_t n,
                                   Rng& rng) {
  spec.validate();
  SampleMatrix out(n, 1);
  const bool single = spec.components.size() == 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pick = 0;
    if (!single) {
      const double u = rng.uniform01();
      double acc = 0.0;
      pick = spec.components.size() - 1;
      for (std::size_t c = 0; c < spec.components.size(); ++c) {
        acc += spec.components[c].weight;
        if (u <= acc) {
          pick = c;
          break;
        }
      }
    }
    const auto& comp = spec.components[pick];
    out(i, 0) = draw_cauchy(comp.location, comp.scale, rng);
  }
  return out;
}

std::array<double, 2> joint2d_row(double a, double b) {
  return {a + b, signed_power(a - b, 0.5)};
}

SampleMatrix sample_joint2d(std::size_t n, Rng& rng) {
  SampleMatrix out(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = draw_cauchy(0.0, 1.0, rng);
    const double b = draw_cauchy(0.0, 1.0, rng);
    const auto row = joint2d_row(a, b);
    out(i, 0) = row[0];
    out(i, 1) = row[1];
  }
  return out;
}

std::vector<double> manifold_transform(const ManifoldSpec& spec,
                                       std::span<const double> y) {
  const std::size_t d = spec.ambient_dim();
  const std::size_t latent = spec.latent_dim();
  if (y.size() != latent) {
    throw std::invalid_argument("manifold_transform: latent dimension mismatch");
  }
  const Matrix& c = spec.c_matrix();
  const auto& t = spec.exponents();
  std::vector<double> x(d);
  for (std::size_t r = 0; r < d; ++r) {
    double cy = 0.0;
    for (std::size_t j = 0; j < latent; ++j) cy += c(r, j) * y[j];
    x[r] = signed_power(cy, t[r]);
  }
  return x;
}

ManifoldSample sample_highd_manifold(std::size_t latent_dim, std::size_t ambient_dim,
                                     std::size_t n, std::uint64_t seed) {
  if (!(latent_dim >= 1 && latent_dim < ambient_dim)) {
    throw std::invalid_argument(
        "sample_highd_manifold: needs 1 <= latent_dim < ambient_dim");
  }
  Rng base(seed);
  Rng rng_c = base.split(streams::kManifoldC);
  Rng rng_t = base.split(streams::kManifoldT);
  Rng rng_rows = base.split(streams::kManifoldRows);

  Matrix c(ambient_dim, latent_dim);
  for (double& v : c.data()) v = rng_c.normal();
  std::vector<double> t(ambient_dim);
  for (double& v : t) v = 0.5 + 2.5 * rng_t.uniform01();

  ManifoldSpec spec(std::move(c), std::move(t));
  SampleMatrix samples(n, ambient_dim);
  std::vector<double> y(latent_dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : y) v = draw_cauchy(0.0, 1.0, rng_rows);
    const auto x = manifold_transform(spec, y);
    auto dst = samples.row(i);
    for (std::size_t r = 0; r < ambient_dim; ++r) dst[r] = x[r];
  }
  return {std::move(samples), std::move(spec)};
}

}  // namespace heavytail
