#pragma once

#include <optional>
#include <span>
#include <vector>

#include "heavytail/gpd.hpp"
#include "heavytail/metric.hpp"
#include "heavytail/net.hpp"

namespace heavytail {

enum class NoiseKind { uniform01, standard_normal, gpd };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::standard_normal;
  std::size_t dim = 1;
  double xi = 1.0;  // gpd only

  bool operator==(const NoiseSpec&) const = default;
};

enum class TransformKind { identity, exp_shift, signed_power };

// Per-output-dimension map applied after the network:
//   identity:      x
//   exp_shift:     exp(x - 1), exponent capped at kExpCap
//   signed_power:  sign(x)|x|^beta, which multiplies the tail index of its
//                  input by beta
struct DimTransform {
  TransformKind kind = TransformKind::identity;
  double beta = 1.0;  // signed_power only, > 0

  bool operator==(const DimTransform&) const = default;
};

using OutputTransform = std::vector<DimTransform>;

inline constexpr double kExpCap = 700.0;
// |x| floor in the signed-power backward pass; the derivative diverges at 0
// for beta < 1.
inline constexpr double kPowerGradClamp = 1e-6;

enum class LossSpace { data, log };

// One GAN variant: noise prior, network shape, per-dimension output
// transform, and the ground metric/space the energy loss runs in.
struct GeneratorSpec {
  NoiseSpec noise;
  NetSpec net;
  OutputTransform transform;
  MetricSpec loss_metric = MetricSpec::euclidean();
  LossSpace loss_space = LossSpace::data;

  void validate() const;
};

struct GenStats {
  std::size_t exp_cap_events = 0;
};

// sign(x) |x|^beta; odd and strictly monotone.
double signed_power(double x, double beta);

SampleMatrix sample_noise(const NoiseSpec& spec, std::size_t n, Rng& rng);

// Applies the per-dimension transform to raw network outputs in place.
void apply_transform(const OutputTransform& transform, Matrix& net_out,
                     GenStats* stats = nullptr);

// sample_noise -> net_forward -> per-dimension transform.
SampleMatrix generate(const GeneratorSpec& gspec, const NetParams& params,
                      std::size_t n, Rng& rng, GenStats* stats = nullptr);

// Pareto construction: GPD(xi = 1) noise, signed-power exponents equal to
// the per-dimension tail estimates, root metric with gamma = max estimate
// + 1 unless overridden (univariate experiments pin gamma = 2).
GeneratorSpec build_pareto_generator(std::span<const double> xi_hats,
                                     const NetSpec& net_shape,
                                     std::optional<double> gamma_override = std::nullopt);

// Baseline variants sharing the Pareto generator's network shape.
GeneratorSpec make_uniform_generator(const NetSpec& net_shape);
GeneratorSpec make_normal_generator(const NetSpec& net_shape);
GeneratorSpec make_lognormal_generator(const NetSpec& net_shape, LossSpace loss_space);

// Chain rule from d(loss)/d(loss-space samples) back to parameter
// gradients: multiplies by the transform Jacobian (or the log-space map's)
// and calls net_backward.
NetGrads generate_grad_chain(const GeneratorSpec& gspec, const NetParams& params,
                             const Matrix& noise_batch, const Matrix& loss_grads);

// The generated batch as the loss sees it: the transformed samples in data
// space, or (net_out - 1) capped at kExpCap in log space (the exact log of
// the exp_shift output, computed without the intermediate exp).
Matrix loss_view(const GeneratorSpec& gspec, const Matrix& net_out,
                 GenStats* stats = nullptr);

}  // namespace heavytail
