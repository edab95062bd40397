#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "heavytail/matrix.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

// Fully connected ReLU stack with a linear output layer. Piecewise linear
// by construction: no saturating activation is representable, so noise fed
// through the network keeps its tail class.
struct NetSpec {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden_widths;  // at least one hidden layer
  std::size_t output_dim = 1;

  std::size_t layer_count() const { return hidden_widths.size() + 1; }
  void validate() const;

  bool operator==(const NetSpec&) const = default;
};

// weights are (out x in), row-major; one bias per output unit.
struct LayerValues {
  Matrix weights;
  std::vector<double> bias;
};

struct NetParams {
  NetSpec spec;
  std::vector<LayerValues> layers;

  bool all_finite() const;
};

// Gradients shaped like the parameters they belong to.
struct NetGrads {
  std::vector<LayerValues> layers;

  bool all_finite() const;
};

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<LayerValues> m;  // first moments, shaped like the params
  std::vector<LayerValues> v;  // second moments
};

// Fan-in uniform init: weights from (-sqrt(6/fan_in), sqrt(6/fan_in)],
// biases zero. Layers are filled in order, weights row-major; the draw
// order is part of the determinism contract.
NetParams net_init(const NetSpec& spec, Rng& rng);

// x = W_L relu( ... relu(W_1 z + b_1) ... ) + b_L, one row per sample.
Matrix net_forward(const NetParams& params, const Matrix& z);

// Exact gradients of sum_i <upstream_i, f(z_i)> with respect to every
// weight and bias. The ReLU subgradient at exactly 0 is taken as 0.
NetGrads net_backward(const NetParams& params, const Matrix& z, const Matrix& upstream);

AdamState adam_init(const NetParams& params);

// Standard bias-corrected first/second moment update, in place.
void adam_step(NetParams& params, const NetGrads& grads, AdamState& state, double lr);

// Strictly-positive pre-activation mask per hidden layer for one input;
// two inputs in the same linear region have equal patterns.
std::vector<std::vector<bool>> relu_pattern(const NetParams& params,
                                            std::span<const double> z);

// Product of layer Frobenius norms: an upper bound on the network's
// Lipschitz constant under the Euclidean metric.
double lipschitz_upper_bound(const NetParams& params);

// ||f(0)|| + lipschitz_upper_bound * input_radius. No output can leave this
// ball when the noise is confined to one of the given radius.
double output_norm_bound(const NetParams& params, double input_radius);

}  // namespace heavytail
