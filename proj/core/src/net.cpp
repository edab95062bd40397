#include "heavytail/net.hpp"

#include <cmath>
#include <stdexcept>

namespace heavytail {

void NetSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("NetSpec: input and output dims must be >= 1");
  }
  if (hidden_widths.empty()) {
    throw std::invalid_argument("NetSpec: at least one hidden layer is required");
  }
  for (std::size_t w : hidden_widths) {
    if (w < 1) throw std::invalid_argument("NetSpec: hidden widths must be >= 1");
  }
}

namespace {

bool layers_finite(const std::vector<LayerValues>& layers) {
  for (const auto& l : layers) {
    if (!l.weights.all_finite()) return false;
    for (double b : l.bias) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

std::vector<std::size_t> layer_out_dims(const NetSpec& spec) {
  std::vector<std::size_t> dims = spec.hidden_widths;
  dims.push_back(spec.output_dim);
  return dims;
}

void check_params_shape(const NetParams& params) {
  const auto dims = layer_out_dims(params.spec);
  if (params.layers.size() != dims.size()) {
    throw std::invalid_argument("NetParams: layer count does not match spec");
  }
  std::size_t in = params.spec.input_dim;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    if (params.layers[l].weights.rows() != dims[l] ||
        params.layers[l].weights.cols() != in ||
        params.layers[l].bias.size() != dims[l]) {
      throw std::invalid_argument("NetParams: layer shape does not match spec");
    }
    in = dims[l];
  }
}

}  // namespace

bool NetParams::all_finite() const { return layers_finite(layers); }

bool NetGrads::all_finite() const { return layers_finite(layers); }

NetParams net_init(const NetSpec& spec, Rng& rng) {
  spec.validate();
  NetParams params;
  params.spec = spec;
  std::size_t in = spec.input_dim;
  for (std::size_t out : layer_out_dims(spec)) {
    LayerValues layer;
    layer.weights = Matrix(out, in);
    layer.bias.assign(out, 0.0);
    const double bound = std::sqrt(6.0 / static_cast<double>(in));
    for (double& w : layer.weights.data()) w = bound * (2.0 * rng.uniform01() - 1.0);
    params.layers.push_back(std::move(layer));
    in = out;
  }
  return params;
}

Matrix net_forward(const NetParams& params, const Matrix& z) {
  check_params_shape(params);
  if (z.cols() != params.spec.input_dim) {
    throw std::invalid_argument("net_forward: input dimension mismatch");
  }
  const std::size_t layer_count = params.layers.size();
  Matrix out(z.rows(), params.spec.output_dim);
  std::vector<double> cur, next;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const auto zr = z.row(r);
    cur.assign(zr.begin(), zr.end());
    for (std::size_t l = 0; l < layer_count; ++l) {
      const auto& layer = params.layers[l];
      const std::size_t rows = layer.weights.rows();
      next.assign(rows, 0.0);
      for (std::size_t j = 0; j < rows; ++j) {
        const auto wj = layer.weights.row(j);
        double s = layer.bias[j];
        for (std::size_t i = 0; i < wj.size(); ++i) s += wj[i] * cur[i];
        next[j] = (l + 1 < layer_count && s <= 0.0) ? 0.0 : s;
      }
      cur.swap(next);
    }
    auto dst = out.row(r);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = cur[c];
  }
  return out;
}

NetGrads net_backward(const NetParams& params, const Matrix& z, const Matrix& upstream) {
  check_params_shape(params);
  if (z.cols() != params.spec.input_dim) {
    throw std::invalid_argument("net_backward: input dimension mismatch");
  }
  if (upstream.rows() != z.rows() || upstream.cols() != params.spec.output_dim) {
    throw std::invalid_argument("net_backward: upstream shape mismatch");
  }
  const std::size_t layer_count = params.layers.size();

  NetGrads grads;
  grads.layers.resize(layer_count);
  for (std::size_t l = 0; l < layer_count; ++l) {
    grads.layers[l].weights =
        Matrix(params.layers[l].weights.rows(), params.layers[l].weights.cols());
    grads.layers[l].bias.assign(params.layers[l].bias.size(), 0.0);
  }

  // Per-sample recompute of the forward pass, keeping pre-activations for
  // the ReLU masks; batch accumulation stays in row order.
  std::vector<std::vector<double>> activations(layer_count + 1);
  std::vector<std::vector<double>> preacts(layer_count);
  std::vector<double> delta, delta_prev;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const auto zr = z.row(r);
    activations[0].assign(zr.begin(), zr.end());
    for (std::size_t l = 0; l < layer_count; ++l) {
      const auto& layer = params.layers[l];
      const std::size_t rows = layer.weights.rows();
      preacts[l].assign(rows, 0.0);
      activations[l + 1].assign(rows, 0.0);
      for (std::size_t j = 0; j < rows; ++j) {
        const auto wj = layer.weights.row(j);
        double s = layer.bias[j];
        for (std::size_t i = 0; i < wj.size(); ++i) s += wj[i] * activations[l][i];
        preacts[l][j] = s;
        activations[l + 1][j] = (l + 1 < layer_count && s <= 0.0) ? 0.0 : s;
      }
    }

    const auto ur = upstream.row(r);
    delta.assign(ur.begin(), ur.end());
    for (std::size_t l = layer_count; l-- > 0;) {
      auto& glayer = grads.layers[l];
      const auto& layer = params.layers[l];
      const std::size_t rows = layer.weights.rows();
      for (std::size_t j = 0; j < rows; ++j) {
        const double dj = delta[j];
        glayer.bias[j] += dj;
        auto gw = glayer.weights.row(j);
        const auto& a = activations[l];
        for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += dj * a[i];
      }
      if (l == 0) break;
      delta_prev.assign(layer.weights.cols(), 0.0);
      for (std::size_t j = 0; j < rows; ++j) {
        const double dj = delta[j];
        const auto wj = layer.weights.row(j);
        for (std::size_t i = 0; i < wj.size(); ++i) delta_prev[i] += dj * wj[i];
      }
      for (std::size_t i = 0; i < delta_prev.size(); ++i) {
        if (preacts[l - 1][i] <= 0.0) delta_prev[i] = 0.0;
      }
      delta.swap(delta_prev);
    }
  }
  return grads;
}

AdamState adam_init(const NetParams& params) {
  AdamState state;
  state.m.resize(params.layers.size());
  state.v.resize(params.layers.size());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    state.m[l].weights = Matrix(layer.weights.rows(), layer.weights.cols());
    state.m[l].bias.assign(layer.bias.size(), 0.0);
    state.v[l].weights = Matrix(layer.weights.rows(), layer.weights.cols());
    state.v[l].bias.assign(layer.bias.size(), 0.0);
  }
  return state;
}

namespace {

void adam_update(std::span<double> p, std::span<const double> g, std::span<double> m,
                 std::span<double> v, const AdamState& s, double lr, double bc1,
                 double bc2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + s.epsilon);
  }
}

}  // namespace

void adam_step(NetParams& params, const NetGrads& grads, AdamState& state, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("adam_step: learning rate must be positive");
  if (grads.layers.size() != params.layers.size() ||
      state.m.size() != params.layers.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    adam_update(params.layers[l].weights.data(), grads.layers[l].weights.data(),
                state.m[l].weights.data(), state.v[l].weights.data(), state, lr, bc1,
                bc2);
    adam_update(params.layers[l].bias, grads.layers[l].bias, state.m[l].bias,
                state.v[l].bias, state, lr, bc1, bc2);
  }
}

std::vector<std::vector<bool>> relu_pattern(const NetParams& params,
                                            std::span<const double> z) {
  check_params_shape(params);
  if (z.size() != params.spec.input_dim) {
    throw std::invalid_argument("relu_pattern: input dimension mismatch");
  }
  const std::size_t layer_count = params.layers.size();
  std::vector<std::vector<bool>> pattern(layer_count - 1);
  std::vector<double> cur(z.begin(), z.end()), next;
  for (std::size_t l = 0; l + 1 < layer_count; ++l) {
    const auto& layer = params.layers[l];
    const std::size_t rows = layer.weights.rows();
    pattern[l].resize(rows);
    next.assign(rows, 0.0);
    for (std::size_t j = 0; j < rows; ++j) {
      const auto wj = layer.weights.row(j);
      double s = layer.bias[j];
      for (std::size_t i = 0; i < wj.size(); ++i) s += wj[i] * cur[i];
      pattern[l][j] = s > 0.0;
      next[j] = s > 0.0 ? s : 0.0;
    }
    cur.swap(next);
  }
  return pattern;
}

double lipschitz_upper_bound(const NetParams& params) {
  double bound = 1.0;
  for (const auto& layer : params.layers) {
    double frob_sq = 0.0;
    for (double w : layer.weights.data()) frob_sq += w * w;
    bound *= std::sqrt(frob_sq);
  }
  return bound;
}

double output_norm_bound(const NetParams& params, double input_radius) {
  Matrix zero(1, params.spec.input_dim, 0.0);
  const Matrix f0 = net_forward(params, zero);
  double norm_sq = 0.0;
  for (double v : f0.data()) norm_sq += v * v;
  return std::sqrt(norm_sq) + lipschitz_upper_bound(params) * input_radius;
}

}  // namespace heavytail
