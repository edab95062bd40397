#include "heavytail/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heavytail/tail_estimator.hpp"

namespace heavytail {

void GeneratorSpec::validate() const {
  net.validate();
  loss_metric.validate();
  if (noise.dim < 1) throw std::invalid_argument("GeneratorSpec: noise dim must be >= 1");
  if (noise.kind == NoiseKind::gpd && !std::isfinite(noise.xi)) {
    throw std::invalid_argument("GeneratorSpec: gpd noise xi must be finite");
  }
  if (noise.dim != net.input_dim) {
    throw std::invalid_argument("GeneratorSpec: noise dim must equal net input dim");
  }
  if (transform.size() != net.output_dim) {
    throw std::invalid_argument(
        "GeneratorSpec: transform arity must equal net output dim");
  }
  for (const auto& t : transform) {
    if (t.kind == TransformKind::signed_power && !(t.beta > 0.0)) {
      throw std::invalid_argument("GeneratorSpec: signed_power beta must be positive");
    }
    if (loss_space == LossSpace::log && t.kind != TransformKind::exp_shift) {
      throw std::invalid_argument(
          "GeneratorSpec: log loss space requires exp_shift outputs");
    }
  }
}

double signed_power(double x, double beta) {
  return std::copysign(std::pow(std::abs(x), beta), x);
}

SampleMatrix sample_noise(const NoiseSpec& spec, std::size_t n, Rng& rng) {
  SampleMatrix out(n, spec.dim);
  auto& data = out.data();
  switch (spec.kind) {
    case NoiseKind::uniform01:
      for (double& v : data) v = rng.uniform01();
      break;
    case NoiseKind::standard_normal:
      for (double& v : data) v = rng.normal();
      break;
    case NoiseKind::gpd:
      for (double& v : data) v = gpd_quantile(rng.uniform01(), spec.xi);
      break;
  }
  return out;
}

void apply_transform(const OutputTransform& transform, Matrix& net_out,
                     GenStats* stats) {
  if (transform.size() != net_out.cols()) {
    throw std::invalid_argument("apply_transform: arity mismatch");
  }
  for (std::size_t r = 0; r < net_out.rows(); ++r) {
    auto row = net_out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& t = transform[c];
      switch (t.kind) {
        case TransformKind::identity:
          break;
        case TransformKind::exp_shift: {
          double arg = row[c] - 1.0;
          if (arg > kExpCap) {
            arg = kExpCap;
            if (stats) ++stats->exp_cap_events;
          }
          row[c] = std::exp(arg);
          break;
        }
        case TransformKind::signed_power:
          row[c] = signed_power(row[c], t.beta);
          break;
      }
    }
  }
}

SampleMatrix generate(const GeneratorSpec& gspec, const NetParams& params,
                      std::size_t n, Rng& rng, GenStats* stats) {
  gspec.validate();
  const Matrix noise = sample_noise(gspec.noise, n, rng);
  Matrix out = net_forward(params, noise);
  apply_transform(gspec.transform, out, stats);
  return out;
}

GeneratorSpec build_pareto_generator(std::span<const double> xi_hats,
                                     const NetSpec& net_shape,
                                     std::optional<double> gamma_override) {
  if (xi_hats.empty()) {
    throw std::invalid_argument("build_pareto_generator: xi_hats must be non-empty");
  }
  if (xi_hats.size() != net_shape.output_dim) {
    throw std::invalid_argument(
        "build_pareto_generator: one tail estimate per output dimension required");
  }
  double max_xi = 0.0;
  for (double xi : xi_hats) {
    if (!(xi >= kTailClampMin && xi <= kTailClampMax)) {
      throw std::invalid_argument(
          "build_pareto_generator: tail estimates must lie in the clamp range");
    }
    max_xi = std::max(max_xi, xi);
  }
  GeneratorSpec g;
  g.noise = NoiseSpec{NoiseKind::gpd, net_shape.input_dim, 1.0};
  g.net = net_shape;
  g.transform.reserve(xi_hats.size());
  for (double xi : xi_hats) {
    g.transform.push_back(DimTransform{TransformKind::signed_power, xi});
  }
  g.loss_metric = MetricSpec::root(gamma_override.value_or(max_xi + 1.0));
  g.loss_space = LossSpace::data;
  g.validate();
  return g;
}

GeneratorSpec make_uniform_generator(const NetSpec& net_shape) {
  GeneratorSpec g;
  g.noise = NoiseSpec{NoiseKind::uniform01, net_shape.input_dim, 0.0};
  g.net = net_shape;
  g.transform.assign(net_shape.output_dim, DimTransform{});
  g.loss_metric = MetricSpec::euclidean();
  g.validate();
  return g;
}

GeneratorSpec make_normal_generator(const NetSpec& net_shape) {
  GeneratorSpec g;
  g.noise = NoiseSpec{NoiseKind::standard_normal, net_shape.input_dim, 0.0};
  g.net = net_shape;
  g.transform.assign(net_shape.output_dim, DimTransform{});
  g.loss_metric = MetricSpec::euclidean();
  g.validate();
  return g;
}

GeneratorSpec make_lognormal_generator(const NetSpec& net_shape, LossSpace loss_space) {
  GeneratorSpec g;
  g.noise = NoiseSpec{NoiseKind::standard_normal, net_shape.input_dim, 0.0};
  g.net = net_shape;
  g.transform.assign(net_shape.output_dim, DimTransform{TransformKind::exp_shift, 1.0});
  g.loss_metric = MetricSpec::euclidean();
  g.loss_space = loss_space;
  g.validate();
  return g;
}

Matrix loss_view(const GeneratorSpec& gspec, const Matrix& net_out, GenStats* stats) {
  Matrix view = net_out;
  if (gspec.loss_space == LossSpace::data) {
    apply_transform(gspec.transform, view, stats);
    return view;
  }
  // log space: ln(exp(x - 1)) = x - 1, saturating with the exp cap
  for (double& v : view.data()) {
    if (v - 1.0 > kExpCap) {
      v = kExpCap;
      if (stats) ++stats->exp_cap_events;
    } else {
      v = v - 1.0;
    }
  }
  return view;
}

NetGrads generate_grad_chain(const GeneratorSpec& gspec, const NetParams& params,
                             const Matrix& noise_batch, const Matrix& loss_grads) {
  if (!loss_grads.all_finite()) {
    throw std::invalid_argument("generate_grad_chain: loss gradients must be finite");
  }
  if (loss_grads.cols() != gspec.net.output_dim) {
    throw std::invalid_argument("generate_grad_chain: gradient arity mismatch");
  }
  const Matrix net_out = net_forward(params, noise_batch);
  Matrix upstream = loss_grads;
  for (std::size_t r = 0; r < upstream.rows(); ++r) {
    auto urow = upstream.row(r);
    const auto xrow = net_out.row(r);
    for (std::size_t c = 0; c < urow.size(); ++c) {
      const double x = xrow[c];
      double jac = 1.0;
      if (gspec.loss_space == LossSpace::log) {
        jac = (x - 1.0 > kExpCap) ? 0.0 : 1.0;
      } else {
        const auto& t = gspec.transform[c];
        switch (t.kind) {
          case TransformKind::identity:
            jac = 1.0;
            break;
          case TransformKind::exp_shift:
            jac = (x - 1.0 > kExpCap) ? 0.0 : std::exp(x - 1.0);
            break;
          case TransformKind::signed_power: {
            const double mag = std::max(std::abs(x), kPowerGradClamp);
            jac = t.beta * std::pow(mag, t.beta - 1.0);
            break;
          }
        }
      }
      urow[c] *= jac;
    }
  }
  return net_backward(params, noise_batch, upstream);
}

}  // namespace heavytail
