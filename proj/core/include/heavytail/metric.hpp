#pragma once

#include <span>

namespace heavytail {

enum class MetricKind { euclidean, bounded, root };

// Ground metric on R^d shared by the training loss and the diagnostics.
//
//   euclidean:  ||x - y||
//   bounded:    ||x - y|| / (alpha + ||x - y||), always < 1
//   root:       ||x - y||^(1/gamma), gamma >= 1; concave, so heavy-tailed
//               laws keep finite first moments whenever gamma exceeds
//               their tail index
//
// epsilon clamps the distance inside gradients only; metric values are
// exact.
struct MetricSpec {
  MetricKind kind = MetricKind::euclidean;
  double alpha = 1.0;     // bounded only
  double gamma = 1.0;     // root only
  double epsilon = 1e-6;  // gradient singularity clamp

  static MetricSpec euclidean();
  static MetricSpec bounded(double alpha);
  static MetricSpec root(double gamma);

  void validate() const;
};

double metric_eval(const MetricSpec& m, std::span<const double> x,
                   std::span<const double> y);

// d(metric)/dx with the pair distance clamped below at epsilon; finite
// everywhere, exactly zero when x == y.
void metric_grad_x(const MetricSpec& m, std::span<const double> x,
                   std::span<const double> y, std::span<double> out);

}  // namespace heavytail
