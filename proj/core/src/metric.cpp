#include "heavytail/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace heavytail {

MetricSpec MetricSpec::euclidean() {
  MetricSpec m;
  m.kind = MetricKind::euclidean;
  return m;
}

MetricSpec MetricSpec::bounded(double alpha) {
  MetricSpec m;
  m.kind = MetricKind::bounded;
  m.alpha = alpha;
  m.validate();
  return m;
}

MetricSpec MetricSpec::root(double gamma) {
  MetricSpec m;
  m.kind = MetricKind::root;
  m.gamma = gamma;
  m.validate();
  return m;
}

void MetricSpec::validate() const {
  if (kind == MetricKind::bounded && !(alpha > 0.0)) {
    throw std::invalid_argument("MetricSpec: bounded metric needs alpha > 0");
  }
  if (kind == MetricKind::root && !(gamma >= 1.0)) {
    throw std::invalid_argument("MetricSpec: root metric needs gamma >= 1");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("MetricSpec: epsilon must be positive");
}

namespace {

double pair_norm(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("metric: dimension mismatch between x and y");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

double metric_eval(const MetricSpec& m, std::span<const double> x,
                   std::span<const double> y) {
  const double r = pair_norm(x, y);
  switch (m.kind) {
    case MetricKind::euclidean:
      return r;
    case MetricKind::bounded:
      return r / (m.alpha + r);
    case MetricKind::root:
      return std::pow(r, 1.0 / m.gamma);
  }
  return r;
}

void metric_grad_x(const MetricSpec& m, std::span<const double> x,
                   std::span<const double> y, std::span<double> out) {
  const double r_true = pair_norm(x, y);
  if (out.size() != x.size()) {
    throw std::invalid_argument("metric_grad_x: output dimension mismatch");
  }
  const double r = std::max(r_true, m.epsilon);
  double radial = 0.0;  // d(metric)/dr at the clamped distance
  switch (m.kind) {
    case MetricKind::euclidean:
      radial = 1.0;
      break;
    case MetricKind::bounded:
      radial = m.alpha / ((m.alpha + r) * (m.alpha + r));
      break;
    case MetricKind::root:
      radial = (1.0 / m.gamma) * std::pow(r, 1.0 / m.gamma - 1.0);
      break;
  }
  const double scale = radial / r;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * (x[i] - y[i]);
}

}  // namespace heavytail
