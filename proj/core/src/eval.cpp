#include "heavytail/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "heavytail/errors.hpp"
#include "heavytail/generator.hpp"

namespace heavytail {

namespace {

std::vector<double> sorted_column(const SampleMatrix& m) {
  if (m.cols() != 1) throw std::invalid_argument("expected an n x 1 sample");
  std::vector<double> v = m.data();
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

CcdfCurve ccdf_export(const SampleMatrix& samples) {
  if (samples.cols() != 1) throw std::invalid_argument("ccdf_export: expects n x 1");
  if (samples.rows() == 0) throw std::invalid_argument("ccdf_export: empty sample");
  std::vector<double> v = samples.data();
  std::sort(v.begin(), v.end(), std::greater<double>());
  CcdfCurve curve(v.size());
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    curve[i] = {v[i], static_cast<double>(i + 1) / n};
  }
  return curve;
}

double ks_statistic(const SampleMatrix& a, const SampleMatrix& b) {
  const std::vector<double> sa = sorted_column(a);
  const std::vector<double> sb = sorted_column(b);
  if (sa.empty() || sb.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  // Walk the pooled points; after consuming ties at a point, both empirical
  // CDFs are evaluated right-continuously.
  std::size_t ia = 0, ib = 0;
  double best = 0.0;
  while (ia < sa.size() || ib < sb.size()) {
    double x;
    if (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib])) {
      x = sa[ia];
    } else {
      x = sb[ib];
    }
    while (ia < sa.size() && sa[ia] <= x) ++ia;
    while (ib < sb.size() && sb[ib] <= x) ++ib;
    const double diff =
        std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb);
    best = std::max(best, diff);
  }
  return best;
}

namespace {

// Floors non-positive entries at 1e-12 of the set's positive median;
// returns the number of floored entries. Throws if fewer than 2 entries
// are positive.
std::size_t floor_non_positive(std::vector<double>& vals, const char* which) {
  std::vector<double> positive;
  positive.reserve(vals.size());
  for (double v : vals) {
    if (v > 0.0) positive.push_back(v);
  }
  if (positive.size() < 2) {
    throw std::invalid_argument(std::string("loglog_area: fewer than 2 usable (positive) samples in the ") +
                                which + " set");
  }
  std::size_t events = 0;
  if (positive.size() == vals.size()) return 0;
  std::sort(positive.begin(), positive.end());
  const std::size_t mid = positive.size() / 2;
  const double median = positive.size() % 2 == 1
                            ? positive[mid]
                            : 0.5 * (positive[mid - 1] + positive[mid]);
  const double floor = 1e-12 * median;
  for (double& v : vals) {
    if (!(v > 0.0)) {
      v = floor;
      ++events;
    }
  }
  return events;
}

}  // namespace

AreaResult loglog_area(std::span<const double> real_vals,
                       std::span<const double> gen_vals) {
  std::vector<double> real(real_vals.begin(), real_vals.end());
  std::vector<double> gen(gen_vals.begin(), gen_vals.end());
  if (real.size() < 2 || gen.size() < 2) {
    throw std::invalid_argument("loglog_area: each set needs at least 2 samples");
  }
  AreaResult result;
  result.floor_events += floor_non_positive(real, "real");
  result.floor_events += floor_non_positive(gen, "generated");
  std::sort(real.begin(), real.end(), std::greater<double>());
  std::sort(gen.begin(), gen.end(), std::greater<double>());
  const std::size_t n = real.size();
  const std::size_t m = gen.size();
  double area = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    // Matched quantile in the generated curve: the ceil(i m / n)-th largest.
    const std::size_t j = (i * m + n - 1) / n;
    const double diff = std::abs(std::log(real[i - 1]) - std::log(gen[j - 1]));
    area += diff * std::log(static_cast<double>(i + 1) / static_cast<double>(i));
  }
  result.area = area;
  return result;
}

TwoSidedArea two_sided_area(const SampleMatrix& real, const SampleMatrix& gen) {
  if (real.cols() != 1 || gen.cols() != 1) {
    throw std::invalid_argument("two_sided_area: expects n x 1 samples");
  }
  std::vector<double> real_pos, real_neg, gen_pos, gen_neg;
  for (double v : real.data()) {
    if (v > 0.0) real_pos.push_back(v);
    else if (v < 0.0) real_neg.push_back(-v);
  }
  for (double v : gen.data()) {
    if (v > 0.0) gen_pos.push_back(v);
    else if (v < 0.0) gen_neg.push_back(-v);
  }
  TwoSidedArea out;
  const bool pos_ok = real_pos.size() >= 2 && gen_pos.size() >= 2;
  const bool neg_ok = real_neg.size() >= 2 && gen_neg.size() >= 2;
  if (!pos_ok && !neg_ok) {
    throw std::invalid_argument("two_sided_area: neither side has 2 usable samples in both sets");
  }
  if (pos_ok) {
    const AreaResult r = loglog_area(real_pos, gen_pos);
    out.positive_area = r.area;
    out.floor_events += r.floor_events;
  }
  if (neg_ok) {
    const AreaResult r = loglog_area(real_neg, gen_neg);
    out.negative_area = r.area;
    out.floor_events += r.floor_events;
  }
  if (pos_ok && neg_ok) {
    out.coverage = SideCoverage::both;
    out.area = 0.5 * (*out.positive_area + *out.negative_area);
  } else if (pos_ok) {
    out.coverage = SideCoverage::positive_only;
    out.area = *out.positive_area;
  } else {
    out.coverage = SideCoverage::negative_only;
    out.area = *out.negative_area;
  }
  return out;
}

const char* side_coverage_name(SideCoverage c) {
  switch (c) {
    case SideCoverage::both:
      return "both";
    case SideCoverage::positive_only:
      return "positive_only";
    case SideCoverage::negative_only:
      return "negative_only";
  }
  return "both";
}

ManifoldSpec::ManifoldSpec(Matrix c, std::vector<double> t)
    : c_(std::move(c)), t_(std::move(t)) {
  if (c_.rows() == 0 || c_.cols() == 0 || c_.cols() > c_.rows()) {
    throw std::invalid_argument("ManifoldSpec: C must be d x c with 1 <= c <= d");
  }
  if (t_.size() != c_.rows()) {
    throw std::invalid_argument("ManifoldSpec: t must have one entry per ambient dim");
  }
  for (double e : t_) {
    if (!(e > 0.0)) throw std::invalid_argument("ManifoldSpec: t entries must be positive");
  }
  // Modified Gram-Schmidt, two passes per column for orthogonality at
  // working precision.
  const std::size_t d = c_.rows();
  const std::size_t latent = c_.cols();
  q_ = Matrix(d, latent);
  std::vector<double> col(d);
  for (std::size_t j = 0; j < latent; ++j) {
    double orig_norm_sq = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      col[r] = c_(r, j);
      orig_norm_sq += col[r] * col[r];
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t prev = 0; prev < j; ++prev) {
        double dot = 0.0;
        for (std::size_t r = 0; r < d; ++r) dot += q_(r, prev) * col[r];
        for (std::size_t r = 0; r < d; ++r) col[r] -= dot * q_(r, prev);
      }
    }
    double norm_sq = 0.0;
    for (double v : col) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (!(norm > 1e-10 * std::sqrt(orig_norm_sq)) || norm == 0.0) {
      throw std::invalid_argument("ManifoldSpec: C is rank deficient");
    }
    for (std::size_t r = 0; r < d; ++r) q_(r, j) = col[r] / norm;
  }
}

double ManifoldSpec::distance(std::span<const double> x_hat) const {
  const std::size_t d = c_.rows();
  if (x_hat.size() != d) {
    throw std::invalid_argument("manifold_distance: dimension mismatch");
  }
  std::vector<double> v(d);
  for (std::size_t r = 0; r < d; ++r) v[r] = signed_power(x_hat[r], 1.0 / t_[r]);
  // residual = v - Q (Q^T v)
  std::vector<double> coeffs(c_.cols(), 0.0);
  for (std::size_t j = 0; j < c_.cols(); ++j) {
    double dot = 0.0;
    for (std::size_t r = 0; r < d; ++r) dot += q_(r, j) * v[r];
    coeffs[j] = dot;
  }
  double resid_sq = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    double proj = 0.0;
    for (std::size_t j = 0; j < c_.cols(); ++j) proj += q_(r, j) * coeffs[j];
    const double diff = v[r] - proj;
    resid_sq += diff * diff;
  }
  return std::sqrt(resid_sq);
}

double manifold_distance(std::span<const double> x_hat, const ManifoldSpec& spec) {
  return spec.distance(x_hat);
}

double mean_log_mdist(const SampleMatrix& samples, const ManifoldSpec& spec) {
  if (samples.rows() == 0) throw std::invalid_argument("mean_log_mdist: empty sample");
  double acc = 0.0;
  for (std::size_t r = 0; r < samples.rows(); ++r) {
    // Exact zeros (possible for on-manifold integer cases) are floored at
    // the smallest positive double to keep the log finite.
    const double dist = std::max(spec.distance(samples.row(r)),
                                 std::numeric_limits<double>::min());
    acc += std::log(dist);
  }
  return acc / static_cast<double>(samples.rows());
}

std::string manifold_spec_to_json(const ManifoldSpec& spec) {
  nlohmann::json j;
  j["ambient_dim"] = spec.ambient_dim();
  j["latent_dim"] = spec.latent_dim();
  j["c"] = spec.c_matrix().data();  // row-major d x latent
  j["t"] = spec.exponents();
  return j.dump(2);
}

ManifoldSpec manifold_spec_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const auto d = j.at("ambient_dim").get<std::size_t>();
  const auto latent = j.at("latent_dim").get<std::size_t>();
  Matrix c(d, latent);
  const auto flat = j.at("c").get<std::vector<double>>();
  if (flat.size() != d * latent) throw DataError("manifold spec: C size mismatch");
  c.data() = flat;
  auto t = j.at("t").get<std::vector<double>>();
  return ManifoldSpec(std::move(c), std::move(t));
}

void save_manifold_spec(const std::string& path, const ManifoldSpec& spec) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << manifold_spec_to_json(spec) << "\n";
}

ManifoldSpec load_manifold_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifold spec: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    return manifold_spec_from_json(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed manifold spec " + path + ": " + e.what());
  }
}

EvalMetrics evaluate_samples(const SampleMatrix& real, const SampleMatrix& gen,
                             const ManifoldSpec* manifold, std::size_t mdist_samples) {
  if (real.cols() != gen.cols()) {
    throw std::invalid_argument("evaluate_samples: column count mismatch");
  }
  EvalMetrics metrics;
  metrics.n_real = real.rows();
  metrics.n_generated = gen.rows();
  double ks_acc = 0.0;
  double area_acc = 0.0;
  for (std::size_t c = 0; c < real.cols(); ++c) {
    ColumnMetrics cm;
    cm.column = c;
    const SampleMatrix rc = Matrix::from_column(real.column(c));
    const SampleMatrix gc = Matrix::from_column(gen.column(c));
    cm.ks = ks_statistic(rc, gc);
    cm.two_sided = two_sided_area(rc, gc);
    cm.upper_area = cm.two_sided.positive_area;
    try {
      cm.gen_tail_magnitude = estimate_tail_index(gc, TailSide::magnitude);
    } catch (const DataError&) {
      // Too few nonzero samples; leave the estimate empty.
    }
    ks_acc += cm.ks;
    area_acc += cm.two_sided.area;
    metrics.total_floor_events += cm.two_sided.floor_events;
    metrics.columns.push_back(std::move(cm));
  }
  metrics.mean_ks = ks_acc / static_cast<double>(real.cols());
  metrics.mean_two_sided_area = area_acc / static_cast<double>(real.cols());
  if (manifold != nullptr) {
    const std::size_t take = mdist_samples == 0
                                 ? gen.rows()
                                 : std::min<std::size_t>(mdist_samples, gen.rows());
    Matrix head(take, gen.cols());
    for (std::size_t r = 0; r < take; ++r) {
      const auto src = gen.row(r);
      auto dst = head.row(r);
      std::copy(src.begin(), src.end(), dst.begin());
    }
    metrics.mean_log_mdist = mean_log_mdist(head, *manifold);
    metrics.mdist_samples = take;
  }
  return metrics;
}

std::string eval_metrics_to_json(const EvalMetrics& m) {
  nlohmann::json j;
  j["n_real"] = m.n_real;
  j["n_generated"] = m.n_generated;
  j["mean_ks"] = m.mean_ks;
  j["mean_two_sided_area"] = m.mean_two_sided_area;
  j["total_floor_events"] = m.total_floor_events;
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& cm : m.columns) {
    nlohmann::json cj;
    cj["column"] = cm.column;
    cj["ks"] = cm.ks;
    if (cm.upper_area) cj["upper_area"] = *cm.upper_area;
    cj["two_sided_area"] = cm.two_sided.area;
    cj["side_coverage"] = side_coverage_name(cm.two_sided.coverage);
    if (cm.two_sided.positive_area) cj["positive_area"] = *cm.two_sided.positive_area;
    if (cm.two_sided.negative_area) cj["negative_area"] = *cm.two_sided.negative_area;
    cj["floor_events"] = cm.two_sided.floor_events;
    if (cm.gen_tail_magnitude) {
      cj["gen_tail_xi_hat"] = cm.gen_tail_magnitude->xi_hat;
      cj["gen_tail_k_used"] = cm.gen_tail_magnitude->k_used;
    }
    cols.push_back(std::move(cj));
  }
  j["columns"] = std::move(cols);
  if (m.mean_log_mdist) j["mean_log_mdist"] = *m.mean_log_mdist;
  if (m.mdist_samples) j["mdist_samples"] = *m.mdist_samples;
  return j.dump(2);
}

void save_ccdf_csv(const std::string& path, const CcdfCurve& curve) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "value,exceedance_prob\n";
  out.precision(17);
  for (const auto& p : curve) out << p.value << "," << p.exceedance_prob << "\n";
}

}  // namespace heavytail
