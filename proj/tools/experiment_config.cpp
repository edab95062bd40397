#include "experiment_config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "heavytail/csv.hpp"
#include "heavytail/errors.hpp"

namespace heavytail::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw std::invalid_argument("config: " + path + ": " + why);
}

double require_positive(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0)) bad(path, "must be positive");
  return v;
}

std::size_t require_count(const json& j, const std::string& path, std::size_t min = 1) {
  if (!j.is_number_unsigned() && !j.is_number_integer()) bad(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < static_cast<std::int64_t>(min)) {
    bad(path, "must be >= " + std::to_string(min));
  }
  return static_cast<std::size_t>(v);
}

void parse_data(const json& j, DataSpec& out) {
  const std::string kind = j.value("kind", "cauchy_mixture");
  if (kind == "csv") {
    out.kind = DataKind::csv;
    if (!j.contains("csv")) bad("data.csv", "required for kind=csv");
    const auto& c = j.at("csv");
    if (!c.contains("path") || !c.at("path").is_string()) bad("data.csv.path", "expected a string");
    out.csv_path = c.at("path").get<std::string>();
    if (c.contains("columns")) {
      for (const auto& col : c.at("columns")) {
        out.csv_columns.push_back(require_count(col, "data.csv.columns[]", 0));
      }
    }
    if (c.contains("delimiter")) {
      const auto d = c.at("delimiter").get<std::string>();
      if (d.size() != 1) bad("data.csv.delimiter", "expected a single character");
      out.delimiter = d[0];
    }
  } else if (kind == "cauchy_mixture") {
    out.kind = DataKind::cauchy_mixture;
    if (j.contains("cauchy_mixture")) {
      const auto& m = j.at("cauchy_mixture");
      if (!m.contains("components") || !m.at("components").is_array() ||
          m.at("components").empty()) {
        bad("data.cauchy_mixture.components", "expected a non-empty array");
      }
      out.mixture.components.clear();
      std::size_t i = 0;
      for (const auto& comp : m.at("components")) {
        const std::string p = "data.cauchy_mixture.components[" + std::to_string(i++) + "]";
        CauchyComponent c;
        if (!comp.contains("location")) bad(p + ".location", "required");
        c.location = comp.at("location").get<double>();
        c.scale = require_positive(comp.value("scale", json(1.0)), p + ".scale");
        c.weight = require_positive(comp.value("weight", json(1.0)), p + ".weight");
        out.mixture.components.push_back(c);
      }
      try {
        out.mixture.validate();
      } catch (const std::invalid_argument& e) {
        bad("data.cauchy_mixture", e.what());
      }
    }
  } else if (kind == "joint2d") {
    out.kind = DataKind::joint2d;
  } else if (kind == "manifold") {
    out.kind = DataKind::manifold;
    if (j.contains("manifold")) {
      const auto& m = j.at("manifold");
      out.latent_dim = require_count(m.value("latent_dim", json(5)), "data.manifold.latent_dim");
      out.ambient_dim = require_count(m.value("ambient_dim", json(20)), "data.manifold.ambient_dim");
      if (out.latent_dim >= out.ambient_dim) {
        bad("data.manifold", "latent_dim must be smaller than ambient_dim");
      }
    }
  } else {
    bad("data.kind", "expected csv|cauchy_mixture|joint2d|manifold");
  }
  if (out.kind != DataKind::csv) {
    out.n = require_count(j.value("n", json(100000)), "data.n", 10);
  }
}

void parse_generator(const json& j, GeneratorConfig& out) {
  out.variant = j.value("variant", "pareto");
  if (out.variant != "pareto" && out.variant != "normal" && out.variant != "lognormal" &&
      out.variant != "uniform" && out.variant != "custom") {
    bad("generator.variant", "expected pareto|normal|lognormal|uniform|custom");
  }
  if (j.contains("noise_dim")) {
    out.noise_dim = require_count(j.at("noise_dim"), "generator.noise_dim");
  }
  if (j.contains("hidden_widths")) {
    if (!j.at("hidden_widths").is_array() || j.at("hidden_widths").empty()) {
      bad("generator.hidden_widths", "expected a non-empty array");
    }
    out.hidden_widths.clear();
    for (const auto& w : j.at("hidden_widths")) {
      out.hidden_widths.push_back(require_count(w, "generator.hidden_widths[]"));
    }
  }
  if (j.contains("gamma")) {
    const auto& g = j.at("gamma");
    if (g.is_string() && g.get<std::string>() == "auto") {
      out.gamma_auto = true;
    } else if (g.is_number()) {
      const double v = g.get<double>();
      if (!(v >= 1.0)) bad("generator.gamma", "must be >= 1 or \"auto\"");
      out.gamma = v;
    } else {
      bad("generator.gamma", "expected a number or \"auto\"");
    }
  }
  if (j.contains("tail_k")) {
    out.tail_k = require_count(j.at("tail_k"), "generator.tail_k");
  }
  if (out.variant == "custom" && !j.contains("custom")) {
    bad("generator.custom", "required for variant=custom");
  }
  if (j.contains("custom")) {
    // Full GeneratorSpec: reuse the checkpoint field layout.
    const auto& c = j.at("custom");
    GeneratorSpec g;
    const std::string noise_kind = c.at("noise").at("kind").get<std::string>();
    if (noise_kind == "uniform01") g.noise.kind = NoiseKind::uniform01;
    else if (noise_kind == "standard_normal") g.noise.kind = NoiseKind::standard_normal;
    else if (noise_kind == "gpd") g.noise.kind = NoiseKind::gpd;
    else bad("generator.custom.noise.kind", "unknown noise kind");
    g.noise.dim = require_count(c.at("noise").at("dim"), "generator.custom.noise.dim");
    g.noise.xi = c.at("noise").value("xi", 1.0);
    g.net.input_dim = g.noise.dim;
    g.net.hidden_widths.clear();
    for (const auto& w : c.at("net").at("hidden_widths")) {
      g.net.hidden_widths.push_back(require_count(w, "generator.custom.net.hidden_widths[]"));
    }
    g.net.output_dim = require_count(c.at("net").at("output_dim"), "generator.custom.net.output_dim");
    for (const auto& tj : c.at("transform")) {
      DimTransform t;
      const std::string kind = tj.at("kind").get<std::string>();
      if (kind == "identity") t.kind = TransformKind::identity;
      else if (kind == "exp_shift") t.kind = TransformKind::exp_shift;
      else if (kind == "signed_power") t.kind = TransformKind::signed_power;
      else bad("generator.custom.transform[].kind", "unknown transform kind");
      t.beta = tj.value("beta", 1.0);
      g.transform.push_back(t);
    }
    const auto& mj = c.at("loss_metric");
    const std::string metric_kind = mj.at("kind").get<std::string>();
    if (metric_kind == "euclidean") g.loss_metric = MetricSpec::euclidean();
    else if (metric_kind == "bounded") g.loss_metric = MetricSpec::bounded(mj.value("alpha", 1.0));
    else if (metric_kind == "root") g.loss_metric = MetricSpec::root(mj.value("gamma", 2.0));
    else bad("generator.custom.loss_metric.kind", "unknown metric kind");
    g.loss_space = c.value("loss_space", "data") == "log" ? LossSpace::log : LossSpace::data;
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      bad("generator.custom", e.what());
    }
    out.custom = std::move(g);
  }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: malformed json: ") + e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
      bad("seed", "expected an integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("out_dir")) {
    if (!j.at("out_dir").is_string()) bad("out_dir", "expected a string");
    cfg.out_dir = j.at("out_dir").get<std::string>();
  }
  if (!j.contains("data")) bad("data", "required");
  parse_data(j.at("data"), cfg.data);
  if (j.contains("split")) {
    const auto& s = j.at("split");
    cfg.split.train_fraction = require_positive(s.value("train_fraction", json(0.05)),
                                                "split.train_fraction");
    cfg.split.val_fraction = require_positive(s.value("val_fraction", json(0.05)),
                                              "split.val_fraction");
    if (cfg.split.train_fraction + cfg.split.val_fraction >= 1.0) {
      bad("split", "train_fraction + val_fraction must be below 1");
    }
  }
  if (j.contains("generator")) parse_generator(j.at("generator"), cfg.generator);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    cfg.batch_size = require_count(t.value("batch_size", json(256)), "train.batch_size", 2);
    cfg.iterations = require_count(t.value("iterations", json(20000)), "train.iterations");
    if (t.contains("learning_rates")) {
      if (!t.at("learning_rates").is_array() || t.at("learning_rates").empty()) {
        bad("train.learning_rates", "expected a non-empty array");
      }
      cfg.learning_rates.clear();
      for (const auto& lr : t.at("learning_rates")) {
        cfg.learning_rates.push_back(require_positive(lr, "train.learning_rates[]"));
      }
    }
    cfg.validation_every =
        require_count(t.value("validation_every", json(500)), "train.validation_every");
    cfg.validation_noise =
        require_count(t.value("validation_noise", json(4096)), "train.validation_noise", 2);
    if (t.contains("include_real_within")) {
      if (!t.at("include_real_within").is_boolean()) {
        bad("train.include_real_within", "expected a boolean");
      }
      cfg.include_real_within = t.at("include_real_within").get<bool>();
    }
  }
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    cfg.eval.n_generated =
        require_count(e.value("n_generated", json(100000)), "eval.n_generated", 2);
    cfg.eval.mdist_samples =
        require_count(e.value("mdist_samples", json(10000)), "eval.mdist_samples", 0);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return experiment_config_from_json(text);
}

LoadedData load_dataset(const DataSpec& spec, std::uint64_t seed) {
  LoadedData out;
  switch (spec.kind) {
    case DataKind::csv: {
      CsvOptions opts;
      opts.delimiter = spec.delimiter;
      auto result = load_csv(spec.csv_path, spec.csv_columns, opts);
      out.data = std::move(result.data);
      out.csv_skipped_rows = result.skipped_rows;
      break;
    }
    case DataKind::cauchy_mixture: {
      Rng rng(Rng::mix(seed, streams::kData));
      out.data = sample_cauchy_mixture(spec.mixture, spec.n, rng);
      break;
    }
    case DataKind::joint2d: {
      Rng rng(Rng::mix(seed, streams::kData));
      out.data = sample_joint2d(spec.n, rng);
      break;
    }
    case DataKind::manifold: {
      auto sample = sample_highd_manifold(spec.latent_dim, spec.ambient_dim, spec.n,
                                          Rng::mix(seed, streams::kData));
      out.data = std::move(sample.samples);
      out.manifold = std::move(sample.spec);
      break;
    }
  }
  return out;
}

BuiltGenerator build_generator_from_config(const GeneratorConfig& cfg,
                                           const SampleMatrix& train_split,
                                           const SampleMatrix& val_split) {
  const std::size_t d = train_split.cols();
  NetSpec net;
  net.input_dim = cfg.noise_dim;
  net.hidden_widths = cfg.hidden_widths;
  net.output_dim = d;

  BuiltGenerator out;
  out.resolved_variant = cfg.variant;
  if (cfg.variant == "custom") {
    out.gspec = *cfg.custom;
    if (out.gspec.net.output_dim != d) {
      throw DataError("custom generator output dim does not match data columns");
    }
    return out;
  }
  if (cfg.variant == "uniform") {
    out.gspec = make_uniform_generator(net);
    return out;
  }
  if (cfg.variant == "normal") {
    out.gspec = make_normal_generator(net);
    return out;
  }
  if (cfg.variant == "lognormal") {
    bool positive = true;
    for (double v : train_split.data()) positive = positive && v > 0.0;
    for (double v : val_split.data()) positive = positive && v > 0.0;
    out.gspec = make_lognormal_generator(net, positive ? LossSpace::log : LossSpace::data);
    out.resolved_variant = positive ? "lognormal(log-space)" : "lognormal(data-space)";
    return out;
  }
  // pareto
  out.xi_hats.reserve(d);
  for (std::size_t c = 0; c < d; ++c) {
    const SampleMatrix col = Matrix::from_column(train_split.column(c));
    out.xi_hats.push_back(estimate_tail_index(col, TailSide::magnitude, cfg.tail_k).xi_hat);
  }
  std::optional<double> gamma = cfg.gamma;
  if (!gamma && !cfg.gamma_auto && d == 1) gamma = 2.0;  // univariate default
  out.gspec = build_pareto_generator(out.xi_hats, net, gamma);
  return out;
}

}  // namespace heavytail::cli
