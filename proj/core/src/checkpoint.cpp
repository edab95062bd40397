#include "heavytail/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "heavytail/errors.hpp"

namespace heavytail {

namespace {

using nlohmann::json;

const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::uniform01:
      return "uniform01";
    case NoiseKind::standard_normal:
      return "standard_normal";
    case NoiseKind::gpd:
      return "gpd";
  }
  return "standard_normal";
}

NoiseKind noise_kind_from(const std::string& s) {
  if (s == "uniform01") return NoiseKind::uniform01;
  if (s == "standard_normal") return NoiseKind::standard_normal;
  if (s == "gpd") return NoiseKind::gpd;
  throw DataError("unknown noise kind: " + s);
}

const char* transform_kind_name(TransformKind k) {
  switch (k) {
    case TransformKind::identity:
      return "identity";
    case TransformKind::exp_shift:
      return "exp_shift";
    case TransformKind::signed_power:
      return "signed_power";
  }
  return "identity";
}

TransformKind transform_kind_from(const std::string& s) {
  if (s == "identity") return TransformKind::identity;
  if (s == "exp_shift") return TransformKind::exp_shift;
  if (s == "signed_power") return TransformKind::signed_power;
  throw DataError("unknown transform kind: " + s);
}

const char* metric_kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::euclidean:
      return "euclidean";
    case MetricKind::bounded:
      return "bounded";
    case MetricKind::root:
      return "root";
  }
  return "euclidean";
}

MetricKind metric_kind_from(const std::string& s) {
  if (s == "euclidean") return MetricKind::euclidean;
  if (s == "bounded") return MetricKind::bounded;
  if (s == "root") return MetricKind::root;
  throw DataError("unknown metric kind: " + s);
}

json gspec_to_json(const GeneratorSpec& g) {
  json j;
  j["noise"] = {{"kind", noise_kind_name(g.noise.kind)},
                {"dim", g.noise.dim},
                {"xi", g.noise.xi}};
  j["net"] = {{"input_dim", g.net.input_dim},
              {"hidden_widths", g.net.hidden_widths},
              {"output_dim", g.net.output_dim}};
  json transform = json::array();
  for (const auto& t : g.transform) {
    transform.push_back({{"kind", transform_kind_name(t.kind)}, {"beta", t.beta}});
  }
  j["transform"] = std::move(transform);
  j["loss_metric"] = {{"kind", metric_kind_name(g.loss_metric.kind)},
                      {"alpha", g.loss_metric.alpha},
                      {"gamma", g.loss_metric.gamma},
                      {"epsilon", g.loss_metric.epsilon}};
  j["loss_space"] = g.loss_space == LossSpace::log ? "log" : "data";
  return j;
}

GeneratorSpec gspec_from_json(const json& j) {
  GeneratorSpec g;
  const auto& jn = j.at("noise");
  g.noise.kind = noise_kind_from(jn.at("kind").get<std::string>());
  g.noise.dim = jn.at("dim").get<std::size_t>();
  g.noise.xi = jn.at("xi").get<double>();
  const auto& net = j.at("net");
  g.net.input_dim = net.at("input_dim").get<std::size_t>();
  g.net.hidden_widths = net.at("hidden_widths").get<std::vector<std::size_t>>();
  g.net.output_dim = net.at("output_dim").get<std::size_t>();
  for (const auto& tj : j.at("transform")) {
    DimTransform t;
    t.kind = transform_kind_from(tj.at("kind").get<std::string>());
    t.beta = tj.at("beta").get<double>();
    g.transform.push_back(t);
  }
  const auto& mj = j.at("loss_metric");
  g.loss_metric.kind = metric_kind_from(mj.at("kind").get<std::string>());
  g.loss_metric.alpha = mj.at("alpha").get<double>();
  g.loss_metric.gamma = mj.at("gamma").get<double>();
  g.loss_metric.epsilon = mj.at("epsilon").get<double>();
  g.loss_space =
      j.at("loss_space").get<std::string>() == "log" ? LossSpace::log : LossSpace::data;
  g.validate();
  return g;
}

json layers_to_json(const std::vector<LayerValues>& layers, const char* wkey,
                    const char* bkey) {
  json arr = json::array();
  for (const auto& l : layers) {
    arr.push_back({{wkey, l.weights.data()}, {bkey, l.bias}});
  }
  return arr;
}

std::vector<LayerValues> layers_from_json(const json& arr, const NetSpec& spec,
                                          const char* wkey, const char* bkey) {
  std::vector<LayerValues> layers;
  std::vector<std::size_t> out_dims = spec.hidden_widths;
  out_dims.push_back(spec.output_dim);
  if (arr.size() != out_dims.size()) throw DataError("checkpoint: layer count mismatch");
  std::size_t in = spec.input_dim;
  for (std::size_t l = 0; l < arr.size(); ++l) {
    LayerValues lv;
    lv.weights = Matrix(out_dims[l], in);
    auto flat = arr[l].at(wkey).get<std::vector<double>>();
    if (flat.size() != out_dims[l] * in) throw DataError("checkpoint: weight size mismatch");
    lv.weights.data() = std::move(flat);
    lv.bias = arr[l].at(bkey).get<std::vector<double>>();
    if (lv.bias.size() != out_dims[l]) throw DataError("checkpoint: bias size mismatch");
    layers.push_back(std::move(lv));
    in = out_dims[l];
  }
  return layers;
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& ck) {
  json j;
  j["format"] = "heavytail-checkpoint";
  j["version"] = 1;
  j["generator"] = gspec_to_json(ck.gspec);
  j["params"] = layers_to_json(ck.params.layers, "weights", "bias");
  j["adam"] = {{"beta1", ck.adam.beta1},
               {"beta2", ck.adam.beta2},
               {"epsilon", ck.adam.epsilon},
               {"step", ck.adam.step},
               {"m", layers_to_json(ck.adam.m, "weights", "bias")},
               {"v", layers_to_json(ck.adam.v, "weights", "bias")}};
  j["step"] = ck.step;
  j["normalization_scale"] = ck.normalization_scale;
  j["train_context"] = {{"seed", ck.seed},
                        {"run_index", ck.run_index},
                        {"learning_rate", ck.learning_rate},
                        {"validation_noise_count", ck.validation_noise_count},
                        {"best_val_loss", ck.best_val_loss},
                        {"best_iteration", ck.best_iteration}};
  return j.dump(2);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint json: ") + e.what());
  }
  try {
    Checkpoint ck;
    if (j.at("format").get<std::string>() != "heavytail-checkpoint") {
      throw DataError("not a heavytail checkpoint");
    }
    ck.gspec = gspec_from_json(j.at("generator"));
    ck.params.spec = ck.gspec.net;
    ck.params.layers = layers_from_json(j.at("params"), ck.gspec.net, "weights", "bias");
    const auto& aj = j.at("adam");
    ck.adam.beta1 = aj.at("beta1").get<double>();
    ck.adam.beta2 = aj.at("beta2").get<double>();
    ck.adam.epsilon = aj.at("epsilon").get<double>();
    ck.adam.step = aj.at("step").get<std::int64_t>();
    ck.adam.m = layers_from_json(aj.at("m"), ck.gspec.net, "weights", "bias");
    ck.adam.v = layers_from_json(aj.at("v"), ck.gspec.net, "weights", "bias");
    ck.step = j.at("step").get<std::int64_t>();
    ck.normalization_scale = j.at("normalization_scale").get<std::vector<double>>();
    const auto& tc = j.at("train_context");
    ck.seed = tc.at("seed").get<std::uint64_t>();
    ck.run_index = tc.at("run_index").get<std::size_t>();
    ck.learning_rate = tc.at("learning_rate").get<double>();
    ck.validation_noise_count = tc.at("validation_noise_count").get<std::size_t>();
    ck.best_val_loss = tc.at("best_val_loss").get<double>();
    ck.best_iteration = tc.at("best_iteration").get<std::int64_t>();
    return ck;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint json missing fields: ") + e.what());
  }
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << checkpoint_to_json(ck) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return checkpoint_from_json(text);
}

}  // namespace heavytail
