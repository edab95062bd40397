#include "heavytail/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "heavytail/errors.hpp"

namespace heavytail {

SplitResult split_normalize(const SampleMatrix& data, const SplitSpec& fractions,
                            std::uint64_t seed) {
  if (!(fractions.train_fraction > 0.0 && fractions.train_fraction < 1.0) ||
      !(fractions.val_fraction > 0.0 && fractions.val_fraction < 1.0) ||
      !(fractions.train_fraction + fractions.val_fraction < 1.0)) {
    throw std::invalid_argument("split_normalize: fractions must be in (0,1) and sum below 1");
  }
  const std::size_t n = data.rows();
  const auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * fractions.train_fraction));
  const auto n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * fractions.val_fraction));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= n) {
    throw DataError("split_normalize: not enough rows for non-empty train/val/test splits");
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(Rng::mix(seed, streams::kSplitShuffle));
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = rng.uniform_index(i + 1);
    std::swap(perm[i], perm[j]);
  }

  SplitResult out;
  out.train = data.gather_rows({perm.data(), n_train});
  out.val = data.gather_rows({perm.data() + n_train, n_val});
  out.test = data.gather_rows({perm.data() + n_train + n_val, n - n_train - n_val});

  const std::size_t d = data.cols();
  out.scale.assign(d, 0.0);
  for (std::size_t r = 0; r < out.train.rows(); ++r) {
    const auto row = out.train.row(r);
    for (std::size_t c = 0; c < d; ++c) out.scale[c] += std::abs(row[c]);
  }
  for (std::size_t c = 0; c < d; ++c) {
    out.scale[c] /= static_cast<double>(out.train.rows());
    if (!(out.scale[c] > 0.0)) {
      throw DataError("split_normalize: column " + std::to_string(c) +
                      " has zero mean magnitude in the training split");
    }
  }
  for (Matrix* split : {&out.train, &out.val, &out.test}) {
    for (std::size_t r = 0; r < split->rows(); ++r) {
      auto row = split->row(r);
      for (std::size_t c = 0; c < d; ++c) row[c] /= out.scale[c];
    }
  }
  return out;
}

void TrainConfig::validate() const {
  gspec.validate();
  if (batch_size < 2) throw std::invalid_argument("TrainConfig: batch_size must be >= 2");
  if (iterations < 1) throw std::invalid_argument("TrainConfig: iterations must be >= 1");
  if (learning_rates.empty()) {
    throw std::invalid_argument("TrainConfig: at least one learning rate");
  }
  for (double lr : learning_rates) {
    if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: learning rates must be positive");
  }
  if (validation_every < 1) {
    throw std::invalid_argument("TrainConfig: validation_every must be >= 1");
  }
  if (validation_noise_count < 2) {
    throw std::invalid_argument("TrainConfig: validation noise batch must be >= 2");
  }
}

SampleMatrix real_loss_view(const GeneratorSpec& gspec, const SampleMatrix& data) {
  if (gspec.loss_space == LossSpace::data) return data;
  SampleMatrix view = data;
  for (double& v : view.data()) {
    if (!(v > 0.0)) {
      throw DataError("log-space loss requires strictly positive data");
    }
    v = std::log(v);
  }
  return view;
}

namespace {

Rng run_rng(std::uint64_t seed, std::size_t run_index) {
  return Rng(Rng::mix(seed, streams::kRunBase + run_index));
}

double measure_validation(const GeneratorSpec& gspec, const NetParams& params,
                          const Matrix& val_noise, const Matrix& val_view,
                          GenStats* stats) {
  Matrix out = net_forward(params, val_noise);
  const Matrix gen_view = loss_view(gspec, out, stats);
  return energy_distance(gen_view, val_view, gspec.loss_metric,
                         EnergyOptions{true});
}

}  // namespace

TrainResult train(const TrainConfig& config, const SampleMatrix& train_data,
                  const SampleMatrix& val_data) {
  config.validate();
  const GeneratorSpec& gspec = config.gspec;
  if (train_data.cols() != gspec.net.output_dim ||
      val_data.cols() != gspec.net.output_dim) {
    throw std::invalid_argument("train: data column count must match net output dim");
  }
  if (train_data.rows() < 1) throw std::invalid_argument("train: empty training data");
  if (val_data.rows() < 2) {
    throw std::invalid_argument("train: validation split needs at least 2 rows");
  }

  const Matrix train_view = real_loss_view(gspec, train_data);
  const Matrix val_view = real_loss_view(gspec, val_data);

  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  TrainReport& report = result.report;

  for (std::size_t run = 0; run < config.learning_rates.size(); ++run) {
    const double lr = config.learning_rates[run];
    RunReport rr;
    rr.run_id = run;
    rr.learning_rate = lr;

    Rng base = run_rng(config.seed, run);
    Rng init_rng = base.split(streams::kNetInit);
    Rng noise_rng = base.split(streams::kTrainNoise);
    Rng batch_rng = base.split(streams::kBatchIndex);
    Rng val_noise_rng = base.split(streams::kValidationNoise);

    NetParams params = net_init(gspec.net, init_rng);
    AdamState adam = adam_init(params);
    const Matrix val_noise =
        sample_noise(gspec.noise, config.validation_noise_count, val_noise_rng);

    GenStats stats;
    NetParams run_best_params;
    AdamState run_best_adam;
    std::int64_t run_best_step = 0;

    std::vector<std::size_t> indices(config.batch_size);
    for (std::size_t it = 1; it <= config.iterations; ++it) {
      const Matrix noise = sample_noise(gspec.noise, config.batch_size, noise_rng);
      for (auto& idx : indices) idx = batch_rng.uniform_index(train_view.rows());
      const Matrix real_batch = train_view.gather_rows(indices);

      Matrix net_out = net_forward(params, noise);
      const Matrix gen_view = loss_view(gspec, net_out, &stats);
      const double loss = energy_distance(gen_view, real_batch, gspec.loss_metric,
                                          EnergyOptions{config.include_real_within});
      if (!std::isfinite(loss)) {
        rr.diverged = true;
        rr.diverged_at = static_cast<std::int64_t>(it);
        break;
      }
      const Matrix loss_grads =
          energy_distance_grad(gen_view, real_batch, gspec.loss_metric);
      if (!loss_grads.all_finite()) {
        rr.diverged = true;
        rr.diverged_at = static_cast<std::int64_t>(it);
        break;
      }
      const NetGrads param_grads = generate_grad_chain(gspec, params, noise, loss_grads);
      if (!param_grads.all_finite()) {
        rr.diverged = true;
        rr.diverged_at = static_cast<std::int64_t>(it);
        break;
      }
      adam_step(params, param_grads, adam, lr);

      if (it % config.validation_every == 0 || it == config.iterations) {
        const double val_loss =
            measure_validation(gspec, params, val_noise, val_view, &stats);
        if (!std::isfinite(val_loss)) {
          rr.diverged = true;
          rr.diverged_at = static_cast<std::int64_t>(it);
          break;
        }
        rr.curve.push_back({static_cast<std::int64_t>(it), loss, val_loss});
        if (val_loss < rr.best_val_loss) {
          rr.best_val_loss = val_loss;
          rr.best_iteration = static_cast<std::int64_t>(it);
          run_best_params = params;
          run_best_adam = adam;
          run_best_step = adam.step;
        }
      }
    }
    rr.exp_cap_events = stats.exp_cap_events;
    const bool usable = !rr.diverged && rr.best_iteration >= 0;
    if (usable && rr.best_val_loss < report.best_val_loss) {
      report.best_val_loss = rr.best_val_loss;
      report.best_run_id = run;
      result.best_params = std::move(run_best_params);
      result.best_adam = std::move(run_best_adam);
      result.best_step = run_best_step;
    }
    report.runs.push_back(std::move(rr));
  }

  report.all_diverged = true;
  for (const auto& rr : report.runs) {
    if (!rr.diverged && rr.best_iteration >= 0) report.all_diverged = false;
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double validation_loss(const GeneratorSpec& gspec, const NetParams& params,
                       const SampleMatrix& val_data, std::uint64_t seed,
                       std::size_t run_index, std::size_t validation_noise_count) {
  Rng base = run_rng(seed, run_index);
  Rng val_noise_rng = base.split(streams::kValidationNoise);
  const Matrix val_noise = sample_noise(gspec.noise, validation_noise_count, val_noise_rng);
  const Matrix val_view = real_loss_view(gspec, val_data);
  return measure_validation(gspec, params, val_noise, val_view, nullptr);
}

Checkpoint make_checkpoint(const TrainConfig& config, const TrainResult& result,
                           std::vector<double> normalization_scale) {
  if (result.report.all_diverged) {
    throw std::invalid_argument("make_checkpoint: every run diverged, nothing to save");
  }
  const RunReport& best = result.report.runs[result.report.best_run_id];
  Checkpoint ck;
  ck.gspec = config.gspec;
  ck.params = result.best_params;
  ck.adam = result.best_adam;
  ck.step = result.best_step;
  ck.normalization_scale = std::move(normalization_scale);
  ck.seed = config.seed;
  ck.run_index = best.run_id;
  ck.learning_rate = best.learning_rate;
  ck.validation_noise_count = config.validation_noise_count;
  ck.best_val_loss = best.best_val_loss;
  ck.best_iteration = best.best_iteration;
  return ck;
}

std::string train_report_to_json(const TrainReport& report) {
  nlohmann::json j;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& rr : report.runs) {
    nlohmann::json rj;
    rj["run_id"] = rr.run_id;
    rj["learning_rate"] = rr.learning_rate;
    rj["diverged"] = rr.diverged;
    if (rr.diverged) rj["diverged_at"] = rr.diverged_at;
    if (rr.best_iteration >= 0) {
      rj["best_val_loss"] = rr.best_val_loss;
      rj["best_iteration"] = rr.best_iteration;
    }
    rj["exp_cap_events"] = rr.exp_cap_events;
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& p : rr.curve) {
      curve.push_back({{"iteration", p.iteration},
                       {"train_loss", p.train_loss},
                       {"val_loss", p.val_loss}});
    }
    rj["curve"] = std::move(curve);
    runs.push_back(std::move(rj));
  }
  j["runs"] = std::move(runs);
  j["all_diverged"] = report.all_diverged;
  if (!report.all_diverged) {
    j["best_run_id"] = report.best_run_id;
    j["best_val_loss"] = report.best_val_loss;
  }
  if (!report.checkpoint_ref.empty()) j["checkpoint"] = report.checkpoint_ref;
  j["wall_time_seconds"] = report.wall_time_seconds;
  return j.dump(2);
}

void save_train_report(const std::string& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << train_report_to_json(report) << "\n";
}

void save_loss_csv(const std::string& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "iteration,run_id,train_loss,val_loss\n";
  out.precision(17);
  for (const auto& rr : report.runs) {
    for (const auto& p : rr.curve) {
      out << p.iteration << "," << rr.run_id << "," << p.train_loss << ","
          << p.val_loss << "\n";
    }
  }
}

}  // namespace heavytail
