#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "heavytail/checkpoint.hpp"
#include "heavytail/energy_distance.hpp"
#include "heavytail/generator.hpp"
#include "heavytail/matrix.hpp"

namespace heavytail {

struct SplitSpec {
  double train_fraction = 0.05;
  double val_fraction = 0.05;
};

struct SplitResult {
  SampleMatrix train;
  SampleMatrix val;
  SampleMatrix test;
  std::vector<double> scale;  // per-column mean magnitude of the raw train split
};

// Seeded disjoint partition, then all three splits divided by the
// per-column mean magnitude of the training split.
SplitResult split_normalize(const SampleMatrix& data, const SplitSpec& fractions,
                            std::uint64_t seed);

struct TrainConfig {
  GeneratorSpec gspec;
  std::size_t batch_size = 256;
  std::size_t iterations = 20000;
  std::vector<double> learning_rates = {1e-4, 1e-5, 1e-6};
  std::size_t validation_every = 500;
  std::size_t validation_noise_count = 4096;
  std::uint64_t seed = 0;
  bool include_real_within = true;

  void validate() const;
};

struct CurvePoint {
  std::int64_t iteration = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct RunReport {
  std::size_t run_id = 0;
  double learning_rate = 0.0;
  bool diverged = false;
  std::int64_t diverged_at = -1;
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::int64_t best_iteration = -1;
  std::vector<CurvePoint> curve;
  std::size_t exp_cap_events = 0;
};

struct TrainReport {
  std::vector<RunReport> runs;
  bool all_diverged = false;
  std::size_t best_run_id = 0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  double wall_time_seconds = 0.0;  // excluded from determinism comparisons
  std::string checkpoint_ref;
};

struct TrainResult {
  TrainReport report;
  // State of the best run at its best validation point; empty when every
  // run diverged.
  NetParams best_params;
  AdamState best_adam;
  std::int64_t best_step = 0;
};

// One independent run per learning rate, each re-initialized from a
// substream of (seed, run index). Per iteration: one fresh noise batch, one
// with-replacement real batch, energy-distance gradients in the configured
// loss space, one Adam step. Validation uses a fixed per-run noise batch
// against the full validation split (within-real term always included) and
// keeps the best parameters. Runs that hit non-finite losses or gradients
// are marked diverged and skipped in best-run selection.
TrainResult train(const TrainConfig& config, const SampleMatrix& train_data,
                  const SampleMatrix& val_data);

// Recomputes the validation loss exactly as train() measured it, deriving
// the fixed noise batch from (seed, run_index). Checkpoint optimality is
// re-verifiable from the artifact alone.
double validation_loss(const GeneratorSpec& gspec, const NetParams& params,
                       const SampleMatrix& val_data, std::uint64_t seed,
                       std::size_t run_index, std::size_t validation_noise_count);

// The real data as the loss sees it: identity in data space, elementwise
// ln in log space (requires strictly positive entries).
SampleMatrix real_loss_view(const GeneratorSpec& gspec, const SampleMatrix& data);

Checkpoint make_checkpoint(const TrainConfig& config, const TrainResult& result,
                           std::vector<double> normalization_scale);

std::string train_report_to_json(const TrainReport& report);
void save_train_report(const std::string& path, const TrainReport& report);
void save_loss_csv(const std::string& path, const TrainReport& report);

}  // namespace heavytail
