#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heavytail/generator.hpp"
#include "heavytail/net.hpp"

namespace heavytail {

// Everything needed to resume or re-verify a trained generator: the full
// GeneratorSpec, flattened parameters in row-major layer order, optimizer
// state, the step counter, the normalization scale of the training data,
// and the provenance fields that let the recorded validation loss be
// recomputed from (seed, run_index) alone.
struct Checkpoint {
  GeneratorSpec gspec;
  NetParams params;
  AdamState adam;
  std::int64_t step = 0;
  std::vector<double> normalization_scale;  // one entry per data column

  std::uint64_t seed = 0;
  std::size_t run_index = 0;
  double learning_rate = 0.0;
  std::size_t validation_noise_count = 0;
  double best_val_loss = 0.0;
  std::int64_t best_iteration = -1;
};

std::string checkpoint_to_json(const Checkpoint& ck);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace heavytail
