#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heavytail/generator.hpp"
#include "heavytail/synth.hpp"
#include "heavytail/trainer.hpp"

namespace heavytail::cli {

enum class DataKind { csv, cauchy_mixture, joint2d, manifold };

struct DataSpec {
  DataKind kind = DataKind::cauchy_mixture;
  // csv
  std::string csv_path;
  std::vector<std::size_t> csv_columns;
  char delimiter = ',';
  // synthetic
  std::size_t n = 100000;
  CauchyMixtureSpec mixture = CauchyMixtureSpec::default_two_component();
  std::size_t latent_dim = 5;
  std::size_t ambient_dim = 20;
};

struct GeneratorConfig {
  std::string variant = "pareto";  // pareto|normal|lognormal|uniform|custom
  std::size_t noise_dim = 4;
  std::vector<std::size_t> hidden_widths = {32, 32, 32};
  // unset: gamma = 2 for univariate data, max tail estimate + 1 otherwise
  std::optional<double> gamma;
  bool gamma_auto = false;
  std::optional<std::size_t> tail_k;
  std::optional<GeneratorSpec> custom;
};

struct EvalConfig {
  std::size_t n_generated = 100000;
  std::size_t mdist_samples = 10000;
};

// One experiment as a reproducible document: dataset source, split,
// generator variant, trainer settings, evaluation sizes, and the output
// directory (overridable with --out).
struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string out_dir;
  DataSpec data;
  SplitSpec split;
  GeneratorConfig generator;
  std::size_t batch_size = 256;
  std::size_t iterations = 20000;
  std::vector<double> learning_rates = {1e-4, 1e-5, 1e-6};
  std::size_t validation_every = 500;
  std::size_t validation_noise = 4096;
  bool include_real_within = true;
  EvalConfig eval;
};

// Parses and validates (throws std::invalid_argument with a field path on
// schema violations, DataError when the file cannot be read).
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_config_from_json(const std::string& text);

// Loads or synthesizes the configured dataset. Synthetic data derives its
// stream from (seed, data label), so the same config always yields the
// same rows. For manifold data the generating spec is returned as well.
struct LoadedData {
  SampleMatrix data;
  std::optional<ManifoldSpec> manifold;
  std::size_t csv_skipped_rows = 0;
};
LoadedData load_dataset(const DataSpec& spec, std::uint64_t seed);

// Resolves the configured variant against the training data: estimates
// per-column tail indexes for the pareto variant, picks the log/data loss
// space for the lognormal variant by data positivity.
struct BuiltGenerator {
  GeneratorSpec gspec;
  std::vector<double> xi_hats;  // pareto variant only
  std::string resolved_variant;
};
BuiltGenerator build_generator_from_config(const GeneratorConfig& cfg,
                                           const SampleMatrix& train_split,
                                           const SampleMatrix& val_split);

}  // namespace heavytail::cli
