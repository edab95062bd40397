#pragma once

#include <cstdint>
#include <random>

namespace heavytail {

// Deterministic random source used by every sampler and trainer in the
// library.
//
// The engine is std::mt19937_64, whose algorithm (including single-word
// seeding) is pinned by the C++ standard, so a given (seed, draw sequence)
// produces identical values on every platform and in every release.
// Substreams are derived with SplitMix64 on the base seed, never by
// consuming engine state: split(k) is a pure function of (seed, k), which
// is what makes parallel consumers reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]: 53 mantissa bits plus one ulp, so logs and negative
  // powers of the result are always finite.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair and
  // caches the second value.
  double normal();

  // Unbiased integer in [0, bound) by rejection sampling.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Independent substream. Does not advance this generator.
  Rng split(std::uint64_t stream) const { return Rng(mix(seed_, stream)); }

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Substream labels used when a module derives several independent streams
// from one experiment seed. Kept in one place so checkpoints and reports
// can be re-verified from (seed, label) alone.
namespace streams {
inline constexpr std::uint64_t kNetInit = 0;
inline constexpr std::uint64_t kTrainNoise = 1;
inline constexpr std::uint64_t kBatchIndex = 2;
inline constexpr std::uint64_t kValidationNoise = 3;
inline constexpr std::uint64_t kSplitShuffle = 4;
inline constexpr std::uint64_t kData = 5;
inline constexpr std::uint64_t kEvalNoise = 6;
inline constexpr std::uint64_t kManifoldC = 7;
inline constexpr std::uint64_t kManifoldT = 8;
inline constexpr std::uint64_t kManifoldRows = 9;
// Per-run trainer streams live at kRunBase + run_index.
inline constexpr std::uint64_t kRunBase = 1000;
}  // namespace streams

}  // namespace heavytail
