#pragma once

// Platform-stable pseudo-random and quasi-random sampling. Standard library
// distributions are implementation-defined, so every draw here is derived
// from the raw mt19937_64 stream.

#include <cstdint>
#include <random>
#include <vector>

namespace moebius_lab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Radical inverse of `index` in `base`.
double radical_inverse(std::uint64_t index, unsigned base);

/// `count` points of the `dim`-dimensional Halton sequence in the box
/// [lo + margin*(hi-lo), hi - margin*(hi-lo)], with a seeded
/// Cranley-Patterson rotation. Deterministic in (seed, count).
std::vector<std::vector<double>> halton_box(const std::vector<double>& lo,
                                            const std::vector<double>& hi, std::size_t count,
                                            std::uint64_t seed, double margin = 0.1);

}  // namespace moebius_lab
