#pragma once

#include <cstdint>
#include <random>

namespace pwot {

/// Seeded generator used everywhere randomness matters (input mappings,
/// corruption masks, synthetic scenes).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so bounded integers, uniform
/// reals and normals are derived here with fixed algorithms:
///   below(n)   rejection sampling on the top bits (unbiased)
///   uniform()  53 high bits scaled to [0,1)
///   normal()   Box-Muller, one output per call
/// This keeps every seeded result identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n);
  double uniform();
  double normal(double mean = 0.0, double stddev = 1.0);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer. Used to derive independent child seeds from a base
/// seed and a tuple of integers.
std::uint64_t mix_seed(std::uint64_t seed);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace pwot
