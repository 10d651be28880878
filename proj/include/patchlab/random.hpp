#pragma once

#include <cstdint>
#include <random>

namespace patchlab {

/// Deterministic generator used for every stochastic step in the library.
///
/// The bit stream is std::mt19937_64 (fully specified by the C++ standard).
/// Uniform and Gaussian variates are derived here rather than through the
/// <random> distributions, whose algorithms are implementation-defined:
///   uniform01  = (next() >> 11) * 2^-53
///   normal     = Marsaglia polar method, both variates of a pair used
///   below(n)   = rejection sampling on the top bits
/// so seeds reproduce bit-identically across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();
  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace patchlab
