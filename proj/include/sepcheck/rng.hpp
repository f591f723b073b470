#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "sepcheck/complex_matrix.hpp"

namespace sepcheck {

/// Seedable generator used for every fixture and search in the library.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms take the top 53 bits; normals use the Box-Muller
/// transform (both values of each pair are consumed, cosine branch first).
/// The resulting streams are reproducible across compilers and platforms,
/// which std::normal_distribution does not guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, stream), keyed through std::seed_seq.
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double gaussian();
  /// Real and imaginary parts independent N(0, 1/2), so E|z|^2 = 1.
  Complex complex_gaussian();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace sepcheck
