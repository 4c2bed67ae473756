#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace gdht {

/// Seeded 64-bit generator. Every derived quantity (uniforms, bounded
/// integers, Box–Muller normals, shuffles) is computed here rather than
/// through <random> distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Child stream for replication `index`: seed + index.
  static Rng for_replication(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(master_seed + index);
  }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound);
  double normal();

  /// Uniform random permutation of 0..n-1 (Fisher–Yates).
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace gdht
