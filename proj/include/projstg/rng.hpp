#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace projstg {

/// Deterministic random stream: a seeded engine plus the normal
/// distribution's cached state. Two streams seeded alike produce identical
/// draw sequences, so anything consuming a stream is reproducible bit for
/// bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Uniform integer in [lo, hi], both ends included.
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SHA-256 over (master seed, context string), truncated to 64 bits.
/// Child streams derived this way are independent of execution schedule,
/// so seeded runs reproduce bit-identically at any thread count.
std::uint64_t derive_seed(std::uint64_t master, const std::string& context);

}  // namespace projstg
