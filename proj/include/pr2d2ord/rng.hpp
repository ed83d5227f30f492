#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pr2d2ord {

/// Deterministic RNG with explicit stream derivation.
///
/// All distributions are implemented in-house so that draw sequences are
/// reproducible bit-for-bit across platforms and standard-library versions.
/// Concurrent use requires one Rng per thread; derive independent streams
/// with derive(seed, {keys...}).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream keyed by (seed, k1, k2, ...).
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  /// Uniform on (0, 1); never returns 0.
  double uniform_pos();
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal (Marsaglia polar, spare cached).
  double normal();
  /// Gamma(shape, rate), shape > 0, rate > 0 (Marsaglia-Tsang).
  double gamma(double shape, double rate);
  double exponential(double rate);
  double chi_square(double df);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 step; used for seed mixing.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace pr2d2ord
