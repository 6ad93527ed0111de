// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace rsls {

// Deterministic random stream with counter-based substream derivation.
//
// A substream is addressed by a root seed plus a short path of integers
// (e.g. {purpose, trial, snr_index}). Streams with distinct paths are
// statistically independent, and the mapping is stable across platforms
// and worker counts, so parallel Monte-Carlo sweeps are reproducible
// regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng substream(std::uint64_t seed, std::span<const std::uint64_t> path) {
    std::uint64_t state = mix(seed);
    for (std::uint64_t word : path) {
      state = mix(state ^ mix(word + 0x9e3779b97f4a7c15ULL));
    }
    return Rng(raw_tag{}, state);
  }

  static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return substream(seed, std::span<const std::uint64_t>(path.begin(), path.size()));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform draw in (0, 1]; never returns 0 so log() is safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard real normal via Box-Muller (no spare caching: two u64 draws
  // per variate, which keeps the draw order trivially documented).
  double standard_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Circularly-symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));
    return {radius * std::cos(2.0 * kPi * u2), radius * std::sin(2.0 * kPi * u2)};
  }

 private:
  struct raw_tag {};
  Rng(raw_tag, std::uint64_t state) : engine_(state) {}

  // splitmix64 finalizer; decorrelates consecutive seeds.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static constexpr double kPi = 3.141592653589793238462643383279502884;

  std::mt19937_64 engine_;
};

}  // namespace rsls
