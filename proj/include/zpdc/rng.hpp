#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace zpdc::rng {

/// Philox4x32-10 keyed counter block function (Salmon et al. style).
/// Pure: output depends only on (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key,
                                        std::array<std::uint32_t, 4> ctr);

/// Disjoint sub-streams per (seed, trial, role). Trial-level parallelism
/// cannot change any drawn value: the counter encodes (trial, block) and the
/// key encodes (seed, role), so streams never overlap.
enum class Role : std::uint32_t {
  Beam1 = 1,
  Beam2 = 2,
  Clicks = 3,
  Density = 4,
};

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t trial, Role role);

  /// Uniform in [2^-53, 1]; never 0, safe under log().
  double uniform();
  /// Standard normal via Box-Muller (two per transform, one cached).
  double normal();
  /// Complex value with independent N(0, sd^2) real and imaginary parts.
  std::complex<double> complex_normal(double sd);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::uint64_t trial_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int idx_ = 4;
  double cached_normal_ = 0;
  bool have_cached_ = false;
};

/// SplitMix64 finalizer; used to spread (seed, role) into a Philox key.
std::uint64_t mix64(std::uint64_t z);

} // namespace zpdc::rng
