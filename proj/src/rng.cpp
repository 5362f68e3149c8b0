#include "zpdc/rng.hpp"

#include <cmath>

namespace zpdc::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(
    const std::array<std::uint32_t, 4>& c,
    const std::array<std::uint32_t, 2>& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key,
                                        std::array<std::uint32_t, 4> ctr) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = round_once(ctr, key);
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t trial, Role role)
    : trial_(trial) {
  std::uint64_t k = mix64(seed + 0x632BE59BD9B4E019ull *
                                     static_cast<std::uint64_t>(role));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

void Stream::refill() {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(trial_),
      static_cast<std::uint32_t>(trial_ >> 32)};
  buf_ = philox4x32(key_, ctr);
  ++block_;
  idx_ = 0;
}

std::uint32_t Stream::next_u32() {
  if (idx_ >= 4) refill();
  return buf_[idx_++];
}

std::uint64_t Stream::next_u64() {
  std::uint64_t lo = next_u32();
  std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Stream::uniform() {
  // 53 random bits; map 0 to the smallest step so log(u) stays finite.
  std::uint64_t bits = next_u64() >> 11;
  if (bits == 0) bits = 1;
  return static_cast<double>(bits) * 0x1.0p-53;
}

double Stream::normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * 3.14159265358979323846 * u2;
  cached_normal_ = r * std::sin(a);
  have_cached_ = true;
  return r * std::cos(a);
}

std::complex<double> Stream::complex_normal(double sd) {
  double re = normal();
  double im = normal();
  return {sd * re, sd * im};
}

} // namespace zpdc::rng
