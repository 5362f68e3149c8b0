#pragma once

namespace zpdc {

/// Physical constants used throughout, SI units. CODATA 2018 / SI-2019 exact
/// values; this is the only place they are defined.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;      // J s
  double c = 2.99792458e8;            // m/s (exact)
  double epsilon0 = 8.8541878128e-12; // F/m
};

namespace constants {
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double c = 2.99792458e8;
inline constexpr double epsilon0 = 8.8541878128e-12;
inline constexpr double h_planck = 6.62607015e-34; // J s (exact)
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

inline bool is_valid(const PhysicalConstants& k) {
  return k.hbar > 0 && k.c > 0 && k.epsilon0 > 0;
}

} // namespace zpdc
