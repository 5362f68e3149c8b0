#pragma once

#include <cstddef>
#include <vector>

#include "zpdc/config.hpp"

namespace zpdc {

/// Detector-element frequency grid. One element per frequency, spacing
/// exactly 2 pi / T, all frequencies strictly inside (omega_min, omega_max).
/// Element j of beam 1 is conjugate to element N-1-j of beam 2, so that
/// omega_1j + omega_2,sigma(j) equals the pump frequency.
struct ModeGrid {
  std::vector<double> frequencies; // rad/s, ascending
  double spacing = 0;              // 2 pi / T
  double omega_pump = 0;           // grid pump: frequencies[j] + frequencies[N-1-j]

  std::size_t size() const { return frequencies.size(); }
  std::size_t conjugate_index(std::size_t j) const { return size() - 1 - j; }
  /// Pairs are indexed by the beam-1 element; the beam-2 partner is
  /// conjugate_index(j). There are N pairs, one per element.
  std::size_t pair_count() const { return size(); }
};

/// Throws ConfigError when the band holds no element.
ModeGrid build_mode_grid(const ExperimentConfig& cfg);

} // namespace zpdc
