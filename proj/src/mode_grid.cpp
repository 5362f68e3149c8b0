#include "zpdc/mode_grid.hpp"

#include <cmath>

#include "zpdc/errors.hpp"

namespace zpdc {

ModeGrid build_mode_grid(const ExperimentConfig& cfg) {
  ModeGrid grid;
  grid.spacing = 2.0 * constants::pi / cfg.T_window;
  double band = cfg.omega_max - cfg.omega_min;

  // omega_j = omega_min + (j + 1/2) spacing, truncated strictly to the band.
  auto n = static_cast<long long>(std::floor(band / grid.spacing + 0.5));
  while (n > 0 && cfg.omega_min + (n - 0.5) * grid.spacing >= cfg.omega_max)
    --n;
  if (n < 1)
    throw ConfigError("omega_max",
                      "band narrower than one element spacing 2 pi / T");

  grid.frequencies.resize(static_cast<std::size_t>(n));
  for (long long j = 0; j < n; ++j)
    grid.frequencies[static_cast<std::size_t>(j)] =
        cfg.omega_min + (j + 0.5) * grid.spacing;
  // Pair sum in grid arithmetic; equals omega_min + omega_max when the band
  // is an integer multiple of the spacing.
  grid.omega_pump = 2.0 * cfg.omega_min + static_cast<double>(n) * grid.spacing;
  return grid;
}

} // namespace zpdc
