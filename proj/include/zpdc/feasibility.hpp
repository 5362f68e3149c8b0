#pragma once

#include <vector>

#include "zpdc/config.hpp"

namespace zpdc::feas {

/// Experiment-design bounds: the minimal signal intensity and counting rate
/// below which the threshold-detection picture cannot stay consistent with a
/// low dark rate. "much greater than" is operationalized as a strictness
/// factor k (default 10): both the raw bound and k x bound are reported.
struct FeasibilityReport {
  double b_squared = 0;            // lens gain pi^2 Rl^4 / (lambda f)^2
  double A_r = 0;                  // relative aperture 2 Rl / f
  double R_diffraction_first = 0;  // 1.22 lambda / A_r  (84% of intensity)
  double R_diffraction_second = 0; // 2.23 lambda / A_r  (91% of intensity)

  double I_s_min = 0;             // hbar w^2 / (4 c L sqrt(tau T))  [W/m^2]
  double I_in_min = 0;            // I_s_min / b^2                   [W/m^2]
  double rate_min_lens = 0;       // eta lambda f^2/(2 Rl^2 L sqrt(tau T)) [1/s]
  double rate_min_coherence = 0;  // eta f^2 Rc^2/(2 L d^2 lambda sqrt(tau T))
  double strictness_k = 10;

  double I_s_config = 0;          // signal implied by the configured coupling
  double rate_config = 0;         // eta pi Rl^2 (I_s/b^2) / (hbar w)
  double margin_I_s = 0;          // I_s_config / I_s_min
  double margin_rate_lens = 0;
  double margin_rate_coherence = 0;

  bool cond_signal_dominates = false; // I_s_config >= k * I_s_min
  bool cond_spatial_coherence = false; // d lambda >= Rl Rc
  bool cond_small_radius = false;      // R < sqrt(lambda L / 8 pi^2)
};

struct LensDiffraction {
  double b_squared = 0;
  double R_first = 0;
  double R_second = 0;
};

LensDiffraction lens_and_diffraction(const ExperimentConfig& cfg);

FeasibilityReport minimal_bounds(const ExperimentConfig& cfg, double k = 10.0);

/// Sweep tau over [tau_lo, tau_hi] (n linear steps) at fixed other params.
std::vector<std::pair<double, FeasibilityReport>> sweep_tau(
    const ExperimentConfig& cfg, double tau_lo, double tau_hi, int n,
    double k = 10.0);

} // namespace zpdc::feas
