#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "zpdc/config.hpp"
#include "zpdc/mode_grid.hpp"
#include "zpdc/rng.hpp"

namespace zpdc::field {

/// Vacuum amplitudes per mode and beam: the hidden variables. Each component
/// is complex Gaussian with <alpha> = 0, <alpha^2> = 0, <|alpha|^2> = 1/2.
struct AmplitudeSet {
  std::vector<std::complex<double>> beam1;
  std::vector<std::complex<double>> beam2;
};

/// Beam amplitudes after the parametric transform; linear in the vacuum
/// amplitudes, so still jointly Gaussian.
struct BeamAmplitudes {
  std::vector<std::complex<double>> beam1;
  std::vector<std::complex<double>> beam2;
  double g_used = 0;
};

void sample_beam_vacuum(std::size_t n_modes, rng::Stream& stream,
                        std::vector<std::complex<double>>& out);

AmplitudeSet sample_vacuum(const ModeGrid& grid, rng::Stream& beam1_stream,
                           rng::Stream& beam2_stream);

/// Two-mode coupling per conjugate pair (j, sigma(j)):
///   beta_1j = (1 + g^2/2) alpha_1j + g conj(alpha_2,sigma(j))
///   beta_2,sigma(j) = (1 + g^2/2) alpha_2,sigma(j) + g conj(alpha_1j)
/// Pairs with index >= n_coupled_pairs pass through unchanged.
void apply_pdc(const AmplitudeSet& amps, const ModeGrid& grid, double g,
               std::size_t n_coupled_pairs, BeamAmplitudes& out);
BeamAmplitudes apply_pdc(const AmplitudeSet& amps, const ModeGrid& grid,
                         double g);

// Second moments of the transform, pinned from the expansion of the bilinear
// form above with <alpha conj(alpha)> = 1/2 and all other vacuum moments 0:
//   <beta_1j beta_2,sigma(j)> = g (1 + g^2/2)
//   <|beta|^2> - 1/2          = g^2 + g^4/8
//   cov(|beta_1j|^2, |beta_2,sigma(j)|^2) = g^2 (1 + g^2/2)^2
inline double pair_cross_moment(double g) { return g * (1.0 + g * g / 2.0); }
inline double mode_excess(double g) { return g * g * (1.0 + g * g / 8.0); }
inline double pair_intensity_cov(double g) {
  double a = 1.0 + g * g / 2.0;
  return g * g * a * a;
}
/// Mean excess intensity per coupled element, in units of the per-element
/// zeropoint mean (which is <|alpha|^2> = 1/2): kappa = 2 g^2 (1 + g^2/8).
inline double pair_intensity_excess(double g) { return 2.0 * mode_excess(g); }

/// Analytic mean excess effective intensity implied by the transform with
/// every pair coupled: I_s = kappa(g) * I0_bar  [W/m^2].
double expected_signal_intensity(const ExperimentConfig& cfg,
                                 const DerivedParams& derived);

} // namespace zpdc::field
