#pragma once

#include <complex>
#include <span>
#include <vector>

#include "zpdc/config.hpp"
#include "zpdc/field.hpp"
#include "zpdc/mode_grid.hpp"
#include "zpdc/rng.hpp"

namespace zpdc::det {

/// Filtered field per detector element for one window.
struct FilteredFieldSet {
  std::vector<std::complex<double>> e_plus; // V/m
  int detector_id = 1;
};

/// Effective intensity for one detector and window.
struct IntensitySample {
  double I_bar = 0; // c eps0 sum |E_j|^2  [W/m^2]
  double u = 0;     // I_bar / I0_bar
  int detector_id = 1;
};

struct ClickOutcome {
  bool clicked1 = false;
  bool clicked2 = false;
  double p1 = 0;
  double p2 = 0;
};

/// Threshold detection law in dimensionless form. s = sigma0/I0_bar,
/// gamma = zeta sigma0, margin = (I_m - I0_bar)/sigma0.
struct DetectionLaw {
  double margin = 0;
  double gamma = 0;
  double s = 0;
};

inline DetectionLaw detection_law(const ExperimentConfig& cfg,
                                  const DerivedParams& d) {
  return {cfg.I_m_margin, cfg.zeta_gain * d.sigma0, d.s_ratio};
}

/// Per-element field normalization. Chosen so the zeropoint per-element mean
/// effective intensity c eps0 scale^2 <|beta|^2> equals hbar w^2 / (4 c T L).
double field_scale(double omega, const ExperimentConfig& cfg);

/// One mode per element (the default grid): E_j = scale(w_j) beta_j exactly;
/// the transverse Bessel and longitudinal sinc factors are 1 under the
/// validated small-radius condition.
void filter_fields(const field::BeamAmplitudes& beams, const ModeGrid& grid,
                   const ExperimentConfig& cfg, int detector_id,
                   FilteredFieldSet& out);
FilteredFieldSet filter_fields(const field::BeamAmplitudes& beams,
                               const ModeGrid& grid,
                               const ExperimentConfig& cfg, int detector_id);

/// General form: modes need not coincide with elements; each mode enters
/// element j with weight sinc[T/2 (w_k - w_j)].
FilteredFieldSet filter_fields_general(
    std::span<const double> mode_freqs,
    std::span<const std::complex<double>> beta,
    std::span<const double> element_freqs, const ExperimentConfig& cfg,
    int detector_id);

IntensitySample effective_intensity(const FilteredFieldSet& fields,
                                    const DerivedParams& derived);

/// P = (1 - exp(-gamma (u-1)/s)) Theta[u - (1 + margin s)], clamped to [0,1].
double detection_probability(const IntensitySample& sample,
                             const DetectionLaw& law);

/// Two independent Bernoulli draws given the field realization.
ClickOutcome sample_clicks(double p1, double p2, rng::Stream& stream);

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

} // namespace zpdc::det
