#include "zpdc/feasibility.hpp"

#include <cmath>

#include "zpdc/errors.hpp"
#include "zpdc/field.hpp"

namespace zpdc::feas {

LensDiffraction lens_and_diffraction(const ExperimentConfig& cfg) {
  if (!(cfg.lens_Rl > 0) || !(cfg.lens_f > 0))
    throw ConfigError("lens_Rl", "lens parameters must be positive");
  LensDiffraction out;
  double lf = cfg.lambda_center * cfg.lens_f;
  out.b_squared = constants::pi * constants::pi * std::pow(cfg.lens_Rl, 4) /
                  (lf * lf);
  double a_r = 2.0 * cfg.lens_Rl / cfg.lens_f;
  out.R_first = 1.22 * cfg.lambda_center / a_r;
  out.R_second = 2.23 * cfg.lambda_center / a_r;
  return out;
}

FeasibilityReport minimal_bounds(const ExperimentConfig& cfg, double k) {
  if (!(k >= 1.0)) throw ConfigError("strictness", "k must be >= 1");
  FeasibilityReport r;
  r.strictness_k = k;

  LensDiffraction ld = lens_and_diffraction(cfg);
  r.b_squared = ld.b_squared;
  r.A_r = 2.0 * cfg.lens_Rl / cfg.lens_f;
  r.R_diffraction_first = ld.R_first;
  r.R_diffraction_second = ld.R_second;

  const DerivedParams d = derive_params(cfg);
  const double root_tau_T = std::sqrt(cfg.tau_coherence * cfg.T_window);
  r.I_s_min = constants::hbar * d.omega_bar * d.omega_bar /
              (4.0 * constants::c * cfg.detector_L * root_tau_T);
  r.I_in_min = r.I_s_min / r.b_squared;
  r.rate_min_lens = cfg.eta * cfg.lambda_center * cfg.lens_f * cfg.lens_f /
                    (2.0 * cfg.lens_Rl * cfg.lens_Rl * cfg.detector_L *
                     root_tau_T);
  r.rate_min_coherence =
      cfg.eta * cfg.lens_f * cfg.lens_f * cfg.crystal_radius_Rc *
      cfg.crystal_radius_Rc /
      (2.0 * cfg.detector_L * cfg.source_distance_d * cfg.source_distance_d *
       cfg.lambda_center * root_tau_T);

  r.I_s_config = field::expected_signal_intensity(cfg, d);
  double photon = constants::hbar * d.omega_bar;
  r.rate_config = cfg.eta * constants::pi * cfg.lens_Rl * cfg.lens_Rl *
                  (r.I_s_config / r.b_squared) / photon;
  r.margin_I_s = r.I_s_config / r.I_s_min;
  r.margin_rate_lens = r.rate_config / r.rate_min_lens;
  r.margin_rate_coherence = r.rate_config / r.rate_min_coherence;

  r.cond_signal_dominates = r.I_s_config >= k * r.I_s_min;
  r.cond_spatial_coherence = cfg.source_distance_d * cfg.lambda_center >=
                             cfg.lens_Rl * cfg.crystal_radius_Rc;
  r.cond_small_radius = cfg.detector_R < small_radius_bound(cfg);
  return r;
}

std::vector<std::pair<double, FeasibilityReport>> sweep_tau(
    const ExperimentConfig& cfg, double tau_lo, double tau_hi, int n,
    double k) {
  if (!(tau_lo > 0) || !(tau_hi > tau_lo) || n < 2)
    throw ConfigError("tau_coherence", "sweep needs 0 < lo < hi and n >= 2");
  std::vector<std::pair<double, FeasibilityReport>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double tau = tau_lo + (tau_hi - tau_lo) * i / (n - 1);
    ExperimentConfig c = cfg;
    c.tau_coherence = tau;
    out.emplace_back(tau, minimal_bounds(c, k));
  }
  return out;
}

} // namespace zpdc::feas
