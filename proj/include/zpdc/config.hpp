#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zpdc/constants.hpp"

namespace zpdc {

/// All physical and numerical parameters of one experiment, SI units.
///
/// A config may be read from a flat JSON file (see docs/config.md) or built
/// in code. Fields left at 0 where 0 is not meaningful (the band, tau, pump)
/// are resolved from the wavelength data by resolve_defaults().
struct ExperimentConfig {
  double lambda_center = 700e-9;  // central wavelength [m]
  double delta_lambda = 10e-9;    // bandwidth [m]
  double omega_min = 0;           // band lower edge [rad/s]; 0 = derive
  double omega_max = 0;           // band upper edge [rad/s]; 0 = derive
  double T_window = 1e-8;         // detection window [s]
  double tau_coherence = 0;       // coherence time [s]; 0 = 2 pi / delta_omega
  double detector_R = 2.5e-6;     // detector cylinder radius [m]
  double detector_L = 1e-2;       // detector cylinder length [m]
  double g_coupling = 0.1;        // PDC coupling, dimensionless
  double eta = 0.1;               // quantum efficiency, dimensionless
  double zeta_gain = 1e-2;        // detector response gain [(W/m^2)^-1]
  double I_m_margin = 5.0;        // (I_m - I0) / sigma0, dimensionless
  double lens_Rl = 2.5e-3;        // lens radius [m]
  double lens_f = 5e-3;           // lens focal distance [m]
  double source_distance_d = 1.0; // crystal-to-detector distance [m]
  double crystal_radius_Rc = 2e-4; // active crystal radius [m]
  double omega_pump = 0;          // pump frequency [rad/s]; forced to min+max
  long long n_trials = 10000;
  std::uint64_t seed = 0;

  /// Fill the derivable fields (band, tau, pump) when left at 0.
  ExperimentConfig resolved() const;
};

/// Quantities derived from a config once and shared by every module.
struct DerivedParams {
  double omega_bar = 0;           // (omega_max + omega_min) / 2
  double delta_omega = 0;         // omega_max - omega_min
  double delta_omega_element = 0; // element spacing 2 pi / T
  long long n_elements = 0;       // round(T / tau)
  double I0_bar = 0;              // hbar w^2 dw / (8 pi c L)  [W/m^2]
  double sigma0 = 0;              // I0_bar sqrt(tau / T)      [W/m^2]
  double s_ratio = 0;             // sigma0 / I0_bar = sqrt(tau / T)
  double I_m_abs = 0;             // absolute threshold I0 + margin sigma0
  double b_squared = 0;           // lens gain pi^2 Rl^4 / (lambda^2 f^2)
  double A_r = 0;                 // relative aperture 2 Rl / f
  double R_diffraction = 0;       // first-ring radius 1.22 lambda / A_r [m]
};

/// One violated soft condition from validate_config().
struct Diagnostic {
  std::string condition; // short identifier, e.g. "small_radius"
  double measured = 0;
  double required = 0;
  std::string message;
};

/// R must stay below this for the transverse Bessel factor to be ~1.
double small_radius_bound(const ExperimentConfig& cfg);

/// Hard invariants; throws ConfigError naming the offending key.
void check_config(const ExperimentConfig& cfg);

/// Parse a JSON config file. Unknown keys are rejected, absent keys take the
/// documented defaults, every value is range-checked. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Same, from a JSON text already in memory.
ExperimentConfig parse_config(const std::string& json_text);

/// Apply one "key=value" override to a config (CLI --set).
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

/// Soft experiment-design conditions. Empty when all of: R below the
/// small-radius bound, d lambda >= Rl Rc, I_m_margin > 0, T/tau >= 10.
std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg);

DerivedParams derive_params(const ExperimentConfig& cfg);

/// Serialize the fully resolved config as a flat JSON object (stable key
/// order, round-trips through parse_config).
std::string config_to_json(const ExperimentConfig& cfg);

} // namespace zpdc
