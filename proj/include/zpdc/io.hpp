#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zpdc/analytic.hpp"
#include "zpdc/config.hpp"
#include "zpdc/feasibility.hpp"
#include "zpdc/field.hpp"
#include "zpdc/mc.hpp"

namespace zpdc::io {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal representation, locale-independent.
std::string format_double(double v);

/// Write via temp file + rename so readers never observe partial output.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Provenance header lines ('#'-prefixed). Embeds the resolved config, the
/// seed and the artifact version, so any run is reconstructible from its
/// output alone. No timestamps: identical invocations must produce identical
/// bytes.
struct Provenance {
  std::string verb;
  const ExperimentConfig* cfg = nullptr;
  std::uint64_t seed = 0;
  long long trials = 0;
  std::string scenario;
};
std::string header_comment(const Provenance& p);

std::string rates_csv(const Provenance& p,
                      const std::vector<mc::RateEstimate>& rates);
std::string rates_json(const Provenance& p,
                       const std::vector<mc::RateEstimate>& rates);

std::string comparison_csv(const Provenance& p,
                           const std::vector<mc::ComparisonRow>& rows);
std::string comparison_json(const Provenance& p,
                            const std::vector<mc::ComparisonRow>& rows);

std::string histogram_csv(const Provenance& p, const mc::Histogram& h);

std::string feasibility_json(const Provenance& p,
                             const feas::FeasibilityReport& r);
std::string feasibility_table(const feas::FeasibilityReport& r);
std::string feasibility_sweep_csv(
    const Provenance& p,
    const std::vector<std::pair<double, feas::FeasibilityReport>>& sweep);

std::string analytic_json(const Provenance& p,
                          const analytic::JointParams& params,
                          const analytic::AnalyticReport& r);

/// Golden-value CSV for the zeropoint element-intensity oracle:
/// omega, closed, quadrature, achieved_tol, ratio.
std::string zpf_oracle_csv(const Provenance& p, const ExperimentConfig& cfg,
                           const std::vector<double>& omegas);

/// Golden-value CSVs for the detection-probability oracles (the explicit
/// regeneration path for tests/golden): the single grid and the joint set.
std::string golden_single_csv();
std::string golden_joint_csv();

/// Debug dump of one window's vacuum amplitudes:
/// trial, beam, mode, re, im.
std::string amplitudes_csv(long long trial, const field::AmplitudeSet& amps);

} // namespace zpdc::io
