#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zpdc/analytic.hpp"
#include "zpdc/config.hpp"
#include "zpdc/mode_grid.hpp"

namespace zpdc::mc {

enum class ScenarioKind { ZpfOnly, SingleArm, Joint };

/// ZpfOnly forces g = 0 (no signal); SingleArm produces estimators for
/// detector 1 only; Joint produces the full set including coincidences.
struct Scenario {
  ScenarioKind kind = ScenarioKind::Joint;
  std::size_t coupled_pairs = static_cast<std::size_t>(-1); // default: all
};

ScenarioKind scenario_from_name(const std::string& name);
std::string scenario_name(ScenarioKind kind);

struct RateEstimate {
  std::string quantity;
  double mean = 0;
  double std_error = 0;
  long long n = 0;
  std::uint64_t seed = 0;
};

struct RunOptions {
  int workers = 0;          // 0 = hardware concurrency; never changes results
  std::string trace_path;   // per-trial CSV trace when non-empty
};

/// One window per trial: sample vacuum -> parametric transform -> filter ->
/// effective intensity -> detection probability -> Bernoulli clicks.
/// Bitwise reproducible for fixed (config, scenario, seed, n_trials)
/// regardless of worker count.
std::vector<RateEstimate> run_trials(const ExperimentConfig& cfg,
                                     const Scenario& scenario,
                                     long long n_trials, std::uint64_t seed,
                                     const RunOptions& opts = {});

struct ComparisonRow {
  std::string quantity;
  RateEstimate mc;
  double analytic = 0;
  double z_score = 0; // NaN when the estimator saw zero events
  bool pass = false;
  std::string note;
};

/// Joins run_trials estimators with matched analytic values; pass at
/// |z| <= 4, or the one-sided 95% Poisson bound when zero events occurred.
std::vector<ComparisonRow> compare(const ExperimentConfig& cfg,
                                   const Scenario& scenario,
                                   long long n_trials, std::uint64_t seed,
                                   const RunOptions& opts = {});

struct Histogram {
  std::vector<double> edges;    // bins + 1 edges over u
  std::vector<double> density;  // normalized to integrate to ~1
  std::vector<double> expected; // from rho_density at the grid parameters
  long long n = 0;
  long long underflow = 0;
  long long overflow = 0;
  double chi_square = 0;
  int dof = 0;
  double skewness = 0;
};

Histogram histogram_u(const ExperimentConfig& cfg, long long n_trials,
                      std::uint64_t seed, int bins,
                      const RunOptions& opts = {});

/// Expected intensity statistics of u implied by the transform on this grid
/// (exact second-moment bookkeeping; the analytic side of compare()).
struct GridPrediction {
  double mean_u1 = 0, mean_u2 = 0;
  double sd_u1 = 0, sd_u2 = 0;
  double cov_u = 0;
  double rho_c = 0;
  analytic::SingleParams eff1; // standardized parameters seen by detector 1
  analytic::SingleParams eff2;
};
GridPrediction grid_prediction(const ExperimentConfig& cfg,
                               const Scenario& scenario);

/// Density-level sampler: u drawn from the Gaussian intensity density
/// itself, then the detection law and a Bernoulli click. Validates the
/// closed forms at trial counts the mode-level path cannot reach.
RateEstimate mc_single_density(const analytic::SingleParams& p, long long n,
                               std::uint64_t seed);

struct JointDensityEstimate {
  RateEstimate p12_click;  // Bernoulli coincidence frequency
  RateEstimate p12_weight; // mean of P1*P2 (same integral, lower variance)
  RateEstimate p1, p2;
};
JointDensityEstimate mc_joint_density(const analytic::JointParams& p,
                                      long long n, std::uint64_t seed);

} // namespace zpdc::mc
