#pragma once

#include <complex>
#include <utility>

#include "zpdc/config.hpp"
#include "zpdc/quadrature.hpp"

namespace zpdc::analytic {

/// Dimensionless parameters of the single-detection problem:
/// margin m = (I_m - I0)/sigma0, signal x = I_s/sigma0, gain gamma = zeta sigma0.
struct SingleParams {
  double m = 0;
  double x = 0;
  double gamma = 0;
};

struct JointParams {
  SingleParams d1;
  SingleParams d2;
  double rho_c = 0; // intensity correlation <I1 I2>_c / (sigma1 sigma2)
};

enum class Method { Closed, Quadrature };

/// Mean effective intensity of one zeropoint detector element [W/m^2].
/// Closed: hbar w^2 / (4 c T L). Quadrature: the full Bessel-sinc integral
/// over v in (0, L w / 2c), relative tolerance 1e-6; throws ConvergenceError
/// when that tolerance is not reached.
double zpf_element_intensity(const ExperimentConfig& cfg, double omega_j,
                             Method method, quad::Result* info = nullptr);

struct ZpfStatistics {
  double I0_bar = 0;     // continuum formula
  double sigma0 = 0;     // I0_bar sqrt(tau/T)
  double I0_grid_sum = 0; // sum of closed-form element intensities over the grid
  double rel_gap = 0;    // |grid/continuum - 1|
};
ZpfStatistics zpf_statistics(const ExperimentConfig& cfg);

/// Gaussian density of u = I/I0: mean 1 + x s, sd s. x = 0 is the pure
/// zeropoint density.
double rho_density(double u, double x, double s);

/// Probability mass of rho_density below u = 0 (reported as a diagnostic;
/// the density is used untruncated since sigma0 << I0).
double rho_subzero_mass(double x, double s);

/// p = 1/2 erfc((m-x)/sqrt2) - 1/2 exp(-gamma x + gamma^2/2) erfc((m-x+gamma)/sqrt2).
/// The second term is evaluated through logs so large gamma cannot overflow.
double p_single_model(const SingleParams& p);

namespace detail {
/// Same closed forms without the sign checks on x; used where the
/// standardized mean offset of a truncated grid can be slightly negative.
double p_single_raw(const SingleParams& p);
quad::Result p_joint_raw(const JointParams& p, double abs_tol = 1e-10);
} // namespace detail

/// Independent route: adaptive quadrature of the density times the detection
/// law above the threshold.
double p_single_model_quadrature(const SingleParams& p,
                                 quad::Result* info = nullptr);

struct LinearSingle {
  double full = 0;  // gamma x/2 erfc((m-x)/sqrt2) + gamma phi(m-x)
  double limit = 0; // gamma x, valid when x - m >> 1
};
LinearSingle p_single_linear(const SingleParams& p);

/// Dark click probability gamma phi(m): no signal, threshold crossings come
/// from zeropoint fluctuations alone.
double p_dark(double m, double gamma);

/// Quantum-optics reference: p = eta <E~_s> / (h nu).
double p_single_quantum(const ExperimentConfig& cfg,
                        double signal_window_energy);
/// Same under spatial coherence: p = eta A T I_s / (h nu), A = pi R^2.
double p_single_quantum_from_intensity(const ExperimentConfig& cfg,
                                       double I_s);

/// Joint model probability: 2-D adaptive quadrature of the bivariate normal
/// density times both detection laws over the region above both thresholds.
quad::Result p_joint_model(const JointParams& p, double abs_tol = 1e-10);

/// Linear limit gamma1 gamma2 (x1 x2 + rho_c).
double p_joint_linear(const JointParams& p);

/// Quantum-optics reference eta^2 <E~_1s E~_2s> / (h^2 nu1 nu2), degenerate
/// beams (nu1 = nu2 = omega_bar / 2 pi).
double p_joint_quantum(const ExperimentConfig& cfg,
                       double windowed_moment);

struct CoherentIdentity {
  double lhs = 0; // effective signal intensity through the element filter
  double rhs = 0; // windowed mean intensity / (A T)
};
/// Spatially coherent single-mode signal: amplitude [V/m] at frequency
/// omega_s. On a grid frequency the two routes agree exactly.
CoherentIdentity coherent_identity_check(const ExperimentConfig& cfg,
                                         std::complex<double> amplitude,
                                         double omega_s);

/// Full analytic report for one parameter set (CLI `analytic` verb).
struct AnalyticReport {
  double I0_bar = 0;
  double sigma0 = 0;
  double p_single = 0;
  double p_single_quadrature = 0;
  double p_single_linear_full = 0;
  double p_single_linear_limit = 0;
  double p_dark = 0;
  double p_joint = 0;
  double p_joint_lin = 0;
  double p_single_q = 0;
  double p_joint_q = 0;
  double subzero_mass = 0;
};
AnalyticReport analytic_report(const ExperimentConfig& cfg,
                               const JointParams& p);

} // namespace zpdc::analytic
