#include "zpdc/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "zpdc/detector.hpp"
#include "zpdc/errors.hpp"
#include "zpdc/field.hpp"
#include "zpdc/special.hpp"

namespace zpdc::analytic {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kTwoPi = 2.0 * constants::pi;

void check_single(const SingleParams& p) {
  if (!(p.m > 0)) throw std::invalid_argument("margin m must be > 0");
  if (!(p.x >= 0)) throw std::invalid_argument("signal x must be >= 0");
  if (!(p.gamma > 0)) throw std::invalid_argument("gain gamma must be > 0");
}
} // namespace

double zpf_element_intensity(const ExperimentConfig& cfg, double omega_j,
                             Method method, quad::Result* info) {
  const double L = cfg.detector_L;
  const double T = cfg.T_window;
  const double closed = constants::hbar * omega_j * omega_j /
                        (4.0 * constants::c * T * L);
  if (method == Method::Closed) return closed;

  // I_0j = hbar w^2/(2 pi c T L) * Int_0^{Lw/2c} sinc^2(v) K(x(v)) dv with
  // K(x) = 4 J1(x)^2 / x^2 and x(v) = (2wR/c) sqrt(t(1-t)), t = cv/(Lw).
  const double vmax = L * omega_j / (2.0 * constants::c);
  const double xcoef = 2.0 * omega_j * cfg.detector_R / constants::c;
  auto kfactor = [](double x) {
    if (x < 1e-4) {
      double x2 = x * x;
      double b = 1.0 - x2 / 8.0 + x2 * x2 / 192.0;
      return b * b;
    }
    double b = 2.0 * bessel_j1(x) / x;
    return b * b;
  };
  auto integrand = [&](double v) {
    double t = v / vmax * 0.5; // c v / (L w) with vmax = Lw/2c
    double arg = t * (1.0 - t);
    double x = xcoef * std::sqrt(arg > 0 ? arg : 0.0);
    return det::sinc(v) * det::sinc(v) * kfactor(x);
  };

  // Integrate pi-panel by pi-panel: each panel is smooth and the Kronrod
  // error estimate stays honest on the oscillation scale.
  const double rel_tol = 1e-6;
  double total = 0, err = 0;
  std::size_t evals = 0;
  double a = 0;
  long long panels = static_cast<long long>(std::ceil(vmax / constants::pi));
  for (long long k = 0; k < panels; ++k) {
    double b = std::min((k + 1) * constants::pi, vmax);
    auto r = quad::integrate(integrand, a, b, 1e-14, 1e-9, 16);
    total += r.value;
    err += r.abs_error;
    evals += r.evaluations;
    a = b;
  }
  quad::Result out{total, err, evals, err <= rel_tol * std::abs(total)};
  double value = closed * total / (constants::pi / 2.0);
  if (info) *info = out;
  if (!out.converged)
    throw ConvergenceError("zpf_element_intensity quadrature", err / total);
  return value;
}

ZpfStatistics zpf_statistics(const ExperimentConfig& cfg) {
  DerivedParams d = derive_params(cfg);
  ZpfStatistics s;
  s.I0_bar = d.I0_bar;
  s.sigma0 = d.sigma0;
  ModeGrid grid = build_mode_grid(cfg);
  double sum = 0;
  for (double w : grid.frequencies)
    sum += zpf_element_intensity(cfg, w, Method::Closed);
  s.I0_grid_sum = sum;
  s.rel_gap = std::abs(sum / d.I0_bar - 1.0);
  return s;
}

double rho_density(double u, double x, double s) {
  if (!(s > 0)) throw std::invalid_argument("rho_density: s must be > 0");
  double t = (u - 1.0 - x * s) / s;
  return norm_pdf(t) / s;
}

double rho_subzero_mass(double x, double s) {
  return norm_upper((1.0 + x * s) / s);
}

namespace detail {

double p_single_raw(const SingleParams& p) {
  double c = p.m - p.x;
  double term1 = 0.5 * erfc_checked(c / kSqrt2);
  // exp(-gamma x + gamma^2/2) erfc((c+gamma)/sqrt2)/2 through logs: the two
  // exponentials can overflow individually (saturation regime) while the
  // product is <= 1.
  double log_term2 = -p.gamma * p.x + 0.5 * p.gamma * p.gamma +
                     log_half_erfc((c + p.gamma) / kSqrt2);
  double value = term1 - std::exp(log_term2);
  if (value < 0) return 0;
  if (value > 1) return 1;
  return value;
}

} // namespace detail

double p_single_model(const SingleParams& p) {
  check_single(p);
  return detail::p_single_raw(p);
}

double p_single_model_quadrature(const SingleParams& p, quad::Result* info) {
  check_single(p);
  double c = p.m - p.x;
  auto f = [&](double t) {
    return norm_pdf(t) * (-std::expm1(-p.gamma * (t + p.x)));
  };
  double hi = std::max(c, 0.0) + 12.0;
  auto r = quad::integrate(f, c, hi, 1e-13, 1e-12, 2000);
  if (info) *info = r;
  if (!r.converged)
    throw ConvergenceError("p_single quadrature", r.abs_error);
  return r.value;
}

LinearSingle p_single_linear(const SingleParams& p) {
  check_single(p);
  if (p.gamma * p.x > 0.1)
    std::fprintf(stderr,
                 "zpdc: warning: linear form requested at gamma x = %g\n",
                 p.gamma * p.x);
  double c = p.m - p.x;
  LinearSingle out;
  out.full = p.gamma * p.x * 0.5 * erfc_checked(c / kSqrt2) +
             p.gamma * norm_pdf(c);
  out.limit = p.gamma * p.x;
  return out;
}

double p_dark(double m, double gamma) {
  if (!(m > 0)) throw std::invalid_argument("p_dark: m must be > 0");
  return gamma * norm_pdf(m);
}

double p_single_quantum(const ExperimentConfig& cfg,
                        double signal_window_energy) {
  double nu = (cfg.omega_min + cfg.omega_max) / 2.0 / kTwoPi;
  return cfg.eta * signal_window_energy / (constants::h_planck * nu);
}

double p_single_quantum_from_intensity(const ExperimentConfig& cfg,
                                       double I_s) {
  double area = constants::pi * cfg.detector_R * cfg.detector_R;
  return p_single_quantum(cfg, area * cfg.T_window * I_s);
}

namespace detail {

quad::Result p_joint_raw(const JointParams& p, double abs_tol) {
  if (!(std::abs(p.rho_c) < 1.0))
    throw std::invalid_argument("p_joint_model: |rho_c| must be < 1");

  // Standardized coordinates t_i = (u_i - 1 - x_i s_i)/s_i: bivariate normal
  // with correlation rho_c, thresholds t_i > m_i - x_i, and response factors
  // (1 - e^{-gamma_i (t_i + x_i)}).
  const double c1 = p.d1.m - p.d1.x;
  const double c2 = p.d2.m - p.d2.x;
  const double rho = p.rho_c;
  const double det = 1.0 - rho * rho;
  const double norm = 1.0 / (kTwoPi * std::sqrt(det));
  auto f = [&](double t1, double t2) {
    double q = (t1 * t1 - 2.0 * rho * t1 * t2 + t2 * t2) / (2.0 * det);
    double w1 = -std::expm1(-p.d1.gamma * (t1 + p.d1.x));
    double w2 = -std::expm1(-p.d2.gamma * (t2 + p.d2.x));
    return norm * std::exp(-q) * w1 * w2;
  };
  // Domain truncated at +10 sd past the larger of threshold and mean; the
  // discarded mass is below 1e-22.
  double h1 = std::max(c1, 0.0) + 10.0;
  double h2 = std::max(c2, 0.0) + 10.0;
  auto r = quad::integrate_2d(f, c1, h1, c2, h2, abs_tol, 40000);
  if (!r.converged)
    throw ConvergenceError("p_joint_model quadrature", r.abs_error);
  return r;
}

} // namespace detail

quad::Result p_joint_model(const JointParams& p, double abs_tol) {
  check_single(p.d1);
  check_single(p.d2);
  return detail::p_joint_raw(p, abs_tol);
}

double p_joint_linear(const JointParams& p) {
  return p.d1.gamma * p.d2.gamma * (p.d1.x * p.d2.x + p.rho_c);
}

double p_joint_quantum(const ExperimentConfig& cfg, double windowed_moment) {
  double nu = (cfg.omega_min + cfg.omega_max) / 2.0 / kTwoPi;
  double hn = constants::h_planck * nu;
  return cfg.eta * cfg.eta * windowed_moment / (hn * hn);
}

CoherentIdentity coherent_identity_check(const ExperimentConfig& cfg,
                                         std::complex<double> amplitude,
                                         double omega_s) {
  CoherentIdentity out;
  ModeGrid grid = build_mode_grid(cfg);

  // lhs: the plane wave enters each element with its sinc weight; the
  // element filter returns the field amplitude itself, so the intensity
  // scale is c eps0 (no per-element mode normalization here).
  double sum = 0;
  for (double wj : grid.frequencies) {
    double w = det::sinc(0.5 * cfg.T_window * (omega_s - wj));
    sum += std::norm(amplitude) * w * w;
  }
  out.lhs = constants::c * constants::epsilon0 * sum;

  // rhs: direct window average of the instantaneous intensity of the plane
  // wave (constant modulus), i.e. <E~_s>/(A T) with no filter involved.
  const int steps = 64;
  double acc = 0;
  for (int i = 0; i < steps; ++i) {
    double t = (i + 0.5) / steps * cfg.T_window;
    std::complex<double> e =
        amplitude * std::exp(std::complex<double>(0.0, -omega_s * t));
    acc += std::norm(e);
  }
  out.rhs = constants::c * constants::epsilon0 * acc / steps;
  return out;
}

AnalyticReport analytic_report(const ExperimentConfig& cfg,
                               const JointParams& p) {
  AnalyticReport r;
  DerivedParams d = derive_params(cfg);
  r.I0_bar = d.I0_bar;
  r.sigma0 = d.sigma0;
  r.p_single = p_single_model(p.d1);
  r.p_single_quadrature = p_single_model_quadrature(p.d1);
  LinearSingle lin = p_single_linear(p.d1);
  r.p_single_linear_full = lin.full;
  r.p_single_linear_limit = lin.limit;
  r.p_dark = p_dark(p.d1.m, p.d1.gamma);
  r.p_joint = p_joint_model(p).value;
  r.p_joint_lin = p_joint_linear(p);
  double I_s = p.d1.x * d.sigma0;
  r.p_single_q = p_single_quantum_from_intensity(cfg, I_s);
  double area = constants::pi * cfg.detector_R * cfg.detector_R;
  double at = area * cfg.T_window;
  double I1s = p.d1.x * d.sigma0, I2s = p.d2.x * d.sigma0;
  double cov = p.rho_c * d.sigma0 * d.sigma0;
  r.p_joint_q = p_joint_quantum(cfg, at * at * (I1s * I2s + cov));
  r.subzero_mass = rho_subzero_mass(p.d1.x, d.s_ratio);
  return r;
}

} // namespace zpdc::analytic
