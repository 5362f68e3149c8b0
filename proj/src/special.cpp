#include "zpdc/special.hpp"

#include <cmath>

namespace zpdc::analytic {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrt2 = 1.4142135623730950488;
} // namespace

double erfc_checked(double z) { return std::erfc(z); }

double erfcx(double z) {
  if (z < 0) {
    // erfcx(-z) = 2 exp(z^2) - erfcx(z); overflows beyond z ~ -26.6, as the
    // true value does.
    return 2.0 * std::exp(z * z) - erfcx(-z);
  }
  if (z < 20.0) return std::exp(z * z) * std::erfc(z);
  // Asymptotic series: erfcx(z) ~ 1/(z sqrt(pi)) sum (-1)^n (2n-1)!!/(2z^2)^n.
  double inv2z2 = 1.0 / (2.0 * z * z);
  double term = 1.0, sum = 1.0;
  for (int n = 1; n <= 8; ++n) {
    term *= -(2.0 * n - 1.0) * inv2z2;
    sum += term;
  }
  return sum / (z * kSqrtPi);
}

double log_half_erfc(double z) {
  if (z < 10.0) return std::log(0.5 * std::erfc(z));
  return -z * z + std::log(0.5 * erfcx(z));
}

double norm_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double norm_upper(double c) { return 0.5 * std::erfc(c / kSqrt2); }

double bessel_j1(double x) { return std::cyl_bessel_j(1.0, x); }

} // namespace zpdc::analytic
