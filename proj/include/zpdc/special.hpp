#pragma once

namespace zpdc::analytic {

/// Complementary error function. Backed by the C library implementation,
/// which the unit tests hold to 1e-12 relative accuracy on |z| <= 6 against
/// pinned high-precision reference values.
double erfc_checked(double z);

/// Scaled complementary error function exp(z^2) erfc(z), stable for large z.
double erfcx(double z);

/// log(erfc(z)/2) without overflow or underflow for any double z.
double log_half_erfc(double z);

/// Standard normal density and upper tail Q(c) = P(T > c).
double norm_pdf(double t);
double norm_upper(double c);

/// Bessel J1; wrapper over the standard library implementation.
double bessel_j1(double x);

} // namespace zpdc::analytic
