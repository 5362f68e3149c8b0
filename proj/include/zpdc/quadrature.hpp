#pragma once

#include <cstddef>
#include <functional>

namespace zpdc::quad {

struct Result {
  double value = 0;
  double abs_error = 0; // error estimate actually achieved
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Adaptive 1-D quadrature: Gauss-Kronrod 7-15 with interval bisection.
/// Stops when the summed error estimate meets abs_tol + rel_tol * |value|.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-10,
                 std::size_t max_intervals = 4000);

/// Adaptive 2-D quadrature on a rectangle: tensor-product Gauss-Kronrod
/// patches refined by splitting the patch of largest error estimate.
Result integrate_2d(const std::function<double(double, double)>& f, double ax,
                    double bx, double ay, double by, double abs_tol = 1e-10,
                    std::size_t max_patches = 20000);

} // namespace zpdc::quad
