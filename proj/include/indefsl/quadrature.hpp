#pragma once

#include <functional>
#include <string>

namespace indefsl {

/// Adaptive Gauss-Kronrod on [lo, hi] with relative tolerance `tol`.
double integrate_interval(std::function<double(double)> const& f, double lo, double hi,
                          double tol = 1e-10);

struct ImproperIntegral {
  bool converged = false;
  double value = 0.0;
  double extent = 0.0;  // final X of [-X, X]
  std::string reason;
};

/// Integral of f over the real line. The window [-X, X] starts at `x_start`
/// and doubles until the increment drops below `increment_tol`; past `x_max`
/// the integral is reported as not integrable at this scale.
ImproperIntegral integrate_real_line(std::function<double(double)> const& f, double x_start = 8.0,
                                     double increment_tol = 1e-8, double x_max = 1e6);

}  // namespace indefsl
