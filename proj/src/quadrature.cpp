#include "indefsl/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace indefsl {

double integrate_interval(std::function<double(double)> const& f, double lo, double hi, double tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  // split at the origin, where |x| kinks usually sit
  if (lo < 0.0 && 0.0 < hi) return integrate_interval(f, lo, 0.0, tol) + integrate_interval(f, 0.0, hi, tol);
  return GK::integrate(f, lo, hi, 15, tol);
}

ImproperIntegral integrate_real_line(std::function<double(double)> const& f, double x_start,
                                     double increment_tol, double x_max) {
  ImproperIntegral out;
  double x = x_start;
  double total = integrate_interval(f, -x, x);
  for (;;) {
    double const next = 2.0 * x;
    if (next > x_max) {
      out.value = total;
      out.extent = x;
      out.reason = "not integrable at this scale";
      return out;
    }
    double const inc = integrate_interval(f, -next, -x) + integrate_interval(f, x, next);
    total += inc;
    x = next;
    if (std::abs(inc) < increment_tol) {
      out.converged = true;
      out.value = total;
      out.extent = x;
      return out;
    }
  }
}

}  // namespace indefsl
