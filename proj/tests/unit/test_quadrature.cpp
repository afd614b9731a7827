#include <cmath>
#include <numbers>

#include "doctest.h"
#include "indefsl/quadrature.hpp"

using namespace indefsl;

TEST_CASE("interval quadrature against closed forms") {
  CHECK(integrate_interval([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(integrate_interval([](double x) { return x * x; }, -1.0, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("real-line integrals") {
  auto g = integrate_real_line([](double x) { return std::exp(-x * x); });
  CHECK(g.converged);
  CHECK(g.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-8));
  auto m = integrate_real_line([](double x) { return std::abs(x) * std::exp(-x * x); });
  CHECK(m.converged);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-8));
  // integral of 1/(1+|x|) over [-X, X] is 2 ln(1+X): diverges
  auto d = integrate_real_line([](double x) { return 1.0 / (1.0 + std::abs(x)); });
  CHECK_FALSE(d.converged);
  CHECK(d.reason == "not integrable at this scale");
  CHECK(d.value == doctest::Approx(2.0 * std::log1p(d.extent)).epsilon(1e-8));
  // cancellation noise of order eps*|x| must not stall the refinement
  auto noisy = integrate_real_line([](double x) { return std::abs(((1.0 + 1.0 / (1.0 + std::abs(x))) - 1.0) * x); });
  CHECK_FALSE(noisy.converged);
  // narrow bump away from the origin
  auto bump = integrate_real_line([](double x) { return std::exp(-400.0 * (x - 5.3) * (x - 5.3)); });
  CHECK(bump.value == doctest::Approx(std::sqrt(std::numbers::pi / 400.0)).epsilon(1e-8));
}
