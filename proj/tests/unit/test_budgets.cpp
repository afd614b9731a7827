#include <cmath>
#include <string>

#include "doctest.h"
#include "indefsl/budgets.hpp"
#include "indefsl/error.hpp"

using namespace indefsl;

namespace {

CoefficientField field(std::string const& r, std::string const& q) {
  CoefficientField f;
  f.r = parse_expression(r);
  f.q = parse_expression(q);
  return f;
}

// Dirichlet eigenvalues of -u'' + q u below eta on (0, X): zeros of the
// solution with u(0) = 0, u'(0) = 1 (Sturm oscillation), classical RK4.
int shooting_count(std::string const& q_src, double eta, double X) {
  auto q = parse_expression(q_src);
  double const h = 1e-3;
  double u = 0.0, v = 1.0;
  int zeros = 0;
  auto f = [&](double x, double uu) { return (q(x) - eta) * uu; };
  for (double x = 0.0; x < X - 0.5 * h; x += h) {
    double const k1u = v, k1v = f(x, u);
    double const k2u = v + 0.5 * h * k1v, k2v = f(x + 0.5 * h, u + 0.5 * h * k1u);
    double const k3u = v + 0.5 * h * k2v, k3v = f(x + 0.5 * h, u + 0.5 * h * k2u);
    double const k4u = v + h * k3v, k4v = f(x + h, u + h * k3u);
    double const un = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if ((un < 0) != (u < 0) && x > 0) ++zeros;
    u = un;
  }
  return zeros;
}

NumericsConfig small_cfg() {
  NumericsConfig c;
  c.truncations = {20.0, 40.0};
  c.run_sweeps = false;
  return c;
}


}  // namespace

TEST_CASE("count bound formulas") {
  CHECK(gap_count_bound(0, 0, BoundVariant::general_4n6k11) == 11);
  CHECK(gap_count_bound(1, 0, BoundVariant::alpha_eq_beta_gap) == 3);
  CHECK(gap_count_bound(7, 1, BoundVariant::alpha_eq_beta_gap) == 5);
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(gap_count_bound(n, k, BoundVariant::general_4n6k11) == 4 * n + 6 * k + 11);
      CHECK(gap_count_bound(n, k, BoundVariant::gap_6k11) == 6 * k + 11);
      CHECK(gap_count_bound(n, k, BoundVariant::alpha_eq_beta) == 2 * n + 2 * k + 3);
    }
}

TEST_CASE("essential gap and default eta") {
  auto g = essential_gap(essential_pieces(field("sgn(x)", "1")));
  CHECK(g.lo == -1.0);
  CHECK(g.hi == 1.0);
  CHECK(default_eta(g) == 0.0);
  auto touch = essential_gap(essential_pieces(field("sgn(x)", "-2*sech(x)^2")));
  CHECK_FALSE(touch.open());
  CHECK(default_eta(touch) == 0.0);
  CHECK_FALSE(default_count_interval(touch));
  auto I = default_count_interval(g);
  REQUIRE(I);
  CHECK(I->lo == doctest::Approx(-0.9));
  CHECK(I->hi == doctest::Approx(0.9));
}

TEST_CASE("budget for a Poschl-Teller well against shooting counts") {
  // q = 1 - 6 sech^2: the odd bound state of the whole-line well sits at 0
  std::string const q = "1-6*sech(x)^2";
  auto f = field("sgn(x)", q);
  for (double eta : {-0.5, 0.5}) {
    auto b = kappa_budget(f, eta, small_cfg());
    CHECK(b.available);
    CHECK(b.kappa_minus == static_cast<std::size_t>(shooting_count(q, eta, 40.0)));
    CHECK(b.kappa_plus == static_cast<std::size_t>(shooting_count(q, -eta, 40.0)));
    CHECK(b.kappa_eta == 0);  // alpha = beta
    CHECK(b.kappa == 1);
    CHECK(b.kappa0 == b.kappa + 2);
  }
  CHECK_THROWS_AS(kappa_budget(f, 1.5, small_cfg()), ValidationError);
  CHECK_THROWS_AS(kappa_budget(f, 1.0, small_cfg()), ValidationError);
  CHECK(kappa_budget(f, 1.0, small_cfg(), true).eta_at_edge);
}

TEST_CASE("sech^2 budget at the touching edge") {
  std::string const q = "-2*sech(x)^2";
  auto b = kappa_budget(field("sgn(x)", q), 0.0, small_cfg(), true);
  CHECK(b.available);
  CHECK(b.kappa_minus == static_cast<std::size_t>(shooting_count(q, 0.0, 40.0)));
  CHECK(b.kappa_plus == 0);
  CHECK(b.kappa == 0);
  CHECK(b.kappa0 == 2);
  CHECK_THROWS_AS(kappa_budget(field("sgn(x)", q), 0.0, small_cfg()), ValidationError);
}

TEST_CASE("budget counts form a staircase in eta") {
  // a wide shallow well puts several half-line states inside the gap
  std::string const q = "1-1.5*sech(x/5)^2";
  auto f = field("sgn(x)", q);
  std::size_t prev_minus = 0, prev_plus = SIZE_MAX, steps = 0;
  for (double eta = -0.95; eta < 0.96; eta += 0.1) {
    auto b = kappa_budget(f, eta, small_cfg());
    CHECK(b.kappa_minus >= prev_minus);
    CHECK(b.kappa_plus <= prev_plus);
    steps += b.kappa_minus != prev_minus;
    prev_minus = b.kappa_minus;
    prev_plus = b.kappa_plus;
    CHECK(b.kappa_minus == static_cast<std::size_t>(shooting_count(q, eta, 40.0)));
    CHECK(b.kappa_plus == static_cast<std::size_t>(shooting_count(q, -eta, 40.0)));
  }
  CHECK(steps >= 2);
}

TEST_CASE("middle block negative squares") {
  // window [-2, 1]
  auto f = field("pw{[-inf,-2):-1;[-2,-1):1;[-1,1):-1;[1,inf):1;}", "1-8*sech(x)^2");
  Grid const g = build_grid(-40.0, 40.0, 10.0, f.window());
  auto const mid = assemble_operator(f, g, Variant::K_alphabeta);
  std::size_t seen = 0;
  for (double eta = -0.9; eta < 0.91; eta += 0.3) {
    auto b = kappa_budget(f, eta, small_cfg());
    CHECK(b.kappa_eta == inertia_count(dense(mid.T), eta, mid.R).n_minus);
    seen += b.kappa_eta;
  }
  CHECK(seen > 0);
  auto point = kappa_budget(field("sgn(x)", "1"), 0.0, small_cfg());
  CHECK(point.kappa_eta == 0);
}

TEST_CASE("pair bound check") {
  NegativeSquaresBudget b;
  b.available = true;
  b.kappa = 0;
  b.kappa0 = 2;
  SpectrumReport r;
  r.levels.push_back({40.0, 10, {}, {}, {}, {}, 0.0, 1, 0.0});
  CHECK(pair_bound_check(b, r).pass);
  r.levels.push_back({80.0, 10, {}, {{0.1, 0.2}, {0.3, 0.1}, {0.5, 0.4}}, {}, {}, 0.0, 1, 0.0});
  auto c = pair_bound_check(b, r);
  CHECK_FALSE(c.pass);
  REQUIRE(c.offending_truncation);
  CHECK(*c.offending_truncation == 80.0);
  CHECK(c.max_pairs == 3);
  b.available = false;
  r.levels.pop_back();
  CHECK_FALSE(pair_bound_check(b, r).pass);
}

TEST_CASE("count estimate on the gap family") {
  auto f = field("sgn(x)", "1-6*sech(x)^2");
  auto cfg = small_cfg();
  auto b = kappa_budget(f, 0.5, cfg);
  auto rep = build_spectrum_report(f, cfg);
  Interval const I{-0.9, 0.9};
  auto e = count_estimate(f, I, b, rep, cfg);
  REQUIRE(e.levels.size() == 2);
  CHECK(e.pass);
  // H_0 has the eigenvalue 0 on each half-line
  CHECK(e.n_H0 == 2);
  CHECK(e.variant == BoundVariant::alpha_eq_beta);
  CHECK(e.bound == 2 * 2 + 2 * b.kappa + 3);
  std::size_t direct = 0;
  for (double x : rep.levels.back().real) direct += (I.lo < x && x < I.hi);
  CHECK(e.n_K0 == direct);
  auto g = count_estimate(f, I, b, rep, cfg, BoundVariant::general_4n6k11);
  CHECK(g.bound == 4 * 2 + 6 * b.kappa + 11);
}

TEST_CASE("structural checks") {
  auto one = structural_check(field("sgn(x)", "1"), 8.0, 10.0, 0.0);
  CHECK(one.rank_bound == 2);
  CHECK(one.resolvent_rank <= 2);
  CHECK(one.pass);
  auto wide = structural_check(field("pw{[-inf,-2):-1;[-2,-1):1;[-1,1):-1;[1,inf):1;}", "1-8*sech(x)^2"),
                               8.0, 10.0, 0.3);
  CHECK(wide.rank_bound == 4);
  CHECK(wide.resolvent_rank <= 4);
  CHECK(wide.resolvent_rank >= 3);
  CHECK(wide.pass);
  auto const shift = wide.n_minus_full > wide.n_minus_block ? wide.n_minus_full - wide.n_minus_block
                                                            : wide.n_minus_block - wide.n_minus_full;
  CHECK(shift <= wide.perturbation_rank);
}
