#include "indefsl/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "indefsl/error.hpp"
#include "indefsl/quadrature.hpp"

namespace indefsl {

namespace {

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Locates a sign change of r inside [lo, hi] (signs differ at the ends) and
// returns the first point carrying the right-hand sign.
double refine_crossing(Expr const& r, double lo, double hi) {
  int const s_lo = sign_of(r(lo));
  for (int it = 0; it < 200; ++it) {
    double const mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sign_of(r(mid)) == s_lo)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) break;
  }
  return hi;
}

std::vector<double> geometric(double x0, double ratio, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  double x = x0;
  for (auto& v : xs) {
    v = x;
    x *= ratio;
  }
  return xs;
}

bool is_periodic(EndpointMeta const& m) { return std::holds_alternative<SidePeriod>(m); }

}  // namespace

void EndpointLimits::validate() const {
  if (!(r_minus < 0.0)) throw ValidationError("r limit at -inf must be negative, got " + fmt(r_minus));
  if (!(r_plus > 0.0)) throw ValidationError("r limit at +inf must be positive, got " + fmt(r_plus));
  if (!(p_minus > 0.0) || !(p_plus > 0.0)) throw ValidationError("p limits must be positive");
  if (!std::isfinite(q_minus) || !std::isfinite(q_plus)) throw ValidationError("q limits must be finite");
}

void PeriodDescriptor::validate() const {
  if (!(omega > 0.0) || !(theta > 0.0)) throw ValidationError("periods must be positive");
}

SignWindow CoefficientField::window() const {
  if (sign_window) return *sign_window;
  return detect_sign_window(r);
}

SignWindow detect_sign_window(Expr const& r, SignScanPlan const& scan) {
  if (!(scan.step > 0.0) || !(scan.half_width > 0.0))
    throw ValidationError("sign scan needs a positive step and half width");
  auto const half = static_cast<long>(std::ceil(scan.half_width / scan.step));

  auto const left_tail = geometric(scan.half_width * 1.25, 1.25, scan.tail_samples);
  auto const right_tail = left_tail;
  int changes_left = 0, changes_right = 0;
  int prev = sign_of(r(-left_tail.back()));
  for (auto it = left_tail.rbegin(); it != left_tail.rend(); ++it) {
    int const s = sign_of(r(-*it));
    if (s != prev) ++changes_left;
    prev = s;
  }
  prev = sign_of(r(right_tail.front()));
  for (double x : right_tail) {
    int const s = sign_of(r(x));
    if (s != prev) ++changes_right;
    prev = s;
  }
  if (changes_left > 0 || changes_right > 0)
    throw ValidationError("no admissible sign window: sign changes of r continue into the tail");
  if (sign_of(r(-left_tail.front())) > 0)
    throw ValidationError("sign hypothesis violated: r is positive near -inf");
  if (sign_of(r(right_tail.front())) < 0)
    throw ValidationError("sign hypothesis violated: r is negative near +inf");

  // uniform scan with x = k * step so that 0 is an exact node
  double first = 0.0, last = 0.0;
  bool found = false;
  double x_prev = -scan.half_width * 1.25;
  int s_prev = sign_of(r(x_prev));
  for (long k = -half; k <= half + 1; ++k) {
    double const x = (k == half + 1) ? scan.half_width * 1.25 : static_cast<double>(k) * scan.step;
    int const s = sign_of(r(x));
    if (s != s_prev) {
      double const c = refine_crossing(r, x_prev, x);
      if (!found) first = c;
      last = c;
      found = true;
    }
    x_prev = x;
    s_prev = s;
  }
  if (!found) throw ValidationError("sign hypothesis violated: r does not change sign");
  if (std::abs(first) > 0.5 * scan.half_width || std::abs(last) > 0.5 * scan.half_width)
    throw ValidationError("no admissible sign window: sign changes detected far out (" + fmt(first) +
                          ", " + fmt(last) + ")");
  return {first, last};
}

std::vector<double> TailGrid::points() const { return geometric(x0, ratio, samples); }

TailLimit tail_limit(Expr const& f, double sign, TailGrid const& grid) {
  auto const xs = grid.points();
  std::vector<double> v(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) v[k] = f(sign * xs[k]);
  TailLimit out;
  int first_ok = static_cast<int>(v.size());
  for (int k = static_cast<int>(v.size()) - 1; k >= 1; --k) {
    double const tol = grid.cauchy_tol * std::max(1.0, std::abs(v[k]));
    if (std::abs(v[k] - v[k - 1]) > tol) break;
    first_ok = k;
  }
  int const passing = static_cast<int>(v.size()) - first_ok;
  out.converged = passing >= 5;
  out.converged_at = out.converged ? first_ok - 1 : -1;
  out.value = v.back();
  return out;
}

bool LimitEstimate::all_converged() const {
  return r_minus.converged && r_plus.converged && p_minus.converged && p_plus.converged &&
         q_minus.converged && q_plus.converged;
}

namespace {

// The last tail sample still carries the decaying part of the coefficient
// (c/x^2 leaves about 1e-13 at the end of the grid). Kneser-type tests
// compare the coefficient with its limit far beyond that point, so the
// estimate is rounded to 10 digits on the scale max(1, |v|).
double round_significant(double v, int digits) {
  if (!std::isfinite(v)) return v;
  double const mag = std::floor(std::log10(std::max(1.0, std::abs(v))));
  double const scale = std::pow(10.0, digits - 1 - static_cast<int>(mag));
  return std::round(v * scale) / scale;
}

}  // namespace

std::optional<EndpointLimits> LimitEstimate::limits() const {
  if (!all_converged()) return std::nullopt;
  auto c = [](TailLimit const& t) { return round_significant(t.value, 10); };
  EndpointLimits lim{c(r_minus), c(r_plus), c(p_minus), c(p_plus), c(q_minus), c(q_plus)};
  if (!(lim.r_minus < 0.0 && lim.r_plus > 0.0 && lim.p_minus > 0.0 && lim.p_plus > 0.0))
    return std::nullopt;
  return lim;
}

LimitEstimate estimate_endpoint_limits(CoefficientField const& field, TailGrid const& grid) {
  LimitEstimate e;
  e.r_minus = tail_limit(field.r, -1.0, grid);
  e.r_plus = tail_limit(field.r, 1.0, grid);
  e.p_minus = tail_limit(field.p, -1.0, grid);
  e.p_plus = tail_limit(field.p, 1.0, grid);
  e.q_minus = tail_limit(field.q, -1.0, grid);
  e.q_plus = tail_limit(field.q, 1.0, grid);
  return e;
}

std::optional<EndpointLimits> resolve_limits(CoefficientField const& field) {
  if (is_periodic(field.at_a) || is_periodic(field.at_b)) return std::nullopt;
  auto const* lm = std::get_if<SideLimits>(&field.at_a);
  auto const* lp = std::get_if<SideLimits>(&field.at_b);
  std::optional<EndpointLimits> est;
  if (!lm || !lp) {
    est = estimate_endpoint_limits(field).limits();
    if (!est) return std::nullopt;
  }
  EndpointLimits lim = est.value_or(EndpointLimits{});
  if (lm) {
    lim.r_minus = lm->r;
    lim.p_minus = lm->p;
    lim.q_minus = lm->q;
  }
  if (lp) {
    lim.r_plus = lp->r;
    lim.p_plus = lp->p;
    lim.q_plus = lp->q;
  }
  lim.validate();
  return lim;
}

void validate_field(CoefficientField const& field, double lo, double hi, double step) {
  if (!(field.a < field.b)) throw ValidationError("interval endpoints must satisfy a < b");
  lo = std::max(lo, field.a);
  hi = std::min(hi, field.b);
  if (!field.r.pieces_cover(field.a, field.b) || !field.p.pieces_cover(field.a, field.b) ||
      !field.q.pieces_cover(field.a, field.b))
    throw ValidationError("piecewise coefficient does not cover the interval");
  auto const n = static_cast<long>(std::ceil((hi - lo) / step));
  double rmax = 0.0;
  std::vector<double> rs;
  rs.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) {
    double const x = std::min(hi, lo + static_cast<double>(k) * step);
    if (x <= field.a || x >= field.b) continue;
    double const p = field.p(x);
    if (!(p > 0.0)) throw ValidationError("p must be positive; p(" + fmt(x) + ") = " + fmt(p));
    (void)field.q(x);
    double const r = field.r(x);
    rmax = std::max(rmax, std::abs(r));
    rs.push_back(r);
  }
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (std::abs(rs[k]) < 1e-12 * rmax) {
      double const x = std::min(hi, lo + static_cast<double>(k) * step);
      throw ValidationError("weight r vanishes near x = " + fmt(x));
    }
  }
  if (field.sign_window && field.sign_window->alpha > field.sign_window->beta)
    throw ValidationError("sign window needs alpha <= beta");
  if (auto const* pm = std::get_if<SidePeriod>(&field.at_a); pm && !(pm->length > 0.0))
    throw ValidationError("endpoints.minus.length must be positive");
  if (auto const* pp = std::get_if<SidePeriod>(&field.at_b); pp && !(pp->length > 0.0))
    throw ValidationError("endpoints.plus.length must be positive");
}

HypothesisReport check_hypotheses(CoefficientField const& field) {
  HypothesisReport rep;

  // h1: sign window
  try {
    SignWindow w = field.window();
    rep.window = w;
    if (field.sign_window) {
      // declared window: verify the signs on samples outside it
      constexpr double step = 0.01;
      for (double x = w.alpha - step; x > w.alpha - 100.0; x -= step) {
        if (field.r(x) >= 0.0) {
          rep.h1_sign_window.witnesses.push_back(x);
          break;
        }
      }
      for (double x = w.beta + step; x < w.beta + 100.0; x += step) {
        if (field.r(x) <= 0.0) {
          rep.h1_sign_window.witnesses.push_back(x);
          break;
        }
      }
      for (double x : TailGrid{}.points()) {
        if (field.r(-x - std::abs(w.alpha)) >= 0.0) rep.h1_sign_window.witnesses.push_back(-x);
        if (field.r(x + std::abs(w.beta)) <= 0.0) rep.h1_sign_window.witnesses.push_back(x);
        if (rep.h1_sign_window.witnesses.size() > 4) break;
      }
      if (!rep.h1_sign_window.witnesses.empty()) {
        rep.h1_sign_window.status = CheckStatus::fail;
        rep.h1_sign_window.detail = "r has the wrong sign outside the declared window";
      } else {
        rep.h1_sign_window.detail = "declared window verified on samples";
      }
    } else {
      rep.h1_sign_window.detail = "detected window";
    }
  } catch (ValidationError const& e) {
    rep.h1_sign_window.status = CheckStatus::fail;
    rep.h1_sign_window.detail = e.what();
    // witnesses: sample points where r has the wrong sign for its end
    for (double x : TailGrid{}.points()) {
      if (field.r(-x) >= 0.0) rep.h1_sign_window.witnesses.push_back(-x);
      if (field.r(x) <= 0.0) rep.h1_sign_window.witnesses.push_back(x);
      if (rep.h1_sign_window.witnesses.size() >= 4) break;
    }
    if (rep.h1_sign_window.witnesses.empty()) {
      // sign changes inside the scan range only (or none at all)
      rep.h1_sign_window.witnesses.push_back(field.r(-10.0) >= 0.0 ? -10.0 : 10.0);
    }
  }

  // h3: q/r bounded near both ends (growth test on the geometric tail)
  TailGrid const grid;
  auto const xs = grid.points();
  std::size_t const half = xs.size() / 2;
  for (double sign : {-1.0, 1.0}) {
    double first = 0.0, second = 0.0, worst_x = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      double const x = sign * xs[k];
      double const v = std::abs(field.q(x) / field.r(x));
      if (k < half) {
        first = std::max(first, v);
      } else if (v > second) {
        second = v;
        worst_x = x;
      }
    }
    if (second > 10.0 * std::max(1.0, first)) {
      rep.h3_bounded_q_over_r.status = CheckStatus::fail;
      rep.h3_bounded_q_over_r.witnesses.push_back(worst_x);
    }
  }
  rep.h3_bounded_q_over_r.detail = rep.h3_bounded_q_over_r.status == CheckStatus::fail
                                       ? "q/r grows along the tail"
                                       : "q/r bounded on tail samples";

  // h2: certified only in the limits or periodic regimes
  bool const periodic = is_periodic(field.at_a) && is_periodic(field.at_b);
  bool limits = false;
  if (!periodic) {
    try {
      limits = resolve_limits(field).has_value();
    } catch (ValidationError const&) {
      limits = false;
    }
  }
  if (periodic) {
    rep.h2_limit_point.detail = "periodic coefficients at both ends";
  } else if (limits && rep.h3_bounded_q_over_r.status == CheckStatus::pass) {
    rep.h2_limit_point.detail = "coefficients admit limits at both ends";
  } else {
    rep.h2_limit_point.status = CheckStatus::assumed;
    rep.h2_limit_point.detail = "not certified numerically";
  }
  return rep;
}

namespace {

ComparisonReport compare_limits(CoefficientField const& c0, CoefficientField const& c1) {
  ComparisonReport rep;
  rep.mode = ComparisonMode::limits;
  rep.pass = true;
  struct Check {
    Expr e;
    double target;
    char const* name;
  };
  Check const checks[] = {
      {Expr::div(c1.r, c0.r), 1.0, "r1/r0"},
      {Expr::div(c1.p, c0.p), 1.0, "p1/p0"},
      {Expr::div(Expr::sub(c1.q, c0.q), c0.r), 0.0, "(q1-q0)/r0"},
  };
  TailGrid const grid;
  for (auto const& c : checks) {
    for (double sign : {-1.0, 1.0}) {
      TailLimit const t = tail_limit(c.e, sign, grid);
      double const dev = std::abs(t.value - c.target);
      rep.value = std::max(rep.value, dev);
      if (!t.converged) {
        rep.pass = false;
        if (rep.reason.empty())
          rep.reason = std::string(c.name) + " has no limit at " + (sign < 0 ? "-inf" : "+inf");
      } else if (dev > grid.cauchy_tol * std::max(1.0, std::abs(c.target))) {
        rep.pass = false;
        if (rep.reason.empty())
          rep.reason = std::string(c.name) + " tends to " + fmt(t.value) + " at " +
                       (sign < 0 ? "-inf" : "+inf");
      }
    }
  }
  return rep;
}

}  // namespace

ComparisonReport check_comparison_conditions(CoefficientField const& c0, CoefficientField const& c1,
                                             ComparisonMode mode) {
  if (c0.a != c1.a || c0.b != c1.b) throw ValidationError("compared fields must share the interval");
  if (mode == ComparisonMode::limits) return compare_limits(c0, c1);

  bool const moment = mode == ComparisonMode::first_moment;
  auto integrand = [&](double t) {
    double v = std::abs(c1.r(t) - c0.r(t)) + std::abs(1.0 / c1.p(t) - 1.0 / c0.p(t)) +
               std::abs(c1.q(t) - c0.q(t));
    return moment ? v * std::abs(t) : v;
  };
  ComparisonReport rep;
  rep.mode = mode;
  ImproperIntegral const I = integrate_real_line(integrand);
  rep.value = I.value;
  rep.pass = I.converged;
  if (!I.converged) rep.reason = I.reason;
  return rep;
}

char const* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::assumed: return "assumed";
  }
  return "?";
}

char const* to_string(ComparisonMode m) {
  switch (m) {
    case ComparisonMode::limits: return "limits";
    case ComparisonMode::l1: return "l1";
    case ComparisonMode::first_moment: return "first_moment";
  }
  return "?";
}

}  // namespace indefsl
