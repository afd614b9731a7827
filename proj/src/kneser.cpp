#include "indefsl/kneser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <quadmath.h>

#include "indefsl/error.hpp"

namespace indefsl {

namespace {

constexpr int kMaxOrder = 4;  // e_5 overflows

struct WideFamily {
  wide L = 0, P = 0, Q = 0;
};

void check_order(int n) {
  if (n < 0 || n > kMaxOrder)
    throw ValidationError("iterated logarithm order must be in [0, " + std::to_string(kMaxOrder) + "]");
}

WideFamily wide_family(int n, wide x) {
  check_order(n);
  if (!(fabsq(x) > iterated_exp_threshold(n)))
    throw DomainError("iterated logarithm of order " + std::to_string(n) + " needs |x| > e_n");
  WideFamily f;
  wide lg = x;  // log_j(x)
  f.L = x;
  for (int j = 1; j <= n; ++j) {
    f.P += 1 / f.L;
    f.Q -= 1 / (4 * f.L * f.L);
    lg = logq(fabsq(lg));
    f.L *= lg;
  }
  return f;
}

struct SideCoeffs {
  double r, p, q;
};

SideCoeffs side_limits(EndpointLimits const& lim, Side side) {
  if (side == Side::plus) return {lim.r_plus, lim.p_plus, lim.q_plus};
  return {lim.r_minus, lim.p_minus, lim.q_minus};
}

wide delta_wide(CoefficientField const& field, EndpointLimits const& lim, int n, Side side, wide x) {
  if ((side == Side::plus) != (x > 0)) throw DomainError("sample point on the wrong side");
  WideFamily const f = wide_family(n, x);
  auto const [re, pe, qe] = side_limits(lim, side);
  wide const r0 = field.r.eval_wide(x);
  wide const p0 = field.p.eval_wide(x);
  wide const q0 = field.q.eval_wide(x);
  if (p0 == 0) throw DomainError("p vanishes in the tail");
  wide const pe_w = pe;
  wide const inner = (q0 - (wide(qe) / wide(re)) * r0) / pe_w - f.Q + f.P * f.P / 4 * (1 - pe_w / p0);
  return f.L * f.L * inner;
}

double octaves(KneserPlan const& plan) { return plan.window * std::log2(plan.ratio); }

void check_plan(KneserPlan const& plan) {
  if (plan.window < 1 || plan.samples < 2 * plan.window || !(plan.ratio > 1.0))
    throw ValidationError("tail plan needs ratio > 1 and at least two windows of samples");
}

}  // namespace

double iterated_exp_threshold(int n) {
  if (n < -1) throw ValidationError("threshold index must be >= -1");
  double e = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n; ++j) e = std::exp(e);
  return e;
}

double iterated_log(int n, double x) {
  check_order(n);
  double v = x;
  for (int j = 1; j <= n; ++j) {
    if (v == 0.0) throw DomainError("iterated logarithm of zero");
    v = std::log(std::abs(v));
  }
  return v;
}

IterLogFamily iterated_log_family(int n, double x) {
  WideFamily const f = wide_family(n, x);
  return {static_cast<double>(f.L), static_cast<double>(f.P), static_cast<double>(f.Q)};
}

double delta_eval(CoefficientField const& field, EndpointLimits const& lim, int n, Side side, double x) {
  return static_cast<double>(delta_wide(field, lim, n, side, x));
}

std::vector<double> KneserPlan::points(int n) const {
  check_order(n);
  double const x0 = std::max(1.1 * iterated_exp_threshold(n), x_min);
  std::vector<double> xs(static_cast<std::size_t>(std::max(samples, 0)));
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = x0 * std::pow(ratio, static_cast<double>(k));
  return xs;
}

char const* to_string(KneserOutcome v) {
  switch (v) {
    case KneserOutcome::accumulate: return "accumulate";
    case KneserOutcome::no_accumulate: return "no_accumulate";
    case KneserOutcome::inconclusive: return "inconclusive";
  }
  return "?";
}

KneserVerdict kneser_verdict(CoefficientField const& field, EndpointLimits const& lim, int n, Side side,
                             KneserPlan const& plan, double margin) {
  lim.validate();
  if (!lim.has_gap())
    throw ValidationError("Kneser test needs a gap: q-/r- = " + std::to_string(lim.minus_edge()) +
                          " is not below q+/r+ = " + std::to_string(lim.plus_edge()));
  if (!(margin >= 0.0)) throw ValidationError("margin must be nonnegative");
  check_plan(plan);
  double const sign = side == Side::plus ? 1.0 : -1.0;
  std::vector<double> const xs = plan.points(n);
  std::vector<double> d(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) d[k] = delta_eval(field, lim, n, side, sign * xs[k]);

  auto const w = static_cast<std::size_t>(plan.window);
  auto last = d.end() - static_cast<std::ptrdiff_t>(w);
  auto prev = last - static_cast<std::ptrdiff_t>(w);
  double const sup_last = *std::max_element(last, d.end());
  double const inf_last = *std::min_element(last, d.end());
  double const sup_prev = *std::max_element(prev, last);
  double const inf_prev = *std::min_element(prev, last);

  KneserVerdict v;
  v.side = side;
  v.n = n;
  v.edge = side == Side::plus ? lim.plus_edge() : lim.minus_edge();
  v.limsup = sup_last;
  v.liminf = inf_last;
  v.margin = margin;
  double const threshold = -0.25;
  // drift towards the threshold is what makes a verdict premature
  auto settled = [&](double now, double before) {
    double const drift = (now - before) / octaves(plan);
    bool const away = (now - threshold) * drift > 0.0;
    return std::make_pair(std::abs(drift) <= plan.drift_tol || away, drift);
  };
  if (sup_last < threshold - margin) {
    auto const [ok, drift] = settled(sup_last, sup_prev);
    v.statistic = sup_last;
    v.drift = drift;
    v.settled = ok;
    v.verdict = ok ? KneserOutcome::accumulate : KneserOutcome::inconclusive;
  } else if (inf_last > threshold + margin) {
    auto const [ok, drift] = settled(inf_last, inf_prev);
    v.statistic = inf_last;
    v.drift = drift;
    v.settled = ok;
    v.verdict = ok ? KneserOutcome::no_accumulate : KneserOutcome::inconclusive;
  } else {
    v.statistic = std::abs(sup_last - threshold) < std::abs(inf_last - threshold) ? sup_last : inf_last;
    v.drift = (v.statistic == sup_last ? sup_last - sup_prev : inf_last - inf_prev) / octaves(plan);
    v.settled = std::abs(v.drift) <= plan.drift_tol;
    v.verdict = KneserOutcome::inconclusive;
  }
  return v;
}

TransferCheck perturbation_transfer_check(CoefficientField const& c0, CoefficientField const& c1, int n,
                                          KneserPlan const& plan, double tol) {
  check_order(n);
  check_plan(plan);
  TransferCheck t;
  t.n = n;
  t.tol = tol;
  std::vector<double> const xs = plan.points(n);
  std::size_t const start = xs.size() - static_cast<std::size_t>(plan.window);
  for (double sign : {1.0, -1.0}) {
    double tail = 0.0;
    for (std::size_t k = start; k < xs.size(); ++k) {
      wide const x = sign * xs[k];
      WideFamily const f = wide_family(n, x);
      wide const dr = fabsq(c1.r.eval_wide(x) - c0.r.eval_wide(x));
      wide const dp = fabsq(1 / c1.p.eval_wide(x) - 1 / c0.p.eval_wide(x));
      wide const dq = fabsq(c1.q.eval_wide(x) - c0.q.eval_wide(x));
      wide const value = f.L * f.L * (dr + f.P * f.P * dp + dq);
      tail = std::max(tail, static_cast<double>(value));
      if (n == 0)
        t.p_tail = std::max(t.p_tail, static_cast<double>(fabsq(c1.p.eval_wide(x) - c0.p.eval_wide(x))));
    }
    (sign > 0 ? t.tail_plus : t.tail_minus) = tail;
  }
  bool const q_ok = t.tail_plus <= tol && t.tail_minus <= tol;
  bool const p_ok = n > 0 || t.p_tail <= tol;
  t.pass = q_ok && p_ok;
  if (!q_ok)
    t.reason = "transfer quantity does not vanish in the tail (max " +
               std::to_string(std::max(t.tail_plus, t.tail_minus)) + ")";
  else if (!p_ok)
    t.reason = "|p1 - p0| does not vanish in the tail (max " + std::to_string(t.p_tail) + ")";
  else
    t.reason = "Kneser verdicts of the unperturbed field carry over";
  return t;
}

}  // namespace indefsl
