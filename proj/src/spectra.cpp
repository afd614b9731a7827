#include "indefsl/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "indefsl/assembly.hpp"
#include "indefsl/error.hpp"

namespace indefsl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------- band sets

BandSet BandSet::normalized(std::vector<Band> bands) {
  for (auto const& b : bands)
    if (!(b.lo <= b.hi) || std::isnan(b.lo) || std::isnan(b.hi))
      throw ValidationError("band needs lo <= hi");
  std::sort(bands.begin(), bands.end(), [](Band const& a, Band const& b) { return a.lo < b.lo; });
  BandSet out;
  for (auto const& b : bands) {
    if (!out.bands.empty() && b.lo <= out.bands.back().hi)
      out.bands.back().hi = std::max(out.bands.back().hi, b.hi);
    else
      out.bands.push_back(b);
  }
  return out;
}

bool BandSet::contains(double x) const {
  return std::any_of(bands.begin(), bands.end(), [&](Band const& b) { return b.lo <= x && x <= b.hi; });
}

std::vector<double> BandSet::boundary() const {
  std::vector<double> out;
  for (auto const& b : bands) {
    if (std::isfinite(b.lo)) out.push_back(b.lo);
    if (std::isfinite(b.hi) && b.hi != b.lo) out.push_back(b.hi);
  }
  return out;
}

std::vector<Band> BandSet::gaps() const {
  std::vector<Band> out;
  for (std::size_t i = 0; i + 1 < bands.size(); ++i) out.push_back({bands[i].hi, bands[i + 1].lo});
  return out;
}

BandSet BandSet::reflected() const {
  std::vector<Band> out;
  for (auto const& b : bands) out.push_back({-b.hi, -b.lo});
  return normalized(std::move(out));
}

BandSet essential_union(BandSet const& a, BandSet const& b) {
  std::vector<Band> all = a.bands;
  all.insert(all.end(), b.bands.begin(), b.bands.end());
  return BandSet::normalized(std::move(all));
}

BandSet band_intersection(BandSet const& a, BandSet const& b) {
  std::vector<Band> out;
  for (auto const& x : a.bands)
    for (auto const& y : b.bands) {
      double const lo = std::max(x.lo, y.lo);
      double const hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
  return BandSet::normalized(std::move(out));
}

BandSet essential_plus(EndpointLimits const& lim) {
  lim.validate();
  return BandSet::normalized({{lim.plus_edge(), kInf}});
}

BandSet essential_minus(EndpointLimits const& lim) {
  lim.validate();
  return BandSet::normalized({{-kInf, lim.minus_edge()}});
}

BandSet essential_from_limits(EndpointLimits const& lim) {
  return essential_union(essential_minus(lim), essential_plus(lim));
}

char const* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }
char const* to_string(Approach a) { return a == Approach::below ? "below" : "above"; }

char const* to_string(Accumulation a) {
  switch (a) {
    case Accumulation::none: return "none";
    case Accumulation::accumulating: return "accumulating";
    case Accumulation::unknown: return "unknown";
  }
  return "?";
}

char const* to_string(PropertyP p) {
  switch (p) {
    case PropertyP::holds: return "holds";
    case PropertyP::fails: return "fails";
    case PropertyP::unknown: return "unknown";
  }
  return "?";
}

char const* to_string(SweepVerdict v) {
  switch (v) {
    case SweepVerdict::accumulating: return "accumulating";
    case SweepVerdict::finite: return "finite";
    case SweepVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// ------------------------------------------------------- Hill discriminant

namespace {

struct PeriodCell {
  double start;
  double length;
};

double period_of(CoefficientField const& field, Side side) {
  auto const& meta = side == Side::plus ? field.at_b : field.at_a;
  auto const* per = std::get_if<SidePeriod>(&meta);
  if (!per) throw ValidationError(std::string("no period declared on the ") + to_string(side) + " side");
  if (!(per->length > 0.0)) throw ValidationError("period length must be positive");
  return per->length;
}

PeriodCell tail_cell(CoefficientField const& field, Side side, SignWindow const& w) {
  double const len = period_of(field, side);
  if (side == Side::plus) return {std::max(w.beta, 0.0) + 40.0, len};
  return {std::min(w.alpha, 0.0) - 40.0 - len, len};
}

double discriminant_on(CoefficientField const& field, PeriodCell const& cell, double lambda) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 4>;  // u1, v1, u2, v2 with v = p u'
  auto rhs = [&](State const& s, State& ds, double x) {
    double const p = field.p(x);
    double const c = field.q(x) - lambda * std::abs(field.r(x));
    ds[0] = s[1] / p;
    ds[1] = c * s[0];
    ds[2] = s[3] / p;
    ds[3] = c * s[2];
  };
  State s{1.0, 0.0, 0.0, 1.0};
  auto stepper = odeint::make_controlled(1e-12, 1e-10, odeint::runge_kutta_dopri5<State>());
  double const x0 = cell.start;
  double const x1 = cell.start + cell.length;
  try {
    odeint::integrate_adaptive(stepper, rhs, s, x0, x1, cell.length / 64.0);
  } catch (std::exception const& e) {
    throw NumericalError(std::string("Hill integrator failed: ") + e.what());
  }
  double const D = s[0] + s[3];
  if (!std::isfinite(D)) throw NumericalError("Hill discriminant is not finite");
  return D;
}

}  // namespace

double hill_discriminant(CoefficientField const& field, Side side, double lambda) {
  return discriminant_on(field, tail_cell(field, side, field.window()), lambda);
}

namespace {

PeriodicBands bands_on(CoefficientField const& field, PeriodCell const& cell, int k_max,
                       std::function<double(double)> const& D) {
  if (k_max < 1) throw ValidationError("k_max must be at least 1");
  double qmin = kInf, qmax = -kInf, pmax = 0.0;
  for (int i = 0; i <= 256; ++i) {
    double const x = cell.start + cell.length * i / 256.0;
    double const ar = std::abs(field.r(x));
    qmin = std::min(qmin, field.q(x) / ar);
    qmax = std::max(qmax, field.q(x) / ar);
    pmax = std::max(pmax, field.p(x) / ar);
  }
  double const kw = k_max * std::numbers::pi / cell.length;
  PeriodicBands out;
  out.cap_lo = qmin - 1.0;
  out.cap_hi = qmax + pmax * kw * kw + 10.0;

  constexpr double tau = 1e-8;  // |D| - 2 above this counts as a gap
  auto outside = [&](double d) { return std::abs(d) - 2.0 > tau; };

  // edge between a and b where `outside` flips
  auto bisect = [&](double a, double b, bool out_a) {
    for (int it = 0; it < 200 && b - a > 1e-10 * std::max(1.0, std::abs(a)); ++it) {
      double const m = 0.5 * (a + b);
      if (outside(D(m)) == out_a)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };

  std::size_t const M = 200 * static_cast<std::size_t>(k_max) + 200;
  std::vector<double> lam(M + 1), d(M + 1);
  for (std::size_t i = 0; i <= M; ++i) {
    lam[i] = out.cap_lo + (out.cap_hi - out.cap_lo) * static_cast<double>(i) / static_cast<double>(M);
    d[i] = D(lam[i]);
  }

  struct Event {
    double at;
    bool enters_band;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i + 1 <= M; ++i) {
    bool const oa = outside(d[i]), ob = outside(d[i + 1]);
    if (oa != ob) events.push_back({bisect(lam[i], lam[i + 1], oa), oa});
    // a narrow gap between samples shows up as a local maximum of |D| near 2
    if (i >= 1 && !outside(d[i - 1]) && !outside(d[i]) && !oa && !ob) {
      double const a0 = std::abs(d[i - 1]), a1 = std::abs(d[i]), a2 = std::abs(d[i + 1]);
      if (a1 >= a0 && a1 >= a2 && a1 > 1.5) {
        double lo = lam[i - 1], hi = lam[i + 1];
        constexpr double gr = 0.6180339887498949;
        double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
        double f1 = std::abs(D(c1)), f2 = std::abs(D(c2));
        for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
          if (f1 > f2) {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - gr * (hi - lo);
            f1 = std::abs(D(c1));
          } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + gr * (hi - lo);
            f2 = std::abs(D(c2));
          }
        }
        double const peak = 0.5 * (lo + hi);
        if (outside(D(peak))) {
          events.push_back({bisect(lam[i - 1], peak, false), false});
          events.push_back({bisect(peak, lam[i + 1], true), true});
        }
      }
    }
  }
  std::sort(events.begin(), events.end(), [](Event const& a, Event const& b) { return a.at < b.at; });

  std::vector<Band> bands;
  bool inside = !outside(d[0]);
  double start = inside ? out.cap_lo : 0.0;
  for (auto const& e : events) {
    if (e.enters_band && !inside) {
      start = e.at;
      inside = true;
    } else if (!e.enters_band && inside) {
      bands.push_back({start, e.at});
      inside = false;
    }
  }
  if (inside) {
    bands.push_back({start, kInf});
    out.reached_cap = true;
  }
  out.found = bands.size();
  if (bands.size() > static_cast<std::size_t>(k_max)) bands.resize(static_cast<std::size_t>(k_max));
  out.partial = out.found < static_cast<std::size_t>(k_max);
  out.bands = BandSet::normalized(std::move(bands));
  return out;
}

}  // namespace

namespace {

PeriodicBands to_k0(PeriodicBands pb, Side side) {
  if (side == Side::minus) {
    pb.bands = pb.bands.reflected();
    double const lo = pb.cap_lo;
    pb.cap_lo = -pb.cap_hi;
    pb.cap_hi = -lo;
  }
  return pb;
}

}  // namespace

PeriodicBands periodic_bands(CoefficientField const& field, Side side, int k_max) {
  PeriodCell const cell = tail_cell(field, side, field.window());
  return to_k0(bands_on(field, cell, k_max, [&](double l) { return discriminant_on(field, cell, l); }), side);
}

// ------------------------------------------------- discretized periodic tail

namespace {

int period_nodes(double period, double density) {
  return std::max(4, static_cast<int>(std::ceil(period * density - 1e-9)));
}

// First node of the aligned lattice anchor + k h at or beyond the tail cell.
PeriodCell aligned_cell(CoefficientField const& field, Side side, double density, double anchor) {
  double const len = period_of(field, side);
  double const h = len / period_nodes(len, density);
  PeriodCell const c = tail_cell(field, side, field.window());
  return {anchor + std::ceil((c.start - anchor) / h) * h, len};
}

// -a_{i-1} u_{i-1} + (a_{i-1} + a_i + h (q_i - lambda |r_i|)) u_i - a_i u_{i+1} = 0
// with a_i = p(x_i + h/2) / h, the rows of assemble_operator on a uniform grid.
double discrete_trace(CoefficientField const& field, PeriodCell const& cell, int m, double lambda) {
  double const h = cell.length / m;
  // (u_i, u_{i-1}) -> (u_{i+1}, u_i); M accumulates the product
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  for (int i = 0; i < m; ++i) {
    double const x = cell.start + i * h;
    double const al = field.p(x - 0.5 * h) / h;
    double const ar = field.p(x + 0.5 * h) / h;
    double const c = (al + ar + h * (field.q(x) - lambda * std::abs(field.r(x)))) / ar;
    double const d = -al / ar;
    double const n00 = c * m00 + d * m10, n01 = c * m01 + d * m11;
    m10 = m00;
    m11 = m01;
    m00 = n00;
    m01 = n01;
  }
  double const D = m00 + m11;
  if (!std::isfinite(D)) throw NumericalError("discrete Hill discriminant is not finite");
  return D;
}

}  // namespace

double discrete_hill_discriminant(CoefficientField const& field, Side side, double lambda, double density,
                                  double anchor) {
  PeriodCell const cell = aligned_cell(field, side, density, anchor);
  return discrete_trace(field, cell, period_nodes(cell.length, density), lambda);
}

PeriodicBands discrete_periodic_bands(CoefficientField const& field, Side side, double density, double anchor,
                                      int k_max) {
  PeriodCell const cell = aligned_cell(field, side, density, anchor);
  int const m = period_nodes(cell.length, density);
  return to_k0(bands_on(field, cell, k_max, [&](double l) { return discrete_trace(field, cell, m, l); }), side);
}

// ---------------------------------------------------------- classification

namespace {

Accumulation lookup(std::vector<AccumulationFlag> const& flags, Side op, double edge, Approach ap) {
  for (auto const& f : flags)
    if (f.op == op && f.approach == ap && std::abs(f.edge - edge) <= 1e-9 * std::max(1.0, std::abs(edge)))
      return f.status;
  return Accumulation::unknown;
}

// Is there a one-sided neighbourhood of x free of the essential spectrum?
bool ess_free_left(BandSet const& s, double x) {
  return std::none_of(s.bands.begin(), s.bands.end(), [&](Band const& b) { return b.lo < x && x <= b.hi; });
}
bool ess_free_right(BandSet const& s, double x) {
  return std::none_of(s.bands.begin(), s.bands.end(), [&](Band const& b) { return b.lo <= x && x < b.hi; });
}

PropertyP one_case(bool ess_left, Accumulation acc_left, bool ess_right, Accumulation acc_right) {
  if (!ess_left || !ess_right) return PropertyP::fails;
  if (acc_left == Accumulation::accumulating || acc_right == Accumulation::accumulating)
    return PropertyP::fails;
  if (acc_left == Accumulation::none && acc_right == Accumulation::none) return PropertyP::holds;
  return PropertyP::unknown;
}

}  // namespace

std::vector<EdgeClassification> classify_edges(BandSet const& plus, BandSet const& minus,
                                               std::vector<AccumulationFlag> const& flags) {
  std::vector<EdgeClassification> out;
  for (double x : band_intersection(plus, minus).boundary()) {
    EdgeClassification e;
    e.location = x;
    e.plus_below = lookup(flags, Side::plus, x, Approach::below);
    e.minus_above = lookup(flags, Side::minus, x, Approach::above);
    e.minus_below = lookup(flags, Side::minus, x, Approach::below);
    e.plus_above = lookup(flags, Side::plus, x, Approach::above);
    e.case_a = one_case(ess_free_left(plus, x), e.plus_below, ess_free_right(minus, x), e.minus_above);
    e.case_b = one_case(ess_free_left(minus, x), e.minus_below, ess_free_right(plus, x), e.plus_above);
    if (e.case_a == PropertyP::holds || e.case_b == PropertyP::holds)
      e.status = PropertyP::holds;
    else if (e.case_a == PropertyP::fails && e.case_b == PropertyP::fails)
      e.status = PropertyP::fails;
    else
      e.status = PropertyP::unknown;
    out.push_back(e);
  }
  return out;
}

// ------------------------------------------------------ accumulation sweep

SweepVerdict sweep_verdict(std::vector<std::size_t> const& counts) {
  if (counts.size() < 2) return SweepVerdict::inconclusive;
  bool strictly = true;
  for (std::size_t i = 0; i + 1 < counts.size(); ++i) strictly = strictly && counts[i] < counts[i + 1];
  if (strictly) return SweepVerdict::accumulating;
  if (counts[counts.size() - 1] == counts[counts.size() - 2]) return SweepVerdict::finite;
  return SweepVerdict::inconclusive;
}

AccumulationEvidence accumulation_sweep(CoefficientField const& field, double edge, Approach approach,
                                        std::vector<double> const& levels, double density,
                                        std::optional<Side> op, std::optional<double> delta) {
  if (levels.size() < 3) throw ValidationError("accumulation sweep needs at least 3 truncation levels");
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    if (!(levels[i] < levels[i + 1])) throw ValidationError("truncation levels must increase");
  AccumulationEvidence ev;
  ev.op = op.value_or(approach == Approach::below ? Side::plus : Side::minus);
  ev.edge = edge;
  ev.approach = approach;
  ev.delta = delta.value_or(0.1 * std::max(1.0, std::abs(edge)));
  if (!(ev.delta > 0.0)) throw ValidationError("sweep window must be positive");
  ev.levels = levels;
  ev.grid_edge = edge;
  SignWindow const w = field.window();
  double const anchor = ev.op == Side::plus ? w.beta : w.alpha;

  // periodic tail: match the exact edge with a band edge of the discretized
  // operator, otherwise the band eigenvalues of every truncation leak into
  // the window and look like accumulation
  std::optional<double> h_aligned;
  auto const& meta = ev.op == Side::plus ? field.at_b : field.at_a;
  if (auto const* per = std::get_if<SidePeriod>(&meta)) {
    h_aligned = per->length / period_nodes(per->length, density);
    PeriodicBands pb;
    // enough bands to reach past the edge, or all of them
    for (int k = 1; k <= 64; k *= 2) {
      pb = discrete_periodic_bands(field, ev.op, density, anchor, k);
      if (pb.bands.empty() || (pb.partial && pb.reached_cap)) break;
      bool const beyond = ev.op == Side::plus ? pb.bands.bands.back().hi > edge + ev.delta
                                              : pb.bands.bands.front().lo < edge - ev.delta;
      if (beyond) break;
    }
    double best = kInf;
    for (auto const& b : pb.bands.bands) {
      double const e = approach == Approach::below ? b.lo : b.hi;
      if (std::isfinite(e) && std::abs(e - edge) < std::abs(best - edge)) best = e;
    }
    if (!(std::abs(best - edge) < ev.delta)) return ev;  // gap not resolved at this density
    ev.grid_edge = best;
  }

  // window in pencil coordinates of (T, |R|); for -H_- eigenvalues flip sign
  double const e = ev.grid_edge;
  Interval I = approach == Approach::below ? Interval{e - ev.delta, e} : Interval{e, e + ev.delta};
  if (ev.op == Side::minus) I = {-I.hi, -I.lo};

  for (double X : levels) {
    Grid g;
    if (ev.op == Side::plus) {
      if (!(X > w.beta + 1.0)) throw ValidationError("truncation level does not reach past beta");
      g = h_aligned ? uniform_grid(w.beta, w.beta + std::ceil((X - w.beta) / *h_aligned) * *h_aligned,
                                   static_cast<int>(std::ceil((X - w.beta) / *h_aligned)))
                    : build_grid(w.beta, X, density);
    } else {
      if (!(-X < w.alpha - 1.0)) throw ValidationError("truncation level does not reach past alpha");
      g = h_aligned ? uniform_grid(w.alpha - std::ceil((X + w.alpha) / *h_aligned) * *h_aligned, w.alpha,
                                   static_cast<int>(std::ceil((X + w.alpha) / *h_aligned)))
                    : build_grid(-X, w.alpha, density);
    }
    AssembledOperator const A = assemble_operator(field, g, Variant::L_full);
    ev.counts.push_back(count_in_interval(A.T, A.R, I));
  }
  ev.verdict = sweep_verdict(ev.counts);
  return ev;
}

// ------------------------------------------------------------- the report

EssentialPieces essential_pieces(CoefficientField const& field, int k_max) {
  EssentialPieces out;
  bool const per_plus = std::holds_alternative<SidePeriod>(field.at_b);
  bool const per_minus = std::holds_alternative<SidePeriod>(field.at_a);

  auto side_limits = [&](Side s) -> std::optional<SideLimits> {
    auto const& meta = s == Side::plus ? field.at_b : field.at_a;
    if (auto const* l = std::get_if<SideLimits>(&meta)) return *l;
    double const sign = s == Side::plus ? 1.0 : -1.0;
    TailLimit const r = tail_limit(field.r, sign), p = tail_limit(field.p, sign), q = tail_limit(field.q, sign);
    if (!r.converged || !p.converged || !q.converged) return std::nullopt;
    return SideLimits{r.value, p.value, q.value};
  };

  std::optional<SideLimits> lp, lm;
  if (per_plus) {
    out.periodic_plus = periodic_bands(field, Side::plus, k_max);
    out.plus = out.periodic_plus->bands;
  } else if ((lp = side_limits(Side::plus)) && lp->r > 0.0 && lp->p > 0.0) {
    out.plus = BandSet::normalized({{lp->q / lp->r, kInf}});
  }
  if (per_minus) {
    out.periodic_minus = periodic_bands(field, Side::minus, k_max);
    out.minus = out.periodic_minus->bands;
  } else if ((lm = side_limits(Side::minus)) && lm->r < 0.0 && lm->p > 0.0) {
    out.minus = BandSet::normalized({{-kInf, lm->q / lm->r}});
  }
  // edges of the two pieces that agree to within the accuracy of the band
  // edge search are one point (e.g. both free tails touch at 0)
  if (out.plus && out.minus) {
    for (auto& a : out.plus->bands)
      for (auto& b : out.minus->bands)
        for (double* x : {&a.lo, &a.hi})
          for (double* y : {&b.lo, &b.hi})
            if (std::isfinite(*x) && std::isfinite(*y) && *x != *y &&
                std::abs(*x - *y) <= 1e-6 * std::max(1.0, std::abs(*x)))
              *x = *y = 0.5 * (*x + *y);
    out.plus = BandSet::normalized(out.plus->bands);
    out.minus = BandSet::normalized(out.minus->bands);
    if (out.periodic_plus) out.periodic_plus->bands = *out.plus;
    if (out.periodic_minus) out.periodic_minus->bands = *out.minus;
  }
  if (lp && lm && !per_plus && !per_minus && out.plus && out.minus)
    out.limits = EndpointLimits{lm->r, lp->r, lm->p, lp->p, lm->q, lp->q};

  if (!out.plus || !out.minus)
    out.regime = "unknown";
  else if (per_plus && per_minus)
    out.regime = "periodic";
  else if (per_plus || per_minus)
    out.regime = "mixed";
  else
    out.regime = "limits";
  return out;
}

namespace {

// Width of the gap of `s` adjacent to `edge` on the approach side.
double adjacent_gap(BandSet const& s, double edge, Approach ap) {
  double best = kInf;
  for (auto const& g : s.gaps()) {
    if (ap == Approach::below && g.hi == edge) best = g.hi - g.lo;
    if (ap == Approach::above && g.lo == edge) best = g.hi - g.lo;
  }
  return best;
}

}  // namespace

SpectrumReport build_spectrum_report(CoefficientField const& field, NumericsConfig const& cfg) {
  if (std::isfinite(field.a) || std::isfinite(field.b))
    throw ValidationError("the analysis pipeline needs (a, b) = (-inf, inf)");
  if (cfg.truncations.empty()) throw ValidationError("at least one truncation level is required");
  SpectrumReport rep;
  HypothesisReport const hyp = check_hypotheses(field);
  if (!hyp.ok()) {
    if (!cfg.override_hypotheses)
      throw ValidationError("hypotheses not satisfied: " + hyp.h1_sign_window.detail + "; " +
                            hyp.h3_bounded_q_over_r.detail);
    rep.notes.push_back("hypothesis check failed; continuing on override");
  }
  rep.window = hyp.window ? *hyp.window : field.window();

  EssentialPieces const ess = essential_pieces(field, cfg.k_max);
  rep.regime = ess.regime;
  rep.essential_plus = ess.plus;
  rep.essential_minus = ess.minus;
  rep.periodic_plus = ess.periodic_plus;
  rep.periodic_minus = ess.periodic_minus;
  rep.limits = ess.limits;
  if (ess.plus && ess.minus)
    rep.essential = essential_union(*ess.plus, *ess.minus);
  else
    rep.notes.push_back("essential spectrum unknown: no limits or periods at one end");

  for (double X : cfg.truncations) {
    Grid const g = build_grid(-X, X, cfg.density, rep.window);
    AssembledOperator const K = assemble_operator(field, g, Variant::K_full);
    ComplexSpectrum const s = indefinite_eigs(K.T, K.R, cfg.im_tol);
    LevelSpectrum lv;
    lv.truncation = X;
    lv.order = K.size();
    lv.real = s.real;
    lv.pairs = s.pairs;
    lv.real_residuals = s.real_residuals;
    lv.pair_residuals = s.pair_residuals;
    lv.im_tol = s.im_tol;
    lv.max_cluster = s.max_cluster;
    for (double r : s.real_residuals) lv.max_residual = std::max(lv.max_residual, r);
    for (double r : s.pair_residuals) lv.max_residual = std::max(lv.max_residual, r);
    for (auto const& mu : s.pairs) rep.containment = std::max(rep.containment, std::abs(mu));
    rep.levels.push_back(std::move(lv));
  }

  if (ess.plus && ess.minus) {
    std::vector<AccumulationFlag> flags;
    auto sweep = [&](Side op, double edge, Approach ap) {
      BandSet const& own = op == Side::plus ? *ess.plus : *ess.minus;
      double const delta = std::min(0.1 * std::max(1.0, std::abs(edge)), 0.45 * adjacent_gap(own, edge, ap));
      AccumulationEvidence ev = accumulation_sweep(field, edge, ap, cfg.sweep_levels, cfg.density, op, delta);
      Accumulation const st = ev.verdict == SweepVerdict::accumulating ? Accumulation::accumulating
                              : ev.verdict == SweepVerdict::finite     ? Accumulation::none
                                                                       : Accumulation::unknown;
      flags.push_back({op, edge, ap, st});
      rep.accumulation.push_back(std::move(ev));
    };
    if (cfg.run_sweeps) {
      for (double x : band_intersection(*ess.plus, *ess.minus).boundary()) {
        if (ess_free_left(*ess.plus, x) && ess_free_right(*ess.minus, x)) {
          sweep(Side::plus, x, Approach::below);
          sweep(Side::minus, x, Approach::above);
        }
        if (ess_free_left(*ess.minus, x) && ess_free_right(*ess.plus, x)) {
          sweep(Side::minus, x, Approach::below);
          sweep(Side::plus, x, Approach::above);
        }
      }
      // gap edges of the union, approached from inside the gap
      if (rep.essential) {
        for (auto const& gap : rep.essential->gaps()) {
          for (Side op : {Side::plus, Side::minus}) {
            BandSet const& own = op == Side::plus ? *ess.plus : *ess.minus;
            for (auto const& b : own.bands) {
              if (b.hi == gap.lo) sweep(op, gap.lo, Approach::above);
              if (b.lo == gap.hi) sweep(op, gap.hi, Approach::below);
            }
          }
        }
      }
    }
    rep.edges = classify_edges(*ess.plus, *ess.minus, flags);
  }
  return rep;
}

}  // namespace indefsl
