#include "indefsl/budgets.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "indefsl/assembly.hpp"
#include "indefsl/error.hpp"

namespace indefsl {

namespace {

std::vector<double> abs_weights(std::vector<double> R) {
  for (double& r : R) r = std::abs(r);
  return R;
}

std::size_t count_real_in(std::vector<double> const& real, Interval I) {
  return static_cast<std::size_t>(
      std::count_if(real.begin(), real.end(), [&](double x) { return I.lo < x && x < I.hi; }));
}

// Eigenvalues of the middle block K_alphabeta in I. The block is tiny and may
// be indefinite, so it goes through the dense solver.
std::size_t middle_block_count(AssembledOperator const& mid, Interval I) {
  if (mid.size() == 0) return 0;
  return count_real_in(indefinite_eigs(mid.T, mid.R).real, I);
}

}  // namespace

EssentialGap essential_gap(EssentialPieces const& pieces) {
  if (!pieces.plus || !pieces.minus || pieces.plus->empty() || pieces.minus->empty())
    throw ValidationError("essential spectrum undetermined (regime " + pieces.regime + ")");
  return {pieces.minus->bands.back().hi, pieces.plus->bands.front().lo};
}

std::optional<double> default_eta(EssentialGap const& gap) {
  if (gap.open()) return 0.5 * (gap.lo + gap.hi);
  if (gap.lo == gap.hi) return gap.lo;
  return std::nullopt;
}

NegativeSquaresBudget kappa_budget(CoefficientField const& field, double eta, NumericsConfig const& cfg,
                                   bool allow_edge_eta) {
  if (cfg.truncations.size() < 2) throw ValidationError("budget needs at least two truncation levels");
  if (!std::is_sorted(cfg.truncations.begin(), cfg.truncations.end()))
    throw ValidationError("truncation levels must increase");
  NegativeSquaresBudget b;
  b.eta = eta;
  b.gap = essential_gap(essential_pieces(field, cfg.k_max));
  bool const inside = b.gap.lo < eta && eta < b.gap.hi;
  b.eta_at_edge = eta == b.gap.lo || eta == b.gap.hi;
  if (!inside && !(allow_edge_eta && b.eta_at_edge))
    throw ValidationError("eta = " + std::to_string(eta) + " is not inside the essential gap (" +
                          std::to_string(b.gap.lo) + ", " + std::to_string(b.gap.hi) + ")");

  SignWindow const w = field.window();
  for (double X : cfg.truncations) {
    BudgetLevel lv;
    lv.truncation = X;
    Grid const g = build_grid(-X, X, cfg.density, w);
    auto const hp = assemble_operator(field, g, Variant::H_plus);
    auto const hm = assemble_operator(field, g, Variant::H_minus);
    auto const mid = assemble_operator(field, g, Variant::K_alphabeta);
    if (hp.size() > 0) lv.kappa_minus = count_in_interval(hp.T, hp.R, {-INFINITY, eta});
    // the H_minus pencil carries R < 0, its eigenvalues are those of -H_-;
    // mu > eta for (T, R) is nu < -eta for (T, |R|)
    if (hm.size() > 0) lv.kappa_plus = count_in_interval(hm.T, abs_weights(hm.R), {-INFINITY, -eta});
    if (mid.size() > 0) lv.kappa_eta = inertia_count(mid.T, eta, mid.R).n_minus;
    b.levels.push_back(lv);
  }
  auto const& a = b.levels[b.levels.size() - 2];
  auto const& z = b.levels.back();
  b.kappa_plus = z.kappa_plus;
  b.kappa_minus = z.kappa_minus;
  b.kappa_eta = z.kappa_eta;
  b.kappa = b.kappa_plus + b.kappa_minus + b.kappa_eta;
  b.kappa0 = b.kappa + 2;
  b.available = a.kappa_plus == z.kappa_plus && a.kappa_minus == z.kappa_minus && a.kappa_eta == z.kappa_eta;
  if (!b.available)
    b.reason = "counts differ between truncations " + std::to_string(a.truncation) + " and " +
               std::to_string(z.truncation);
  return b;
}

PairBoundCheck pair_bound_check(NegativeSquaresBudget const& budget, SpectrumReport const& report) {
  PairBoundCheck c;
  c.kappa0 = budget.kappa0;
  for (auto const& lv : report.levels) c.max_pairs = std::max(c.max_pairs, lv.pairs.size());
  if (!budget.available) {
    c.pass = false;
    c.detail = "budget unavailable: " + budget.reason;
    return c;
  }
  for (auto const& lv : report.levels) {
    if (lv.pairs.size() > budget.kappa0) {
      c.pass = false;
      c.offending_truncation = lv.truncation;
      c.detail = std::to_string(lv.pairs.size()) + " nonreal pairs at truncation " +
                 std::to_string(lv.truncation) + " exceed kappa0 = " + std::to_string(budget.kappa0);
      return c;
    }
  }
  c.detail = "nonreal pairs within kappa0 at every level";
  return c;
}

char const* to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::general_4n6k11: return "general_4n6k11";
    case BoundVariant::gap_6k11: return "gap_6k11";
    case BoundVariant::alpha_eq_beta: return "alpha_eq_beta";
    case BoundVariant::alpha_eq_beta_gap: return "alpha_eq_beta_gap";
  }
  return "?";
}

std::size_t gap_count_bound(std::size_t n_H0, std::size_t kappa, BoundVariant variant) {
  switch (variant) {
    case BoundVariant::general_4n6k11: return 4 * n_H0 + 6 * kappa + 11;
    case BoundVariant::gap_6k11: return 6 * kappa + 11;
    case BoundVariant::alpha_eq_beta: return 2 * n_H0 + 2 * kappa + 3;
    case BoundVariant::alpha_eq_beta_gap: return 2 * kappa + 3;
  }
  return 0;
}

std::optional<Interval> default_count_interval(EssentialGap const& gap) {
  if (!gap.open() || !std::isfinite(gap.lo) || !std::isfinite(gap.hi)) return std::nullopt;
  double const pad = 0.05 * (gap.hi - gap.lo);
  return Interval{gap.lo + pad, gap.hi - pad};
}

CountEstimate count_estimate(CoefficientField const& field, Interval I, NegativeSquaresBudget const& budget,
                             SpectrumReport const& report, NumericsConfig const& cfg,
                             std::optional<BoundVariant> variant) {
  if (!(I.lo < I.hi)) throw ValidationError("count interval needs lo < hi");
  if (!budget.available) throw ValidationError("count bound needs an available budget");
  if (report.levels.empty()) throw ValidationError("count bound needs truncation spectra");
  CountEstimate e;
  e.interval = I;
  e.kappa = budget.kappa;
  SignWindow const w = field.window();
  for (auto const& lv : report.levels) {
    CountLevel c;
    c.truncation = lv.truncation;
    Grid const g = build_grid(-lv.truncation, lv.truncation, cfg.density, w);
    auto const hp = assemble_operator(field, g, Variant::H_plus);
    auto const hm = assemble_operator(field, g, Variant::H_minus);
    auto const mid = assemble_operator(field, g, Variant::K_alphabeta);
    if (hp.size() > 0) c.n_H0 += count_in_interval(hp.T, hp.R, I);
    if (hm.size() > 0) c.n_H0 += count_in_interval(hm.T, abs_weights(hm.R), {-I.hi, -I.lo});
    c.n_H0 += middle_block_count(mid, I);
    c.n_K0 = count_real_in(lv.real, I);
    e.levels.push_back(c);
  }
  bool const point_window = w.alpha == w.beta;
  bool const h0_free = std::all_of(e.levels.begin(), e.levels.end(), [](CountLevel const& c) { return c.n_H0 == 0; });
  e.variant = variant.value_or(point_window ? (h0_free ? BoundVariant::alpha_eq_beta_gap : BoundVariant::alpha_eq_beta)
                                            : (h0_free ? BoundVariant::gap_6k11 : BoundVariant::general_4n6k11));
  e.pass = true;
  for (auto& c : e.levels) {
    c.bound = gap_count_bound(c.n_H0, e.kappa, e.variant);
    e.pass = e.pass && c.n_K0 <= c.bound;
  }
  e.n_H0 = e.levels.back().n_H0;
  e.n_K0 = e.levels.back().n_K0;
  e.bound = e.levels.back().bound;
  return e;
}

StructuralCheck structural_check(CoefficientField const& field, double truncation, double density, double eta) {
  SignWindow const w = field.window();
  Grid const g = build_grid(-truncation, truncation, density, w);
  auto const full = assemble_operator(field, g, Variant::K_full);
  auto const block = assemble_operator(field, g, Variant::H0_blockdiag);
  if (full.size() > kDenseCap)
    throw ValidationError("structural check order " + std::to_string(full.size()) + " exceeds the dense cap " +
                          std::to_string(kDenseCap) + "; lower the density or truncation");
  StructuralCheck s;
  s.truncation = truncation;
  s.order = full.size();
  s.rank_bound = w.alpha == w.beta ? 2 : 4;
  s.eta = eta;

  using C = std::complex<double>;
  auto const n = static_cast<Eigen::Index>(full.size());
  Eigen::VectorXcd R(n);
  for (Eigen::Index i = 0; i < n; ++i) R(i) = full.R[static_cast<std::size_t>(i)];
  Eigen::MatrixXcd const Rd = R.asDiagonal();
  Eigen::MatrixXcd const Af = dense(full.T).cast<C>() - C(0.0, 1.0) * Rd;
  Eigen::MatrixXcd const Ab = dense(block.T).cast<C>() - C(0.0, 1.0) * Rd;
  // (R^{-1} T - i)^{-1} = (T - i R)^{-1} R
  Eigen::MatrixXcd const D = (Af.partialPivLu().solve(Rd) - Ab.partialPivLu().solve(Rd)).eval();
  auto const sv = singular_values(D);
  s.resolvent_rank = numerical_rank(D);
  s.singular_values.assign(sv.begin(), sv.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(sv.size(), 6)));

  s.n_minus_full = inertia_count(full.T, eta, full.R).n_minus;
  s.n_minus_block = inertia_count(block.T, eta, block.R).n_minus;
  s.perturbation_rank = numerical_rank(Eigen::MatrixXd(blockdiag_difference(full, block)));
  auto const shift = s.n_minus_full > s.n_minus_block ? s.n_minus_full - s.n_minus_block
                                                      : s.n_minus_block - s.n_minus_full;
  s.pass = s.resolvent_rank <= s.rank_bound && shift <= s.perturbation_rank;
  return s;
}

}  // namespace indefsl
