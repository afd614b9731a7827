#pragma once

// Negative-squares budget kappa_0 = kappa_+ + kappa_eta + kappa_- + 2 for
// K_0 - eta, the resulting bound on nonreal pairs, and eigenvalue-count
// bounds in gaps of the essential spectrum.

#include <optional>
#include <string>
#include <vector>

#include "indefsl/coefficients.hpp"
#include "indefsl/eigen_core.hpp"
#include "indefsl/spectra.hpp"

namespace indefsl {

/// Open gap (sup sigma_ess(-H_-), inf sigma_ess(H_+)). lo == hi when the two
/// pieces touch; lo > hi when they overlap.
struct EssentialGap {
  double lo = 0.0;
  double hi = 0.0;
  bool open() const { return lo < hi; }
  bool operator==(EssentialGap const&) const = default;
};

/// Throws ValidationError when either piece of the essential spectrum could
/// not be determined.
EssentialGap essential_gap(EssentialPieces const& pieces);

struct BudgetLevel {
  double truncation = 0.0;
  std::size_t kappa_plus = 0;
  std::size_t kappa_minus = 0;
  std::size_t kappa_eta = 0;
  bool operator==(BudgetLevel const&) const = default;
};

struct NegativeSquaresBudget {
  double eta = 0.0;
  EssentialGap gap;
  bool eta_at_edge = false;
  // -H_- eigenvalues above eta, H_+ eigenvalues below eta, negative squares
  // of K_alphabeta - eta; valid only when `available`
  std::size_t kappa_plus = 0;
  std::size_t kappa_minus = 0;
  std::size_t kappa_eta = 0;
  std::size_t kappa = 0;
  std::size_t kappa0 = 2;
  bool available = false;
  std::string reason;  // why the budget is unavailable
  std::vector<BudgetLevel> levels;
  bool operator==(NegativeSquaresBudget const&) const = default;
};

/// Counts at every truncation of cfg; the budget is available when the two
/// largest levels agree exactly. eta has to lie strictly inside the gap; with
/// `allow_edge_eta` it may also sit on a gap edge (admissible when the
/// discrete spectrum does not accumulate there). Throws ValidationError
/// otherwise.
NegativeSquaresBudget kappa_budget(CoefficientField const& field, double eta, NumericsConfig const& cfg = {},
                                   bool allow_edge_eta = false);

/// Gap midpoint, or the common edge when the pieces touch.
std::optional<double> default_eta(EssentialGap const& gap);

struct PairBoundCheck {
  bool pass = true;
  std::size_t kappa0 = 0;
  std::size_t max_pairs = 0;
  std::optional<double> offending_truncation;  // first level over the bound
  std::string detail;
  bool operator==(PairBoundCheck const&) const = default;
};

/// Nonreal pairs at every truncation level against kappa_0. Fails (without
/// a level) when the budget is unavailable.
PairBoundCheck pair_bound_check(NegativeSquaresBudget const& budget, SpectrumReport const& report);

enum class BoundVariant { general_4n6k11, gap_6k11, alpha_eq_beta, alpha_eq_beta_gap };
char const* to_string(BoundVariant v);

/// 4n + 6k + 11, 6k + 11, 2n + 2k + 3 (n_{H0,K0} <= n_{H0}) and 2k + 3.
std::size_t gap_count_bound(std::size_t n_H0, std::size_t kappa, BoundVariant variant);

struct CountLevel {
  double truncation = 0.0;
  std::size_t n_H0 = 0;
  std::size_t n_K0 = 0;
  std::size_t bound = 0;
  bool operator==(CountLevel const&) const = default;
};

struct CountEstimate {
  Interval interval{0.0, 0.0};
  std::size_t n_H0 = 0;  // at the largest truncation
  std::size_t n_K0 = 0;
  std::size_t kappa = 0;
  BoundVariant variant = BoundVariant::general_4n6k11;
  std::size_t bound = 0;
  bool pass = false;  // n_K0 <= bound at every level
  std::vector<CountLevel> levels;
  bool operator==(CountEstimate const&) const = default;
};

/// Real eigenvalues of K_0 in the open interval I at each truncation of the
/// report, against the bound built from the budget's kappa and the count of
/// eigenvalues of the block-diagonal H_0 in I. Without an explicit variant
/// the alpha = beta forms are used when the window is a point and the gap
/// forms when H_0 has no eigenvalue in I at any level.
CountEstimate count_estimate(CoefficientField const& field, Interval I, NegativeSquaresBudget const& budget,
                             SpectrumReport const& report, NumericsConfig const& cfg = {},
                             std::optional<BoundVariant> variant = {});

/// I shrunk by 5% of the gap width at both ends; nothing if the gap is not open.
std::optional<Interval> default_count_interval(EssentialGap const& gap);

struct StructuralCheck {
  double truncation = 0.0;
  std::size_t order = 0;
  std::size_t resolvent_rank = 0;  // (K - i)^{-1} - (H_0 - i)^{-1}
  std::size_t rank_bound = 4;      // 2 when alpha = beta
  std::vector<double> singular_values;  // leading ones, descending
  double eta = 0.0;
  std::size_t n_minus_full = 0;   // of T - eta R, K_full
  std::size_t n_minus_block = 0;  // of T - eta R, H0_blockdiag
  std::size_t perturbation_rank = 0;
  bool pass = false;
  bool operator==(StructuralCheck const&) const = default;
};

/// Rank of the discrete resolvent difference at lambda = i and the inertia
/// shift between K_full and H0_blockdiag, on [-X, X]. Dense, keep X small.
StructuralCheck structural_check(CoefficientField const& field, double truncation, double density, double eta);

}  // namespace indefsl
