#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "indefsl/coefficients.hpp"

namespace indefsl {

/// Grid on [lo, hi] including both truncation points. The truncation points
/// carry Dirichlet conditions and are not unknowns.
struct Grid {
  std::vector<double> nodes;
  double h = 0.0;  // nominal spacing before alpha/beta were snapped in
  std::optional<std::size_t> alpha_index;
  std::optional<std::size_t> beta_index;

  std::size_t size() const { return nodes.size(); }
  double lo() const { return nodes.front(); }
  double hi() const { return nodes.back(); }
  bool operator==(Grid const&) const = default;
};

/// Uniform grid on [lo, hi] with round((hi - lo) * density) intervals, then
/// alpha and beta made exact nodes: the nearest node moves onto them when it
/// lies within h/4, otherwise they are inserted. X_L = X_R = 10 at density 10
/// gives 201 nodes.
Grid build_grid(double lo, double hi, double density, std::optional<SignWindow> window = {});

/// Exactly `intervals` equal intervals on [lo, hi].
Grid uniform_grid(double lo, double hi, int intervals);

enum class Variant { K_full, L_full, H_minus, H_plus, K_alphabeta, H0_blockdiag };

char const* to_string(Variant v);

struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;  // size n - 1
  std::size_t size() const { return diag.size(); }
  bool operator==(SymTridiag const&) const = default;
};

/// Pencil (T, R) of one operator variant. `nodes` maps unknowns to grid
/// nodes. For H0_blockdiag, `decoupled` lists the unknowns at alpha and beta;
/// each carries the artificial eigenvalue T_kk / R_kk.
struct AssembledOperator {
  Variant variant = Variant::K_full;
  Grid grid;
  SymTridiag T;
  std::vector<double> R;
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> decoupled;

  std::size_t size() const { return R.size(); }
  bool empty() const { return R.empty(); }
  std::vector<double> artificial_eigenvalues() const;
};

/// Three-point scheme for -(p u')' + q u with p at midpoints, q and r lumped
/// at nodes with weight (h_left + h_right) / 2, Dirichlet at the truncation
/// ends. H_minus, H_plus and K_alphabeta take the unknowns in (lo, alpha),
/// (beta, hi) and (alpha, beta) with Dirichlet at alpha / beta.
AssembledOperator assemble_operator(CoefficientField const& field, Grid const& grid, Variant variant);

Eigen::MatrixXd dense(SymTridiag const& T);

/// T_full - T_block as a dense matrix.
Eigen::MatrixXd blockdiag_difference(AssembledOperator const& full, AssembledOperator const& block);

}  // namespace indefsl
