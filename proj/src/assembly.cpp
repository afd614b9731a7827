#include "indefsl/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "indefsl/error.hpp"

namespace indefsl {

namespace {

// Makes `v` an exact node. A node equal to `keep` is never moved.
void snap(std::vector<double>& nodes, double v, double h, double keep) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  std::size_t j = static_cast<std::size_t>(it - nodes.begin());
  if (j < nodes.size() && nodes[j] == v) return;
  std::size_t nearest = j;
  if (j == nodes.size() || (j > 0 && v - nodes[j - 1] < nodes[j] - v)) nearest = j - 1;
  if (std::abs(nodes[nearest] - v) <= 0.25 * h && nearest > 0 && nearest + 1 < nodes.size() &&
      nodes[nearest] != keep) {
    nodes[nearest] = v;
    return;
  }
  nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(j), v);
}

}  // namespace

Grid uniform_grid(double lo, double hi, int intervals) {
  if (!(lo < hi)) throw ValidationError("grid needs lo < hi");
  if (intervals < 2) throw ValidationError("grid needs at least two intervals");
  Grid g;
  g.h = (hi - lo) / intervals;
  g.nodes.resize(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) g.nodes[static_cast<std::size_t>(k)] = lo + k * g.h;
  g.nodes.back() = hi;
  return g;
}

Grid build_grid(double lo, double hi, double density, std::optional<SignWindow> window) {
  if (!(density >= 1.0)) throw ValidationError("density must be at least 1 node per unit");
  if (!(lo < hi)) throw ValidationError("grid needs lo < hi");
  auto const intervals = static_cast<int>(std::llround((hi - lo) * density));
  Grid g = uniform_grid(lo, hi, std::max(intervals, 2));
  if (!window) return g;
  auto const [alpha, beta] = *window;
  if (alpha > beta) throw ValidationError("sign window needs alpha <= beta");
  if (!(alpha > lo && beta < hi))
    throw ValidationError("sign window [" + std::to_string(alpha) + ", " + std::to_string(beta) +
                          "] is not inside the truncated interval");
  snap(g.nodes, alpha, g.h, std::nan(""));
  snap(g.nodes, beta, g.h, alpha);
  g.alpha_index = static_cast<std::size_t>(std::lower_bound(g.nodes.begin(), g.nodes.end(), alpha) -
                                           g.nodes.begin());
  g.beta_index = static_cast<std::size_t>(std::lower_bound(g.nodes.begin(), g.nodes.end(), beta) -
                                          g.nodes.begin());
  return g;
}

char const* to_string(Variant v) {
  switch (v) {
    case Variant::K_full: return "K_full";
    case Variant::L_full: return "L_full";
    case Variant::H_minus: return "H_minus";
    case Variant::H_plus: return "H_plus";
    case Variant::K_alphabeta: return "K_alphabeta";
    case Variant::H0_blockdiag: return "H0_blockdiag";
  }
  return "?";
}

std::vector<double> AssembledOperator::artificial_eigenvalues() const {
  std::vector<double> out;
  for (std::size_t k : decoupled) out.push_back(T.diag[k] / R[k]);
  return out;
}

AssembledOperator assemble_operator(CoefficientField const& field, Grid const& grid, Variant variant) {
  if (grid.size() < 3) throw ValidationError("grid needs at least 3 nodes");
  auto const& x = grid.nodes;
  std::size_t first = 1, last = x.size() - 2;  // inclusive range of unknowns
  bool const split = variant == Variant::H_minus || variant == Variant::H_plus ||
                     variant == Variant::K_alphabeta || variant == Variant::H0_blockdiag;
  if (split && (!grid.alpha_index || !grid.beta_index))
    throw ValidationError(std::string(to_string(variant)) + " needs alpha and beta as grid nodes");
  if (variant == Variant::H_minus) last = *grid.alpha_index - 1;
  if (variant == Variant::H_plus) first = *grid.beta_index + 1;
  if (variant == Variant::K_alphabeta) {
    first = *grid.alpha_index + 1;
    last = *grid.beta_index - 1;
  }

  AssembledOperator op;
  op.variant = variant;
  op.grid = grid;
  if (last + 1 <= first) return op;  // empty block, e.g. K_alphabeta with alpha = beta

  std::size_t const n = last - first + 1;
  op.T.diag.resize(n);
  op.T.off.resize(n - 1);
  op.R.resize(n);
  op.nodes.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t const i = first + k;
    double const hl = x[i] - x[i - 1];
    double const hr = x[i + 1] - x[i];
    double const w = 0.5 * (hl + hr);
    double const pl = field.p(x[i] - 0.5 * hl) / hl;
    double const pr = field.p(x[i + 1] - 0.5 * hr) / hr;
    op.T.diag[k] = pl + pr + field.q(x[i]) * w;
    if (k + 1 < n) op.T.off[k] = -pr;
    double const r = field.r(x[i]);
    if (r == 0.0) throw ValidationError("weight vanishes at node x = " + std::to_string(x[i]));
    op.R[k] = (variant == Variant::L_full ? std::abs(r) : r) * w;
    op.nodes[k] = i;
  }
  if (variant == Variant::H_minus && std::any_of(op.R.begin(), op.R.end(), [](double r) { return r > 0; }))
    throw ValidationError("H_minus needs r < 0 left of alpha");
  if (variant == Variant::H_plus && std::any_of(op.R.begin(), op.R.end(), [](double r) { return r < 0; }))
    throw ValidationError("H_plus needs r > 0 right of beta");

  if (variant == Variant::H0_blockdiag) {
    for (std::size_t node : {*grid.alpha_index, *grid.beta_index}) {
      std::size_t const k = node - first;
      if (!op.decoupled.empty() && op.decoupled.back() == k) continue;
      if (k > 0) op.T.off[k - 1] = 0.0;
      if (k + 1 < n) op.T.off[k] = 0.0;
      op.T.diag[k] = std::abs(op.T.diag[k]);
      op.decoupled.push_back(k);
    }
  }
  return op;
}

Eigen::MatrixXd dense(SymTridiag const& T) {
  auto const n = static_cast<Eigen::Index>(T.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    M(i, i) = T.diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) M(i, i + 1) = M(i + 1, i) = T.off[static_cast<std::size_t>(i)];
  }
  return M;
}

Eigen::MatrixXd blockdiag_difference(AssembledOperator const& full, AssembledOperator const& block) {
  if (!(full.grid == block.grid) || full.size() != block.size() || full.R != block.R)
    throw ValidationError("blockdiag_difference needs operators on the same grid");
  return dense(full.T) - dense(block.T);
}

}  // namespace indefsl
