#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "indefsl/assembly.hpp"

namespace indefsl {

/// Largest pencil the dense nonsymmetric solve accepts.
inline constexpr std::size_t kDenseCap = 3500;

struct Inertia {
  std::size_t n_minus = 0;
  std::size_t n_zero = 0;
  std::size_t n_plus = 0;
  std::size_t total() const { return n_minus + n_zero + n_plus; }
  bool operator==(Inertia const&) const = default;
};

/// Inertia of T - shift * R by a symmetric tridiagonal factorization with
/// Bunch's 1x1 / 2x2 pivoting. Pivots below 1e-12 * max|entry| count as zero.
Inertia inertia_count(SymTridiag const& T, double shift, std::vector<double> const& R);

/// Dense symmetric variant for oracles and small blocks (eigenvalue signs).
Inertia inertia_count(Eigen::MatrixXd const& M, double shift, std::vector<double> const& R);

struct Interval {
  double lo;
  double hi;
  bool operator==(Interval const&) const = default;
};

/// Eigenvalues of the definite pencil (T, R), R > 0, in the half-open window
/// [lo, hi), by Sturm bisection to full double precision.
std::vector<double> sym_tridiag_eigs(SymTridiag const& T, std::vector<double> const& R,
                                     std::optional<Interval> window = {});

/// Number of pencil eigenvalues in the open interval (lo, hi), R > 0.
/// Infinite ends are allowed.
std::size_t count_in_interval(SymTridiag const& T, std::vector<double> const& R, Interval I);

struct ComplexSpectrum {
  std::vector<double> real;                      // ascending
  std::vector<std::complex<double>> pairs;       // Im > 0, one per conjugate pair
  std::vector<double> real_residuals;            // relative, per real eigenvalue
  std::vector<double> pair_residuals;
  double im_tol = 0.0;
  double spectral_radius = 0.0;
  std::size_t max_cluster = 1;  // largest group of numerically coincident eigenvalues

  std::size_t size() const { return real.size() + 2 * pairs.size(); }
  bool operator==(ComplexSpectrum const&) const = default;
};

/// Eigenvalues of R^{-1} T for an indefinite diagonal R. Works on the
/// similar tridiagonal matrix J |R|^{-1/2} T |R|^{-1/2} (already Hessenberg)
/// with LAPACK's shifted QR. Eigenvalues with |Im| < im_tol become real, the
/// rest are matched into exact conjugate pairs. im_tol = im_tol_rel *
/// max(1, spectral radius).
ComplexSpectrum indefinite_eigs(SymTridiag const& T, std::vector<double> const& R, double im_tol_rel = 1e-8);

std::vector<double> singular_values(Eigen::MatrixXd const& M);
std::vector<double> singular_values(Eigen::MatrixXcd const& M);

/// Number of singular values above tol * sigma_max.
std::size_t numerical_rank(Eigen::MatrixXd const& M, double tol = 1e-8);
std::size_t numerical_rank(Eigen::MatrixXcd const& M, double tol = 1e-8);

}  // namespace indefsl
