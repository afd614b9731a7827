#include "indefsl/eigen_core.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "indefsl/error.hpp"

namespace indefsl {

namespace {

void check_shapes(SymTridiag const& T, std::vector<double> const& R) {
  if (R.size() != T.size() || (T.size() > 0 && T.off.size() + 1 != T.size()))
    throw ValidationError("pencil dimensions do not match");
}

void require_positive(std::vector<double> const& R) {
  for (double r : R)
    if (!(r > 0.0)) throw ValidationError("definite pencil needs R > 0");
}

// Number of eigenvalues below x of (T, R), R > 0, from the signs of the
// LDL^T pivots of T - x R.
std::size_t sturm_count(SymTridiag const& T, std::vector<double> const& R, double x, double pivmin) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < T.size(); ++i) {
    double const e2 = i == 0 ? 0.0 : T.off[i - 1] * T.off[i - 1];
    q = (T.diag[i] - x * R[i]) - (i == 0 ? 0.0 : e2 / q);
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

struct Bounds {
  double lo, hi, pivmin;
};

// Gershgorin bounds for R^{-1/2} T R^{-1/2}.
Bounds gershgorin(SymTridiag const& T, std::vector<double> const& R) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double emax = 0.0;
  std::size_t const n = T.size();
  for (std::size_t i = 0; i < n; ++i) {
    double rad = 0.0;
    if (i > 0) rad += std::abs(T.off[i - 1]) / std::sqrt(R[i - 1] * R[i]);
    if (i + 1 < n) rad += std::abs(T.off[i]) / std::sqrt(R[i] * R[i + 1]);
    double const c = T.diag[i] / R[i];
    lo = std::min(lo, c - rad);
    hi = std::max(hi, c + rad);
    if (i + 1 < n) emax = std::max(emax, T.off[i] * T.off[i]);
  }
  double const span = std::max({std::abs(lo), std::abs(hi), 1e-300});
  lo -= 2.0 * std::numeric_limits<double>::epsilon() * span * static_cast<double>(n) + 1e-300;
  hi += 2.0 * std::numeric_limits<double>::epsilon() * span * static_cast<double>(n) + 1e-300;
  double const pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);
  return {lo, hi, pivmin};
}

}  // namespace

Inertia inertia_count(SymTridiag const& T, double shift, std::vector<double> const& R) {
  check_shapes(T, R);
  std::size_t const n = T.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = T.diag[i] - shift * R[i];
  auto const& e = T.off;
  double norm = 0.0;
  for (double v : d) norm = std::max(norm, std::abs(v));
  for (double v : e) norm = std::max(norm, std::abs(v));
  Inertia in;
  if (norm == 0.0) {
    in.n_zero = n;
    return in;
  }
  double const tol = 1e-12 * norm;
  double const alpha = 0.5 * (std::sqrt(5.0) - 1.0);
  auto classify = [&](double pivot) {
    if (!std::isfinite(pivot)) throw NumericalError("inertia factorization broke down");
    if (std::abs(pivot) < tol)
      ++in.n_zero;
    else if (pivot < 0.0)
      ++in.n_minus;
    else
      ++in.n_plus;
  };
  std::size_t k = 0;
  while (k < n) {
    if (k + 1 == n || norm * std::abs(d[k]) >= alpha * e[k] * e[k]) {
      classify(d[k]);
      if (k + 1 < n && d[k] != 0.0) d[k + 1] -= e[k] * e[k] / d[k];
      k += 1;
    } else {
      // the pivot test guarantees det <= -(1 - alpha) e_k^2 < 0
      double const det = d[k] * d[k + 1] - e[k] * e[k];
      if (!(det < 0.0)) throw NumericalError("inertia factorization broke down at a 2x2 pivot");
      ++in.n_minus;
      ++in.n_plus;
      if (k + 2 < n) d[k + 2] -= e[k + 1] * e[k + 1] * d[k] / det;
      k += 2;
    }
  }
  return in;
}

Inertia inertia_count(Eigen::MatrixXd const& M, double shift, std::vector<double> const& R) {
  if (static_cast<std::size_t>(M.rows()) != R.size() || M.rows() != M.cols())
    throw ValidationError("inertia_count: dimension mismatch");
  Eigen::MatrixXd A = M;
  for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, i) -= shift * R[static_cast<std::size_t>(i)];
  Inertia in;
  if (A.size() == 0) return in;
  double const tol = 1e-12 * A.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("dense symmetric eigensolve failed");
  for (double v : es.eigenvalues()) {
    if (std::abs(v) <= tol)
      ++in.n_zero;
    else if (v < 0.0)
      ++in.n_minus;
    else
      ++in.n_plus;
  }
  return in;
}

std::vector<double> sym_tridiag_eigs(SymTridiag const& T, std::vector<double> const& R,
                                     std::optional<Interval> window) {
  check_shapes(T, R);
  require_positive(R);
  std::vector<double> out;
  if (T.size() == 0) return out;
  Bounds const b = gershgorin(T, R);
  std::size_t first = 0, last = T.size();
  if (window) {
    if (!(window->lo < window->hi)) return out;
    if (std::isfinite(window->lo)) first = sturm_count(T, R, window->lo, b.pivmin);
    if (std::isfinite(window->hi)) last = sturm_count(T, R, window->hi, b.pivmin);
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t k = first; k < last; ++k) {
    double lo = b.lo, hi = b.hi;
    if (window && std::isfinite(window->lo)) lo = std::max(lo, window->lo);
    if (window && std::isfinite(window->hi)) hi = std::min(hi, window->hi);
    if (!out.empty()) lo = std::max(lo, out.back());
    for (int it = 0; it < 200; ++it) {
      double const mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi || hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + b.pivmin)
        break;
      if (sturm_count(T, R, mid, b.pivmin) > k)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::size_t count_in_interval(SymTridiag const& T, std::vector<double> const& R, Interval I) {
  check_shapes(T, R);
  require_positive(R);
  if (!(I.lo < I.hi)) return 0;
  std::size_t const upper = std::isfinite(I.hi) ? inertia_count(T, I.hi, R).n_minus : T.size();
  std::size_t lower = 0;
  if (std::isfinite(I.lo)) {
    Inertia const in = inertia_count(T, I.lo, R);
    lower = in.n_minus + in.n_zero;
  }
  return upper > lower ? upper - lower : 0;
}

namespace {

// Relative residual of lambda after two steps of inverse iteration on the
// complex tridiagonal T - lambda R.
double residual(SymTridiag const& T, std::vector<double> const& R, std::complex<double> lambda,
                double scale) {
  using C = std::complex<double>;
  auto const n = static_cast<lapack_int>(T.size());
  if (n == 0) return 0.0;
  C const shifted = lambda + C(1e-10 * std::max(1.0, std::abs(lambda)), 0.0);
  std::vector<C> x(T.size(), C(1.0, 0.0));
  for (int it = 0; it < 2; ++it) {
    std::vector<C> dl(T.off.begin(), T.off.end()), du(T.off.begin(), T.off.end()), d(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) d[i] = T.diag[i] - shifted * R[i];
    auto* dl_p = reinterpret_cast<lapack_complex_double*>(dl.data());
    auto* d_p = reinterpret_cast<lapack_complex_double*>(d.data());
    auto* du_p = reinterpret_cast<lapack_complex_double*>(du.data());
    auto* x_p = reinterpret_cast<lapack_complex_double*>(x.data());
    lapack_int const info = LAPACKE_zgtsv(LAPACK_COL_MAJOR, n, 1, dl_p, d_p, du_p, x_p, n);
    if (info != 0) return 0.0;  // exactly singular: lambda is an eigenvalue to working precision
    double nx = 0.0;
    for (auto const& v : x) nx = std::max(nx, std::abs(v));
    if (!(nx > 0.0) || !std::isfinite(nx)) return std::numeric_limits<double>::infinity();
    for (auto& v : x) v /= nx;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i) {
    C v = (T.diag[i] - lambda * R[i]) * x[i];
    if (i > 0) v += T.off[i - 1] * x[i - 1];
    if (i + 1 < T.size()) v += T.off[i] * x[i + 1];
    num += std::norm(v);
    den += std::norm(x[i]);
  }
  return std::sqrt(num / den) / scale;
}

}  // namespace

ComplexSpectrum indefinite_eigs(SymTridiag const& T, std::vector<double> const& R, double im_tol_rel) {
  check_shapes(T, R);
  for (double r : R)
    if (r == 0.0 || !std::isfinite(r)) throw ValidationError("weight matrix has a zero entry");
  std::size_t const n = T.size();
  ComplexSpectrum out;
  if (n == 0) return out;
  if (n > kDenseCap)
    throw ValidationError("pencil of order " + std::to_string(n) + " exceeds the dense cap " +
                          std::to_string(kDenseCap) + "; lower the density or truncation");

  std::vector<double> s(n), J(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = 1.0 / std::sqrt(std::abs(R[i]));
    J[i] = R[i] < 0.0 ? -1.0 : 1.0;
  }
  std::vector<double> H(n * n, 0.0);  // column major
  for (std::size_t i = 0; i < n; ++i) {
    H[i + i * n] = J[i] * T.diag[i] * s[i] * s[i];
    if (i + 1 < n) {
      double const e = T.off[i] * s[i] * s[i + 1];
      H[i + (i + 1) * n] = J[i] * e;
      H[(i + 1) + i * n] = J[i + 1] * e;
    }
  }
  std::vector<double> wr(n), wi(n);
  auto const N = static_cast<lapack_int>(n);
  lapack_int const info =
      LAPACKE_dhseqr(LAPACK_COL_MAJOR, 'E', 'N', N, 1, N, H.data(), N, wr.data(), wi.data(), nullptr, 1);
  if (info > 0)
    throw NumericalError("QR iteration did not converge; unconverged leading block of order " +
                         std::to_string(info));
  if (info < 0) throw NumericalError("dhseqr rejected argument " + std::to_string(-info));

  double rho = 0.0;
  for (std::size_t i = 0; i < n; ++i) rho = std::max(rho, std::hypot(wr[i], wi[i]));
  out.spectral_radius = rho;
  out.im_tol = im_tol_rel * std::max(1.0, rho);

  std::vector<std::complex<double>> upper, lower;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(wi[i]) < out.im_tol)
      out.real.push_back(wr[i]);
    else if (wi[i] > 0.0)
      upper.emplace_back(wr[i], wi[i]);
    else
      lower.emplace_back(wr[i], wi[i]);
  }
  if (upper.size() != lower.size())
    throw NumericalError("nonreal eigenvalues do not pair up: " + std::to_string(upper.size()) +
                         " above the axis, " + std::to_string(lower.size()) + " below");
  std::vector<bool> used(lower.size(), false);
  for (auto const& mu : upper) {
    std::size_t best = lower.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      double const d = std::abs(lower[j] - std::conj(mu));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    out.pairs.push_back(0.5 * (mu + std::conj(lower[best])));
  }
  std::sort(out.real.begin(), out.real.end());
  std::sort(out.pairs.begin(), out.pairs.end(), [](auto const& a, auto const& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  double tnorm = 0.0, rnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(T.diag[i]);
    if (i > 0) row += std::abs(T.off[i - 1]);
    if (i + 1 < n) row += std::abs(T.off[i]);
    tnorm = std::max(tnorm, row);
    rnorm = std::max(rnorm, std::abs(R[i]));
  }
  for (double lam : out.real)
    out.real_residuals.push_back(residual(T, R, lam, tnorm + std::abs(lam) * rnorm));
  for (auto const& mu : out.pairs)
    out.pair_residuals.push_back(residual(T, R, mu, tnorm + std::abs(mu) * rnorm));

  // multiplicity diagnostics: clusters of eigenvalues closer than im_tol
  std::vector<std::complex<double>> all;
  for (double lam : out.real) all.emplace_back(lam, 0.0);
  for (auto const& mu : out.pairs) {
    all.push_back(mu);
    all.push_back(std::conj(mu));
  }
  std::sort(all.begin(), all.end(), [](auto const& a, auto const& b) { return a.real() < b.real(); });
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::size_t size = 1;
    for (std::size_t j = i + 1; j < all.size() && all[j].real() - all[i].real() <= out.im_tol; ++j)
      if (std::abs(all[j] - all[i]) <= out.im_tol) ++size;
    out.max_cluster = std::max(out.max_cluster, size);
  }
  return out;
}

std::vector<double> singular_values(Eigen::MatrixXd const& M) {
  if (M.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  auto const& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::vector<double> singular_values(Eigen::MatrixXcd const& M) {
  if (M.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  auto const& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

namespace {
std::size_t rank_from(std::vector<double> const& s, double tol) {
  if (s.empty() || s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double v) { return v > tol * s.front(); }));
}
}  // namespace

std::size_t numerical_rank(Eigen::MatrixXd const& M, double tol) {
  return rank_from(singular_values(M), tol);
}

std::size_t numerical_rank(Eigen::MatrixXcd const& M, double tol) {
  return rank_from(singular_values(M), tol);
}

}  // namespace indefsl
