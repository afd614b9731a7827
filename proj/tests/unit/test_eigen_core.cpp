#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "indefsl/eigen_core.hpp"
#include "indefsl/error.hpp"

using namespace indefsl;

namespace {

SymTridiag random_tridiag(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  SymTridiag T;
  for (std::size_t i = 0; i < n; ++i) T.diag.push_back(u(rng));
  for (std::size_t i = 0; i + 1 < n; ++i) T.off.push_back(u(rng));
  return T;
}

std::vector<double> random_weights(std::mt19937& rng, std::size_t n, bool indefinite) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  std::vector<double> R(n);
  for (auto& r : R) r = u(rng);
  if (indefinite)
    for (std::size_t i = 0; i < n / 2; ++i) R[i] = -R[i];
  return R;
}

// dense generalized symmetric-definite oracle
std::vector<double> dense_eigs(SymTridiag const& T, std::vector<double> const& R) {
  Eigen::VectorXd r = Eigen::Map<Eigen::VectorXd const>(R.data(), static_cast<Eigen::Index>(R.size()));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(T), r.asDiagonal().toDenseMatrix(),
                                                               Eigen::EigenvaluesOnly);
  auto const& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("inertia of small matrices") {
  SymTridiag T{{1.0, -1.0}, {0.0}};
  CHECK(inertia_count(T, 0.0, {1.0, 1.0}) == Inertia{1, 0, 1});
  SymTridiag Z{{0.0, 0.0, 1.0}, {0.0, 0.0}};
  CHECK(inertia_count(Z, 0.0, {1.0, 1.0, 1.0}) == Inertia{0, 2, 1});
  SymTridiag P{{0.0, 0.0}, {1.0}};  // forces the 2x2 pivot
  CHECK(inertia_count(P, 0.0, {1.0, 1.0}) == Inertia{1, 0, 1});
}

TEST_CASE("Sturm bisection vs dense oracle on random definite pencils") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t const n = 5 + rng() % 46;
    auto T = random_tridiag(rng, n);
    auto R = random_weights(rng, n, false);
    auto ev = sym_tridiag_eigs(T, R);
    auto oracle = dense_eigs(T, R);
    REQUIRE(ev.size() == oracle.size());
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(ev[k] - oracle[k]) < 1e-10);
  }
}

TEST_CASE("inertia vs explicit counting (Sylvester)") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t const n = 3 + rng() % 40;
    auto T = random_tridiag(rng, n);
    auto R = random_weights(rng, n, false);
    auto ev = sym_tridiag_eigs(T, R);
    double const eta = shift(rng);
    auto in = inertia_count(T, eta, R);
    auto below = static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](double v) { return v < eta; }));
    CHECK(in.n_minus == below);
    CHECK(in.total() == n);
    CHECK(count_in_interval(T, R, {-INFINITY, eta}) == below);
    CHECK(inertia_count(dense(T), eta, R) == in);
  }
}

TEST_CASE("indefinite inertia matches the dense symmetric oracle") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t const n = 2 + rng() % 30;
    auto T = random_tridiag(rng, n);
    auto R = random_weights(rng, n, true);
    double const eta = shift(rng);
    CHECK(inertia_count(T, eta, R) == inertia_count(dense(T), eta, R));
  }
}

TEST_CASE("windows and intervals") {
  std::mt19937 rng(5);
  auto T = random_tridiag(rng, 40);
  auto R = random_weights(rng, 40, false);
  auto ev = sym_tridiag_eigs(T, R);
  auto w = sym_tridiag_eigs(T, R, Interval{ev[10] - 1e-9, ev[20] - 1e-9});
  REQUIRE(w.size() == 10);
  CHECK(w.front() == doctest::Approx(ev[10]));
  CHECK(sym_tridiag_eigs(T, R, Interval{ev.back() + 1, ev.back() + 2}).empty());
  CHECK(count_in_interval(T, R, {0.5, 0.5}) == 0);
  CHECK(count_in_interval(T, R, {-INFINITY, INFINITY}) == 40);
  for (int t = 0; t < 20; ++t) {
    double a = std::uniform_real_distribution<double>(-3, 3)(rng);
    double b = a + std::uniform_real_distribution<double>(0, 3)(rng);
    auto cnt = static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](double v) { return v > a && v < b; }));
    CHECK(count_in_interval(T, R, {a, b}) == cnt);
  }
  CHECK_THROWS_AS(sym_tridiag_eigs(T, random_weights(rng, 40, true)), ValidationError);
}

TEST_CASE("indefinite eigensolve") {
  SymTridiag T{{0.0, 0.0}, {1.0}};
  auto s = indefinite_eigs(T, {1.0, -1.0});
  REQUIRE(s.pairs.size() == 1);
  CHECK(s.real.empty());
  CHECK(s.pairs[0].real() == doctest::Approx(0.0));
  CHECK(s.pairs[0].imag() == doctest::Approx(1.0));

  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t const n = 2 + rng() % 40;
    auto T2 = random_tridiag(rng, n);
    auto R2 = random_weights(rng, n, true);
    auto spec = indefinite_eigs(T2, R2);
    auto const neg = static_cast<std::size_t>(std::count_if(R2.begin(), R2.end(), [](double r) { return r < 0; }));
    CHECK(spec.size() == n);
    CHECK(spec.pairs.size() <= std::min(neg, n - neg));
    for (double res : spec.real_residuals) CHECK(res < 1e-8);
    for (double res : spec.pair_residuals) CHECK(res < 1e-8);

    // diagonal similarity invariance
    std::uniform_real_distribution<double> u(0.5, 2.0);
    SymTridiag S = T2;
    std::vector<double> RS = R2, d(n);
    for (auto& v : d) v = u(rng);
    for (std::size_t i = 0; i < n; ++i) {
      S.diag[i] *= d[i] * d[i];
      RS[i] *= d[i] * d[i];
      if (i + 1 < n) S.off[i] *= d[i] * d[i + 1];
    }
    auto scaled = indefinite_eigs(S, RS);
    REQUIRE(scaled.real.size() == spec.real.size());
    REQUIRE(scaled.pairs.size() == spec.pairs.size());
    for (std::size_t k = 0; k < spec.real.size(); ++k)
      CHECK(std::abs(scaled.real[k] - spec.real[k]) < 1e-8 * std::max(1.0, std::abs(spec.real[k])));
    for (std::size_t k = 0; k < spec.pairs.size(); ++k)
      CHECK(std::abs(scaled.pairs[k] - spec.pairs[k]) < 1e-8 * std::max(1.0, std::abs(spec.pairs[k])));

    // sign flip of R negates the spectrum
    std::vector<double> Rn = R2;
    for (auto& r : Rn) r = -r;
    auto flipped = indefinite_eigs(T2, Rn);
    REQUIRE(flipped.real.size() == spec.real.size());
    for (std::size_t k = 0; k < spec.real.size(); ++k)
      CHECK(flipped.real[spec.real.size() - 1 - k] == doctest::Approx(-spec.real[k]).epsilon(1e-8));
  }
}

TEST_CASE("definite weights give a real spectrum matching bisection") {
  std::mt19937 rng(17);
  auto T = random_tridiag(rng, 30);
  auto R = random_weights(rng, 30, false);
  auto spec = indefinite_eigs(T, R);
  CHECK(spec.pairs.empty());
  auto ev = sym_tridiag_eigs(T, R);
  REQUIRE(spec.real.size() == ev.size());
  for (std::size_t k = 0; k < ev.size(); ++k) CHECK(std::abs(spec.real[k] - ev[k]) < 1e-8);
}

TEST_CASE("numerical rank") {
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(6, 1, 6), b = Eigen::VectorXd::Ones(6);
  CHECK(numerical_rank(Eigen::MatrixXd(a * b.transpose())) == 1);
  CHECK(numerical_rank(Eigen::MatrixXd(Eigen::MatrixXd::Zero(4, 4))) == 0);
  CHECK(numerical_rank(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(3, 3))) == 3);
}

TEST_CASE("dense cap") {
  SymTridiag T;
  T.diag.assign(kDenseCap + 1, 1.0);
  T.off.assign(kDenseCap, 0.0);
  std::vector<double> R(kDenseCap + 1, 1.0);
  R[0] = -1.0;
  CHECK_THROWS_AS(indefinite_eigs(T, R), ValidationError);
}
