#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "indefsl/assembly.hpp"
#include "indefsl/eigen_core.hpp"
#include "indefsl/error.hpp"

using namespace indefsl;

namespace {
CoefficientField field(char const* r, char const* q, char const* p = "1") {
  CoefficientField f;
  f.r = parse_expression(r);
  f.q = parse_expression(q);
  f.p = parse_expression(p);
  return f;
}
}  // namespace

TEST_CASE("grid construction") {
  auto g = build_grid(-10, 10, 10, SignWindow{0, 0});
  CHECK(g.size() == 201);
  REQUIRE(g.alpha_index);
  CHECK(g.nodes[*g.alpha_index] == 0.0);
  CHECK(g.alpha_index == g.beta_index);
  CHECK(build_grid(-2, 2, 1).size() == 5);
  CHECK_THROWS_AS(build_grid(-10, 10, 10, SignWindow{0, 15}), ValidationError);

  auto off = build_grid(-10, 10, 10, SignWindow{-1.05, 0.32});
  CHECK(off.nodes[*off.alpha_index] == -1.05);
  CHECK(off.nodes[*off.beta_index] == 0.32);
  CHECK(off.size() == 202);  // -1.05 inserted, 0.32 snapped onto 0.3
  CHECK(std::is_sorted(off.nodes.begin(), off.nodes.end()));

  auto close = build_grid(-10, 10, 10, SignWindow{0.0, 0.02});
  CHECK(close.nodes[*close.alpha_index] == 0.0);
  CHECK(close.nodes[*close.beta_index] == 0.02);
  CHECK(*close.beta_index == *close.alpha_index + 1);
}

TEST_CASE("free Dirichlet problem matches the closed-form FD eigenvalues") {
  auto f = field("1", "0");
  for (int n : {4, 20, 64}) {
    auto g = uniform_grid(0.0, std::numbers::pi, n);
    auto op = assemble_operator(f, g, Variant::K_full);
    CHECK(op.size() == static_cast<std::size_t>(n - 1));
    auto ev = sym_tridiag_eigs(op.T, op.R);
    double const h = g.h;
    for (int k = 1; k < n; ++k) {
      double const exact = 2.0 / (h * h) * (1.0 - std::cos(k * h));
      CHECK(ev[static_cast<std::size_t>(k - 1)] == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("variants") {
  auto f = field("sgn(x)", "1");
  auto g = build_grid(-5, 5, 10, SignWindow{0, 0});
  auto K = assemble_operator(f, g, Variant::K_full);
  auto L = assemble_operator(f, g, Variant::L_full);
  CHECK(K.T == L.T);
  for (std::size_t k = 0; k < K.size(); ++k) {
    CHECK(L.R[k] == std::abs(K.R[k]));
    CHECK((K.R[k] < 0) == (g.nodes[K.nodes[k]] < 0));
  }
  auto Hp = assemble_operator(f, g, Variant::H_plus);
  auto Hm = assemble_operator(f, g, Variant::H_minus);
  CHECK(Hp.size() == 49);
  CHECK(Hm.size() == 49);
  CHECK(std::all_of(Hp.R.begin(), Hp.R.end(), [](double r) { return r > 0; }));
  CHECK(std::all_of(Hm.R.begin(), Hm.R.end(), [](double r) { return r < 0; }));
  CHECK(assemble_operator(f, g, Variant::K_alphabeta).empty());
  CHECK_THROWS_AS(assemble_operator(f, build_grid(-5, 5, 10), Variant::H_plus), ValidationError);
  CHECK_THROWS_AS(assemble_operator(field("1", "0"), g, Variant::H_minus), ValidationError);
}

TEST_CASE("block decoupling and rank of the difference") {
  auto f = field("pw{[-inf,-1): -1; [-1,1): 0.5*x-0.27; [1,inf): 2;}", "cos(x)", "1+0.5*sech(x)");
  for (auto w : {SignWindow{0, 0}, SignWindow{-1, 1}}) {
    auto g = build_grid(-6, 6, 10, w);
    auto K = assemble_operator(f, g, Variant::K_full);
    auto B = assemble_operator(f, g, Variant::H0_blockdiag);
    auto D = blockdiag_difference(K, B);
    std::size_t const bound = w.alpha == w.beta ? 2 : 4;
    CHECK(numerical_rank(D) <= bound);
    CHECK(B.decoupled.size() == (w.alpha == w.beta ? 1u : 2u));
    for (std::size_t k : B.decoupled) {
      if (k > 0) CHECK(B.T.off[k - 1] == 0.0);
      if (k + 1 < B.size()) CHECK(B.T.off[k] == 0.0);
      CHECK(B.T.diag[k] >= 0.0);
    }
    CHECK(B.artificial_eigenvalues().size() == B.decoupled.size());
    CHECK(numerical_rank(blockdiag_difference(K, K)) == 0);
  }
}

TEST_CASE("nonuniform weights stay consistent after insertion") {
  // with an inserted node the lumped weights still sum to the interval length
  auto f = field("sgn(x)", "0");
  auto g = build_grid(-5, 5, 10, SignWindow{-1.05, 1.05});
  auto L = assemble_operator(f, g, Variant::L_full);
  double sum = 0.0;
  for (double r : L.R) sum += r;
  CHECK(sum == doctest::Approx(10.0 - 0.1).epsilon(1e-12));
}
