#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pdfp/linear_map.hpp"
#include "pdfp/rng.hpp"

using namespace pdfp;

namespace {

// Materialise the operator column by column for oracle-side linear algebra.
oracle::Mat to_matrix(const LinearMap& m) {
  oracle::Mat M(m.out_dim(), oracle::Vec(m.in_dim(), 0.0));
  for (std::size_t j = 0; j < m.in_dim(); ++j) {
    Vec e(m.in_dim(), 0.0);
    e[j] = 1.0;
    const Vec col = m.apply(e);
    for (std::size_t i = 0; i < m.out_dim(); ++i) M[i][j] = col[i];
  }
  return M;
}

LinearMap random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  CounterRng rng(seed);
  return LinearMap::dense(rows, cols, rng.normal_vec(rows * cols));
}

}  // namespace

TEST_CASE("first difference apply and adjoint") {
  const auto B = LinearMap::first_difference(3);
  CHECK(B.in_dim() == 3);
  CHECK(B.out_dim() == 2);
  CHECK(B.apply({1, 2, 4}) == Vec{1, 2});
  CHECK(B.adjoint({1, 0}) == Vec{-1, 1, 0});
  CHECK(LinearMap::first_difference(4).out_dim() == 3);
}

TEST_CASE("identity and zero maps") {
  const Vec x{0.5, -2.0, 3.25};
  CHECK(LinearMap::identity(3).apply(x) == x);
  CHECK(LinearMap::identity(3).adjoint(x) == x);
  const auto Z = LinearMap::zero(4, 2);
  CHECK(Z.apply({1, 2, 3, 4}) == Vec{0, 0});
  CHECK(Z.adjoint({5, 6}) == Vec{0, 0, 0, 0});
}

TEST_CASE("grad2d forward-difference stencil on a 2x2 image") {
  const auto G = LinearMap::grad2d(2, 2);
  CHECK(G.out_dim() == 8);
  // image [[1,2],[3,4]]: horizontal diffs 1,1 (last column zero), vertical
  // diffs 2,2 (last row zero)
  const Vec g = G.apply({1, 2, 3, 4});
  CHECK(g == Vec{1, 0, 1, 0, 2, 2, 0, 0});
  CHECK(LinearMap::grad2d(3, 5).out_dim() == 2 * 3 * 5);

  // adjoint consistency for this instance, via the oracle-side matrix
  const auto M = to_matrix(G);
  CounterRng rng(7);
  for (int k = 0; k < 20; ++k) {
    const Vec x = rng.normal_vec(4), y = rng.normal_vec(8);
    const double lhs = dot(G.apply(x), y);
    const double rhs = dot(x, G.adjoint(y));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    // and it matches the explicit matrix
    const auto Mx = oracle::matvec(M, x);
    for (std::size_t i = 0; i < 8; ++i) CHECK(G.apply(x)[i] == Catch::Approx(Mx[i]));
  }
}

TEST_CASE("periodic averaging convolution preserves constants") {
  Vec kernel(9, 1.0 / 9.0);
  const auto A = LinearMap::conv2d_periodic(kernel, 3, 3, 8, 8);
  const Vec c(64, 0.7);
  const Vec out = A.apply(c);
  for (double v : out) CHECK(v == Catch::Approx(0.7).margin(1e-14));
}

TEST_CASE("dense adjoint identity on random pairs") {
  const auto D = random_dense(6, 9, 3);
  CounterRng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Vec x = rng.normal_vec(9), y = rng.normal_vec(6);
    const double lhs = dot(D.apply(x), y);
    const double rhs = dot(x, D.adjoint(y));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("adjoint consistency across every operator kind") {
  Vec kernel{0.05, 0.1, 0.05, 0.1, 0.4, 0.1, 0.05, 0.1, 0.05};
  const LinearMap maps[] = {
      random_dense(7, 5, 21),
      LinearMap::first_difference(9),
      LinearMap::grad2d(4, 5),
      LinearMap::conv2d_periodic(kernel, 3, 3, 6, 7),
      LinearMap::conv2d_periodic({0.2, 0.3, 0.1, 0.25, 0.05, 0.1}, 2, 3, 5, 6),
      LinearMap::identity(6),
      LinearMap::zero(5, 3),
  };
  for (const auto& m : maps) {
    CounterRng rng(1234);
    for (int k = 0; k < 100; ++k) {
      const Vec x = rng.normal_vec(m.in_dim()), y = rng.normal_vec(m.out_dim());
      const double lhs = dot(m.apply(x), y);
      const double rhs = dot(x, m.adjoint(y));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("dimension mismatches name expected and actual lengths") {
  const auto B = LinearMap::first_difference(3);
  CHECK_THROWS_WITH(B.apply({1, 2}), Catch::Matchers::ContainsSubstring("expected length 3") &&
                                         Catch::Matchers::ContainsSubstring("got 2"));
  CHECK_THROWS_WITH(B.adjoint({1, 2, 3}),
                    Catch::Matchers::ContainsSubstring("expected length 2"));
  CHECK_THROWS_AS(LinearMap::identity(0), std::invalid_argument);
  CHECK_THROWS_AS(LinearMap::zero(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(LinearMap::first_difference(1), std::invalid_argument);
  CHECK_THROWS_AS(LinearMap::dense(2, 2, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(LinearMap::conv2d_periodic(Vec(9, 1.0), 3, 3, 2, 2), std::invalid_argument);
}

TEST_CASE("power method matches the analytic first-difference spectrum") {
  // eigenvalues of BB^T are 2 - 2cos(i pi / n), i = 1..n-1
  const auto e3 = op_norm_sq_estimate(LinearMap::first_difference(3), 1e-12, 100000, 5);
  CHECK(e3.converged);
  CHECK(e3.value == Catch::Approx(3.0).margin(1e-8));

  const double expected100 = 2.0 - 2.0 * std::cos(99.0 * std::numbers::pi / 100.0);
  const auto e100 = op_norm_sq_estimate(LinearMap::first_difference(100), 1e-12, 200000, 5);
  CHECK(e100.value == Catch::Approx(expected100).margin(1e-6));
}

TEST_CASE("grad2d spectral norm stays below 8 and grows with size") {
  double prev = 0.0;
  for (std::size_t s : {4, 8, 16, 32}) {
    const auto est = op_norm_sq_estimate(LinearMap::grad2d(s, s), 1e-10, 50000, 3);
    CHECK(est.value < 8.0);
    CHECK(est.value > prev);
    prev = est.value;
  }
}

TEST_CASE("power method never exceeds a dense eigen-oracle by more than tol") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto D = random_dense(12, 20, seed);
    const double tol = 1e-9;
    const auto est = op_norm_sq_estimate(D, tol, 200000, seed);
    const auto ev = oracle::jacobi_eigenvalues(oracle::mat_mul_t(to_matrix(D)));
    CHECK(est.value <= ev[0] + tol);
    CHECK(est.value == Catch::Approx(ev[0]).epsilon(1e-7));
  }
  // structured instance with an analytically known spectrum
  const auto B = LinearMap::first_difference(50);
  const auto ev = oracle::jacobi_eigenvalues(oracle::mat_mul_t(to_matrix(B)));
  const double analytic = 2.0 - 2.0 * std::cos(49.0 * std::numbers::pi / 50.0);
  CHECK(ev[0] == Catch::Approx(analytic).margin(1e-10));
}

TEST_CASE("power method is deterministic and reports non-convergence") {
  const auto B = LinearMap::first_difference(60);
  const auto a = op_norm_sq_estimate(B, 1e-10, 50000, 9);
  const auto b = op_norm_sq_estimate(B, 1e-10, 50000, 9);
  CHECK(a.value == b.value);
  CHECK(a.iterations_used == b.iterations_used);

  const auto hard = op_norm_sq_estimate(B, 1e-15, 3, 9);
  CHECK_FALSE(hard.converged);
  CHECK(hard.value > 0.0);
  CHECK(hard.iterations_used == 3);

  const auto zero = op_norm_sq_estimate(LinearMap::zero(4, 3), 1e-10, 100, 1);
  CHECK(zero.converged);
  CHECK(zero.value == 0.0);
}
