#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mucert/linalg.hpp"
#include "test_support.hpp"

using namespace mucert;
namespace mt = mucert::testing;

TEST_CASE("weighted_p_norm basics") {
  const WeightedNorm w2 = WeightedNorm::unweighted(2.0, 3);
  CHECK(weighted_p_norm(DenseVector{0.0, 0.0, 0.0}, w2) == 0.0);

  CHECK(weighted_p_norm(DenseVector{1.0, 1.0}, WeightedNorm::unweighted(2.0, 2)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  // ||Qx||_1 with Q = diag(3,1), x = (1,-2): 3*1 + 1*2 = 5.
  CHECK(weighted_p_norm(DenseVector{1.0, -2.0}, WeightedNorm(1.0, DenseVector{3.0, 1.0})) ==
        doctest::Approx(5.0).epsilon(1e-15));

  CHECK(weighted_p_norm(DenseVector{1.0, -2.0}, WeightedNorm(kInf, DenseVector{3.0, 1.0})) ==
        doctest::Approx(3.0));

  CHECK_THROWS_AS(weighted_p_norm(DenseVector{1.0}, w2), DimensionError);
}

TEST_CASE("constructors reject non-finite entries and bad weights") {
  CHECK_THROWS_AS((DenseVector{1.0, std::nan("")}), InvalidInputError);
  CHECK_THROWS_AS((DenseMatrix{{1.0, kInf}, {0.0, 1.0}}), InvalidInputError);
  CHECK_THROWS_AS(WeightedNorm(2.0, DenseVector{1.0, 0.0}), InvalidInputError);
  CHECK_THROWS_AS(WeightedNorm(0.5, DenseVector{1.0}), InvalidInputError);
  CHECK_NOTHROW(WeightedNorm(kInf, DenseVector{1.0, 2.0}));
}

TEST_CASE("norm axioms hold on random triples") {
  auto rng = mt::make_rng(101);
  const double ps[] = {1.0, 1.5, 2.0, 3.0, 7.0, kInf};
  int checked = 0;
  for (int rep = 0; rep < 1200; ++rep) {
    const std::size_t n = 1 + rep % 6;
    const WeightedNorm w(ps[rep % 6], mt::random_weights(rng, n));
    const DenseVector x = mt::random_vector(rng, n, -5.0, 5.0);
    const DenseVector y = mt::random_vector(rng, n, -5.0, 5.0);
    const double a = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);

    const double nx = weighted_p_norm(x, w);
    const double ny = weighted_p_norm(y, w);
    CHECK(nx >= 0.0);
    CHECK(weighted_p_norm(x + y, w) <= nx + ny + 1e-12 * (1.0 + nx + ny));
    CHECK(weighted_p_norm(a * x, w) ==
          doctest::Approx(std::abs(a) * nx).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked >= 1000);
}

TEST_CASE("kronecker product blocks and identities") {
  const DenseMatrix i2 = DenseMatrix::identity(2);
  const DenseMatrix i4 = kronecker(i2, i2);
  REQUIRE(i4.rows() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(i4(i, j) == (i == j ? 1.0 : 0.0));

  const DenseMatrix b{{1.0, 2.0}, {3.0, 4.0}};
  const DenseMatrix one{{1.0}};
  const DenseMatrix kb = kronecker(one, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(kb(i, j) == b(i, j));

  // [[1,-1],[-1,1]] (x) diag(d1,d2): 2x2 blocks of +-diag(d1,d2).
  const double d1 = 0.7, d2 = 2.5;
  const DenseMatrix l{{1.0, -1.0}, {-1.0, 1.0}};
  const DenseMatrix k = kronecker(l, DenseMatrix::diagonal(DenseVector{d1, d2}));
  const DenseMatrix expect{{d1, 0, -d1, 0}, {0, d2, 0, -d2}, {-d1, 0, d1, 0}, {0, -d2, 0, d2}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(k(i, j) == expect(i, j));
}

TEST_CASE("kronecker mixed-product identity on random quadruples") {
  auto rng = mt::make_rng(202);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t m = 1 + rep % 3, n = 1 + (rep / 3) % 3, r = 1 + rep % 2,
                      s = 1 + (rep / 2) % 3;
    const DenseMatrix a = mt::random_matrix(rng, m, n);
    const DenseMatrix c = mt::random_matrix(rng, n, r);
    const DenseMatrix b = mt::random_matrix(rng, s, m);
    const DenseMatrix d = mt::random_matrix(rng, m, s);
    const DenseMatrix lhs = kronecker(a, b) * kronecker(c, d);
    const DenseMatrix rhs = kronecker(a * c, b * d);
    const DenseMatrix diff = lhs - rhs;
    CHECK(diff.max_abs() <= 1e-10 * std::max(1.0, rhs.max_abs()));
  }
}

TEST_CASE("symmetric eigenvalues: known spectra") {
  const auto diag = symmetric_eigenvalues(DenseMatrix{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  REQUIRE(diag.size() == 3);
  CHECK(diag[0] == doctest::Approx(1.0));
  CHECK(diag[1] == doctest::Approx(2.0));
  CHECK(diag[2] == doctest::Approx(3.0));

  const auto flip = symmetric_eigenvalues(DenseMatrix{{0, 1}, {1, 0}});
  CHECK(flip[0] == doctest::Approx(-1.0));
  CHECK(flip[1] == doctest::Approx(1.0));

  // Path-graph Laplacian on 3 nodes: spectrum {0, 1, 3}.
  const auto path =
      symmetric_eigenvalues(DenseMatrix{{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}});
  CHECK(std::abs(path[0]) < 1e-12);
  CHECK(path[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(path[2] == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS(symmetric_eigenvalues(DenseMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(symmetric_eigenvalues((DenseMatrix{{0, 1}, {2, 0}})), InvalidInputError);
}

TEST_CASE("symmetric eigenvalues: residual quality on random matrices") {
  auto rng = mt::make_rng(303);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + rep % 7;
    const DenseMatrix a = mt::random_symmetric(rng, n);
    const auto eig = symmetric_eigenvalues(a);
    REQUIRE(eig.size() == n);
    // Trace and Frobenius norm are eigenvalue invariants.
    double tr = 0.0, fr2 = 0.0, sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += a(i, i);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) fr2 += a(i, j) * a(i, j);
    for (double l : eig) {
      sum += l;
      sq += l * l;
    }
    CHECK(mt::close_rel(sum, tr, 1e-12));
    CHECK(mt::close_rel(sq, fr2, 1e-12));
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(eig[i] <= eig[i + 1]);
  }
}

TEST_CASE("operator p-norm closed forms") {
  const DenseMatrix a{{1, 2}, {3, 4}};
  CHECK(operator_p_norm(DenseMatrix::identity(3), 1.0).value == doctest::Approx(1.0));
  CHECK(operator_p_norm(DenseMatrix::identity(3), 2.0).value == doctest::Approx(1.0));
  CHECK(operator_p_norm(DenseMatrix::identity(3), kInf).value == doctest::Approx(1.0));
  CHECK(operator_p_norm(DenseMatrix::identity(3), 3.0).value == doctest::Approx(1.0));

  CHECK(operator_p_norm(a, 1.0).value == doctest::Approx(6.0));
  CHECK(operator_p_norm(a, kInf).value == doctest::Approx(7.0));
  CHECK(operator_p_norm(a, 1.0).exact);
  CHECK_FALSE(operator_p_norm(a, 3.0).exact);
  CHECK_THROWS_AS(operator_p_norm(a, 0.5), InvalidInputError);
}

TEST_CASE("general-p operator norm estimate is sandwiched") {
  // Lower bound by construction; Riesz-Thorin interpolation gives the upper
  // bound ||A||_p <= ||A||_1^(1/p) ||A||_inf^(1-1/p).
  auto rng = mt::make_rng(404);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 2 + rep % 5;
    const DenseMatrix a = mt::random_matrix(rng, n, n, -2.0, 2.0);
    for (double p : {1.3, 3.0, 5.0}) {
      const double est = operator_p_norm(a, p, 17).value;
      const double n1 = operator_p_norm(a, 1.0).value;
      const double ninf = operator_p_norm(a, kInf).value;
      const double upper = std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
      // Column p-norms are reachable from the +-e_j starts.
      double col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> cj(n);
        for (std::size_t i = 0; i < n; ++i) cj[i] = a(i, j);
        col = std::max(col, p_norm(DenseVector(cj), p));
      }
      CHECK(est >= col - 1e-12);
      CHECK(est <= upper * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("grid norm matches the vector-of-norms form exactly") {
  // Discrete form of the norm-interchange identity: stacking cell values and
  // weighting once equals weighting the per-species grid norms.
  auto rng = mt::make_rng(505);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + rep % 4;
    const std::size_t m = 2 + rep % 9;
    const double h = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
    const double ps[] = {1.0, 1.5, 2.0, 4.0, kInf};
    const WeightedNorm w(ps[rep % 5], mt::random_weights(rng, n));
    const DenseVector stacked = mt::random_vector(rng, n * m, -3.0, 3.0);

    const double lhs = grid_weighted_p_norm(stacked, n, h, w);

    std::vector<double> species_norms(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> vi(m);
      for (std::size_t k = 0; k < m; ++k) vi[k] = stacked[k * n + i];
      if (std::isinf(w.p)) {
        double mx = 0.0;
        for (double v : vi) mx = std::max(mx, std::abs(v));
        species_norms[i] = mx;
      } else {
        double s = 0.0;
        for (double v : vi) s += std::pow(std::abs(v), w.p);
        species_norms[i] = std::pow(h * s, 1.0 / w.p);
      }
    }
    const double rhs = weighted_p_norm(DenseVector(species_norms), w);
    CHECK(mt::close_rel(lhs, rhs, 1e-12));
  }
}

TEST_CASE("normalized p-means increase in p and approach the max") {
  // The discrete mean over m cells sits above max|f| * (1/m)^(1/p); the 5%
  // proximity at p = 64 therefore needs m <= 26 or so.
  auto rng = mt::make_rng(606);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t m = 3 + rep % 22;
    const DenseVector f = mt::random_vector(rng, m, -4.0, 4.0);
    double prev = p_mean(f, 1.0);
    for (double p : {1.5, 2.0, 3.0, 6.0, 12.0, 24.0, 64.0}) {
      const double cur = p_mean(f, p);
      CHECK(prev <= cur + 1e-12);
      prev = cur;
    }
    const double peak = p_mean(f, kInf);
    CHECK(p_mean(f, 64.0) >= 0.95 * peak);
    CHECK(p_mean(f, 64.0) <= peak + 1e-12);
  }
}
