#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mucert/graphnet.hpp"
#include "mucert/lognorm.hpp"
#include "test_support.hpp"

using namespace mucert;
namespace mt = mucert::testing;

namespace {

/// Random connected graph: a random spanning tree plus a few extra edges.
/// Unit weights keep the Laplacian entries integral.
GraphLaplacian random_connected(std::mt19937_64& rng, std::size_t n,
                                bool unit_weights = false) {
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t u = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    edges.push_back({u, v, unit_weights ? 1.0 : wdist(rng)});
  }
  for (std::size_t extra = 0; extra < n / 2; ++extra) {
    const std::size_t u = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t v = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    bool dup = u == v;
    for (const Edge& e : edges) dup = dup || (e.i == std::min(u, v) && e.j == std::max(u, v));
    if (!dup) edges.push_back({std::min(u, v), std::max(u, v), unit_weights ? 1.0 : wdist(rng)});
  }
  return laplacian_from_edges(n, edges);
}

}  // namespace

TEST_CASE("laplacian assembly from edge lists") {
  const GraphLaplacian two = laplacian_from_edges(2, {{0, 1, 1.0}});
  CHECK(two.matrix(0, 0) == 1.0);
  CHECK(two.matrix(0, 1) == -1.0);
  CHECK(two.matrix(1, 0) == -1.0);
  CHECK(two.matrix(1, 1) == 1.0);

  const GraphLaplacian k3 = complete_laplacian(3);
  const DenseMatrix expect_k3{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};
  CHECK((k3.matrix - expect_k3).max_abs() == 0.0);

  const GraphLaplacian p3 = path_laplacian(3);
  const DenseMatrix expect_p3{{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
  CHECK((p3.matrix - expect_p3).max_abs() == 0.0);

  CHECK_THROWS_AS(laplacian_from_edges(3, {{1, 1, 1.0}}), InvalidInputError);
  CHECK_THROWS_AS(laplacian_from_edges(3, {{0, 1, -2.0}}), InvalidInputError);
  CHECK_THROWS_AS(laplacian_from_edges(3, {{0, 5, 1.0}}), InvalidInputError);
  CHECK_THROWS_AS(laplacian_from_edges(1, {}), InvalidInputError);
}

TEST_CASE("laplacian invariants hold for random connected graphs") {
  auto rng = mt::make_rng(12);
  for (int rep = 0; rep < 25; ++rep) {
    const GraphLaplacian l = random_connected(rng, 2 + rep % 5);
    const std::size_t n = l.n_nodes();
    CHECK(l.matrix.asymmetry() <= 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += l.matrix(i, j);
        if (i != j) CHECK(l.matrix(i, j) <= 0.0);
      }
      CHECK(std::abs(row) <= 1e-12 * std::max(1.0, l.matrix.max_abs()));
    }
    const auto eig = symmetric_eigenvalues(l.matrix);
    CHECK(eig.front() >= -1e-12);
  }
}

TEST_CASE("spectral gap of the reference topologies") {
  CHECK(lambda2(complete_laplacian(2)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lambda2(complete_laplacian(3)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(lambda2(path_laplacian(3)) == doctest::Approx(1.0).epsilon(1e-12));

  // Two disconnected components carry a double zero eigenvalue.
  const GraphLaplacian split = laplacian_from_edges(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_THROWS_AS(lambda2(split), InvalidInputError);
}

TEST_CASE("network assembly: uniform equilibria are stationary") {
  // F(x*) = 0 at x* = (z/delta + something)? Use the linear field with A x* = 0
  // at x* = 0 and the binding model at its equilibrium instead.
  const DenseMatrix a{{-2.0, 1.0}, {1.0, -2.0}};
  const VectorField f = linear_field(a);
  const NetworkSystem net = assemble_network(f, complete_laplacian(3),
                                             DiffusionMatrix(DenseVector{0.5, 2.0}));
  const DenseVector zero(6, 0.0);
  const DenseVector rhs = net(zero);
  for (std::size_t i = 0; i < rhs.size(); ++i) CHECK(rhs[i] == 0.0);

  // Any uniform stacked state is coupling-free: coupling * (1 (x) v) = 0.
  auto rng = mt::make_rng(13);
  const DenseVector v = mt::random_vector(rng, 2);
  DenseVector uniform(6);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 2; ++i) uniform[2 * c + i] = v[i];
  const DenseVector coupled = net.coupling() * uniform;
  for (std::size_t i = 0; i < coupled.size(); ++i) {
    CHECK(std::abs(coupled[i]) <= 1e-12);
  }
}

TEST_CASE("two-compartment assembly matches the explicit exchange form") {
  // x' = F(x) + D(y - x), y' = F(y) + D(x - y).
  EnzymeParams p;
  const VectorField f = enzyme_reduced(p);
  const DenseVector d{0.4, 1.7};
  const NetworkSystem net = assemble_network(f, complete_laplacian(2),
                                             DiffusionMatrix(d));
  auto rng = mt::make_rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseVector x{std::uniform_real_distribution<double>(0.0, 4.0)(rng),
                        std::uniform_real_distribution<double>(0.0, p.s_y)(rng)};
    const DenseVector y{std::uniform_real_distribution<double>(0.0, 4.0)(rng),
                        std::uniform_real_distribution<double>(0.0, p.s_y)(rng)};
    DenseVector u(4);
    u[0] = x[0];
    u[1] = x[1];
    u[2] = y[0];
    u[3] = y[1];
    const DenseVector rhs = net(u);
    const DenseVector fx = f(x), fy = f(y);
    for (int i = 0; i < 2; ++i) {
      CHECK(rhs[i] == doctest::Approx(fx[i] + d[i] * (y[i] - x[i])).epsilon(1e-13));
      CHECK(rhs[2 + i] == doctest::Approx(fy[i] + d[i] * (x[i] - y[i])).epsilon(1e-13));
    }
  }
}

TEST_CASE("linear two-compartment system matrix takes the block form") {
  const DenseMatrix a{{-2.0, 1.0}, {1.0, -2.0}};
  const double d1 = 0.3, d2 = 1.9;
  const NetworkSystem net = assemble_network(linear_field(a), complete_laplacian(2),
                                             DiffusionMatrix(DenseVector{d1, d2}));
  // Full system matrix = blockdiag(A, A) + coupling.
  const DenseMatrix expect{{-2.0 - d1, 1.0, d1, 0.0},
                           {1.0, -2.0 - d2, 0.0, d2},
                           {d1, 0.0, -2.0 - d1, 1.0},
                           {0.0, d2, 1.0, -2.0 - d2}};
  for (std::size_t j = 0; j < 4; ++j) {
    DenseVector e(4, 0.0);
    e[j] = 1.0;
    const DenseVector col = net(e);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(col[i] == doctest::Approx(expect(i, j)).epsilon(1e-14));
    }
  }
}

TEST_CASE("diffusion coupling has zero measure in every norm") {
  // The column/row sums of -(L (x) D) cancel term by term.  In floats the
  // cancellation is bitwise for the degree-<=2 topologies with any D
  // (Sterbenz) and for any graph once the products L_ij * d_l are exact
  // (dyadic d); beyond that only the storage rounding of the Kronecker
  // entries remains.
  auto rng = mt::make_rng(15);
  std::uniform_int_distribution<int> expo(-6, 6);

  const auto stacked_weights = [&](std::size_t ncell, std::size_t nodes) {
    const DenseVector qcell = mt::random_weights(rng, ncell, 0.2, 5.0);
    DenseVector qfull(ncell * nodes);
    for (std::size_t c = 0; c < nodes; ++c)
      for (std::size_t i = 0; i < ncell; ++i) qfull[c * ncell + i] = qcell[i];
    return qfull;
  };

  const auto common_checks = [&](const GraphLaplacian& l, const DenseVector& d) {
    const DenseMatrix coupling = -1.0 * kronecker(l.matrix, DenseMatrix::diagonal(d));
    CHECK(std::abs(mu_closed_form(coupling, 2.0)) <= 1e-10);
    for (double p : {1.0, 2.0, kInf}) {
      // Weighted invariance is bitwise: stacked diagonal weights hit only
      // same-species entries, so every similarity ratio is q/q = 1.
      const WeightedNorm w(p, stacked_weights(d.size(), l.n_nodes()));
      CHECK(mu_weighted(coupling, w).value == mu_closed_form(coupling, p));
    }
    CHECK(std::abs(mu_estimate(coupling, 3.0).value) <= 1e-4);
    return coupling;
  };

  for (const auto& l : {path_laplacian(2), path_laplacian(3), complete_laplacian(3)}) {
    const std::size_t n = 1 + static_cast<std::size_t>(
                                  std::uniform_int_distribution<int>(1, 3)(rng));
    const DenseMatrix coupling = common_checks(l, mt::random_weights(rng, n, 0.2, 5.0));
    CHECK(mu_closed_form(coupling, 1.0) == 0.0);
    CHECK(mu_closed_form(coupling, kInf) == 0.0);
  }

  for (int rep = 0; rep < 4; ++rep) {
    const GraphLaplacian l = random_connected(rng, 4 + rep % 3, /*unit_weights=*/true);
    // Integral Laplacian entries and dyadic rates keep every Kronecker entry
    // and every partial column sum exact.
    DenseVector d(2);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::ldexp(1.0, expo(rng));
    const DenseMatrix coupling = common_checks(l, d);
    CHECK(mu_closed_form(coupling, 1.0) == 0.0);
    CHECK(mu_closed_form(coupling, kInf) == 0.0);

    // Fully random rates: only the entry rounding of the product remains.
    const DenseVector dr = mt::random_weights(rng, 2, 0.2, 5.0);
    const DenseMatrix rough = -1.0 * kronecker(l.matrix, DenseMatrix::diagonal(dr));
    const double tiny = 8.0 * 2.220446049250313e-16 * rough.max_abs();
    CHECK(std::abs(mu_closed_form(rough, 1.0)) <= tiny);
    CHECK(std::abs(mu_closed_form(rough, kInf)) <= tiny);
  }
}

TEST_CASE("scalar product inequality behind the dissipativity estimate") {
  // (|a|^{p-2} + |b|^{p-2}) a b <= |a|^p + |b|^p for p >= 1.
  auto rng = mt::make_rng(16);
  std::uniform_real_distribution<double> vdist(-5.0, 5.0), pdist(1.0, 8.0);
  for (int rep = 0; rep < 10000; ++rep) {
    double alpha = vdist(rng), beta = vdist(rng);
    if (alpha == 0.0) alpha = 0.5;
    if (beta == 0.0) beta = -0.5;
    const double p = pdist(rng);
    const double lhs = (std::pow(std::abs(alpha), p - 2.0) +
                        std::pow(std::abs(beta), p - 2.0)) *
                       alpha * beta;
    const double rhs = std::pow(std::abs(alpha), p) + std::pow(std::abs(beta), p);
    CHECK(lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("norms must not be conflated across p: the 4x4 regression") {
  // With Q = diag(3,1): the weighted 2-measure of A is negative, yet the
  // weighted 1-measure of the coupled 4x4 system stays +1 for every
  // diffusion pair.
  const DenseMatrix a{{-2.0, 1.0}, {1.0, -2.0}};
  const WeightedNorm w2(2.0, DenseVector{3.0, 1.0});
  CHECK(mu_weighted(a, w2).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

  auto rng = mt::make_rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const double d1 = std::uniform_real_distribution<double>(0.05, 20.0)(rng);
    const double d2 = std::uniform_real_distribution<double>(0.05, 20.0)(rng);
    const NetworkSystem net = assemble_network(linear_field(a), complete_laplacian(2),
                                               DiffusionMatrix(DenseVector{d1, d2}));
    DenseMatrix full(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
      DenseVector e(4, 0.0);
      e[j] = 1.0;
      const DenseVector col = net(e);
      for (std::size_t i = 0; i < 4; ++i) full(i, j) = col[i];
    }
    const WeightedNorm w1(1.0, DenseVector{3.0, 1.0, 3.0, 1.0});
    CHECK(mu_weighted(full, w1).value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("PDE discretization is a path-graph interconnection") {
  EnzymeParams p;
  const VectorField f = enzyme_reduced(p);
  const DiffusionMatrix d(DenseVector{0.1, 0.1});

  const SpatialGrid grid(1.0, 2);
  const NetworkSystem pde = discretize_pde(f, d, grid);
  CHECK(pde.from_pde());
  CHECK(pde.cell_weight() == doctest::Approx(0.5));
  // m = 2 couples like the two-node network with edge weight 1/h^2 = 4.
  const NetworkSystem two = assemble_network(f, laplacian_from_edges(2, {{0, 1, 4.0}}), d);
  CHECK((pde.coupling() - two.coupling()).max_abs() <= 1e-14);

  CHECK_THROWS_AS(SpatialGrid(1.0, 1), InvalidInputError);
  CHECK_THROWS_AS(SpatialGrid(0.0, 4), InvalidInputError);
}
