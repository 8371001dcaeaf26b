#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mucert/models.hpp"
#include "test_support.hpp"

using namespace mucert;
namespace mt = mucert::testing;

namespace {

EnzymeParams default_params() {
  EnzymeParams p;
  p.z = 1.0;
  p.delta = 1.0;
  p.k1 = 1.0;
  p.k2 = 1.0;
  p.s_y = 2.0;
  return p;
}

}  // namespace

TEST_CASE("box domains validate and test membership") {
  const BoxDomain box({0.0, -1.0}, {kInf, 1.0});
  CHECK(box.contains(DenseVector{5.0, 0.0}));
  CHECK(box.contains(DenseVector{0.0, 1.0}));
  CHECK_FALSE(box.contains(DenseVector{-0.1, 0.0}));
  CHECK_FALSE(box.contains(DenseVector{1.0, 1.5}));
  CHECK(box.contains(DenseVector{-1e-12, 0.0}, 1e-9));
  CHECK_THROWS_AS(BoxDomain({1.0}, {1.0}), InvalidInputError);
}

TEST_CASE("reduced binding model: values on the saturated face") {
  const EnzymeParams p = default_params();
  const VectorField f = enzyme_reduced(p);
  REQUIRE(f.dim() == 2);

  // At y = s_y the binding term vanishes.
  auto rng = mt::make_rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const double x = std::uniform_real_distribution<double>(0.0, 8.0)(rng);
    const DenseVector v = f(DenseVector{x, p.s_y});
    CHECK(v[0] == doctest::Approx(p.z - p.delta * x + p.k1 * p.s_y));
    CHECK(v[1] == doctest::Approx(-p.k1 * p.s_y));
  }
}

TEST_CASE("reduced binding model: Jacobian and its zero column sums") {
  const EnzymeParams p = default_params();
  const VectorField f = enzyme_reduced(p);
  auto rng = mt::make_rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const double x = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
    const double y = std::uniform_real_distribution<double>(0.0, p.s_y)(rng);
    const DenseMatrix j = f.jacobian(DenseVector{x, y});
    const double a = p.k2 * (p.s_y - y);
    const double b = p.k1 + p.k2 * x;
    CHECK(j(0, 0) == doctest::Approx(-p.delta - a));
    CHECK(j(0, 1) == doctest::Approx(b));
    CHECK(j(1, 0) == doctest::Approx(a));
    CHECK(j(1, 1) == doctest::Approx(-b));
    // Column sums (-delta, 0): this is what pins the unweighted 1-measure to 0.
    CHECK(j(0, 0) + j(1, 0) == doctest::Approx(-p.delta).epsilon(1e-14));
    CHECK(j(0, 1) + j(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("binding model boundary faces point inward") {
  const EnzymeParams p = default_params();
  const VectorField f = enzyme_reduced(p);
  auto rng = mt::make_rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const double x = std::uniform_real_distribution<double>(0.0, 20.0)(rng);
    const double y = std::uniform_real_distribution<double>(0.0, p.s_y)(rng);
    // x = 0 face: x' = z + k1 y >= 0.
    CHECK(f(DenseVector{0.0, y})[0] >= 0.0);
    // y = 0 face: y' = k2 s_y x >= 0.
    CHECK(f(DenseVector{x, 0.0})[1] >= 0.0);
    // y = s_y face: y' = -k1 s_y < 0.
    CHECK(f(DenseVector{x, p.s_y})[1] < 0.0);
  }
}

TEST_CASE("full model conserves y + s pointwise") {
  const EnzymeParams p = default_params();
  const VectorField f = enzyme_full(p);
  REQUIRE(f.dim() == 3);
  auto rng = mt::make_rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    const DenseVector u{std::uniform_real_distribution<double>(0.0, 5.0)(rng),
                        std::uniform_real_distribution<double>(0.0, p.s_y)(rng),
                        std::uniform_real_distribution<double>(0.0, p.s_y)(rng)};
    const DenseVector v = f(u);
    // d(y + s)/dt = 0 identically.
    CHECK(v[1] + v[2] == doctest::Approx(0.0).epsilon(1e-15));
  }

  const std::vector<DenseVector> states{{1.0, 0.5, 1.5}, {2.0, 0.7, 1.3}};
  CHECK(enzyme_conservation_max_deviation(states, 2.0) == doctest::Approx(0.0));
  const std::vector<DenseVector> off{{1.0, 0.6, 1.5}};
  CHECK(enzyme_conservation_max_deviation(off, 2.0) == doctest::Approx(0.1));
}

TEST_CASE("analytic Jacobians match central differences on all shipped models") {
  const EnzymeParams p = default_params();
  CHECK(jacobian_agreement(enzyme_reduced(p), 1000, 10.0, 99) <= 1e-5);
  CHECK(jacobian_agreement(enzyme_full(p), 1000, 10.0, 99) <= 1e-5);
  const DenseMatrix a{{-2.0, 1.0}, {1.0, -2.0}};
  CHECK(jacobian_agreement(linear_field(a), 1000, 10.0, 99) <= 1e-5);
}

TEST_CASE("finite-difference fallback fields carry the non-analytic flag") {
  auto eval = [](const double* x, double, double* out) {
    out[0] = std::sin(x[0]) - x[1];
    out[1] = x[0] * x[1];
  };
  const VectorField f = VectorField::with_fd_jacobian("toy", 2, eval,
                                                      BoxDomain::unbounded(2));
  CHECK_FALSE(f.analytic_jacobian());
  // The fallback itself agrees with an independent central difference.
  CHECK(jacobian_agreement(f, 200, 3.0, 5) <= 1e-5);
}

TEST_CASE("shifted fields subtract the linear part from value and Jacobian") {
  const EnzymeParams p = default_params();
  const VectorField f = enzyme_reduced(p);
  const DenseMatrix shift{{0.3, 0.0}, {0.0, 0.8}};
  const VectorField g = shift_field(f, shift);
  const DenseVector x{1.0, 0.5};
  const DenseVector fv = f(x), gv = g(x);
  CHECK(gv[0] == doctest::Approx(fv[0] - 0.3 * x[0]));
  CHECK(gv[1] == doctest::Approx(fv[1] - 0.8 * x[1]));
  const DenseMatrix dj = f.jacobian(x) - g.jacobian(x);
  CHECK(dj(0, 0) == doctest::Approx(0.3));
  CHECK(dj(1, 1) == doctest::Approx(0.8));
  CHECK(dj(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("model registry resolves names and parameters") {
  const VectorField f = make_model("enzyme", {{"delta", 2.0}, {"s_y", 3.0}});
  CHECK(f.dim() == 2);
  CHECK(f.domain().upper[1] == doctest::Approx(3.0));
  const DenseMatrix j = f.jacobian(DenseVector{0.0, 0.0});
  CHECK(j(0, 0) == doctest::Approx(-2.0 - 3.0));

  CHECK(make_model("enzyme-full", {}).dim() == 3);

  const DenseMatrix a{{-1.0, 0.0}, {0.0, -2.0}};
  CHECK(make_model("linear", {}, &a).dim() == 2);
  CHECK_THROWS_AS(make_model("linear", {}), InvalidInputError);
  CHECK_THROWS_AS(make_model("nope", {}), InvalidInputError);

  EnzymeParams bad;
  bad.delta = -1.0;
  CHECK_THROWS_AS(enzyme_reduced(bad), InvalidInputError);
}
