#pragma once

// Shared helpers for the test suites: seeded random matrices, vectors and
// weights, plus approximate-comparison utilities.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mucert/linalg.hpp"

namespace mucert::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline DenseVector random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                 double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return DenseVector(std::move(v));
}

inline DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                 double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> a(rows * cols);
  for (double& x : a) x = dist(rng);
  return DenseMatrix(rows, cols, std::move(a));
}

inline DenseMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  DenseMatrix a = random_matrix(rng, n, n);
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

inline DenseVector random_weights(std::mt19937_64& rng, std::size_t n, double lo = 0.1,
                                  double hi = 10.0) {
  std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
  std::vector<double> q(n);
  for (double& x : q) x = std::exp(dist(rng));
  return DenseVector(std::move(q));
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace mucert::testing
