#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

#include "mucert/errors.hpp"

namespace mucert {

/// Extended-real p for norms; use kInf for the max norm.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default seed for every randomized estimator in the library.
inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024u;

/// Dense real vector with finite entries (NaN/Inf rejected at construction).
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0);
  DenseVector(std::initializer_list<double> values);
  explicit DenseVector(std::vector<double> values);

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  const std::vector<double>& values() const { return v_; }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  friend DenseVector operator+(const DenseVector& a, const DenseVector& b);
  friend DenseVector operator-(const DenseVector& a, const DenseVector& b);
  friend DenseVector operator*(double s, const DenseVector& a);

 private:
  std::vector<double> v_;
};

/// Dense row-major real matrix with finite entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const DenseVector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  DenseMatrix transpose() const;
  double frobenius_norm() const;
  double max_abs() const;
  /// max_{i,j} |a_ij - a_ji|, zero for non-square handled by caller.
  double asymmetry() const;

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(double s, const DenseMatrix& a);
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseVector operator*(const DenseMatrix& a, const DenseVector& x);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

/// The pair (p, Q) defining the weighted norm ||x||_{p,Q} = ||Qx||_p,
/// with Q = diag(q) and every q_i > 0.
struct WeightedNorm {
  WeightedNorm(double p, DenseVector q);
  /// Unweighted norm of the given dimension (Q = I).
  static WeightedNorm unweighted(double p, std::size_t dim);

  double p;
  DenseVector q;
};

/// ||x||_p with max-scaling for stability; p in [1, inf].
double p_norm(const DenseVector& x, double p);

/// ||Qx||_p; p = inf gives max_i q_i |x_i|.
double weighted_p_norm(const DenseVector& x, const WeightedNorm& w);

/// Block matrix [a_ij * b]; dimensions multiply.
DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b);

/// Full real spectrum of a symmetric matrix, ascending, via cyclic Jacobi
/// rotations.  The input must be symmetric within 1e-12 relative tolerance and
/// is symmetrized as (A+A^T)/2 before solving.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& a);

/// Operator norm value plus whether it is a closed form or an ascent estimate.
struct NormEstimate {
  double value;
  bool exact;
};

/// Induced operator p-norm of a square matrix.  Exact for p in {1, 2, inf};
/// otherwise a lower-bound estimate from multi-start projected gradient
/// ascent on the unit p-sphere.
NormEstimate operator_p_norm(const DenseMatrix& a, double p,
                             std::uint64_t seed = kDefaultSeed);

/// Discrete weighted L^p norm of a grid function: `stacked` holds m cells of
/// n_species values each (cell-major), every cell carrying uniform weight
/// `cell_weight`.  For p < inf this is (sum_k h sum_i q_i^p |v_i(w_k)|^p)^(1/p);
/// for p = inf it is max_{i,k} q_i |v_i(w_k)|.
double grid_weighted_p_norm(const DenseVector& stacked, std::size_t n_species,
                            double cell_weight, const WeightedNorm& w);

/// Normalized p-mean ((1/m) sum_k |f_k|^p)^(1/p); p = inf gives max |f_k|.
double p_mean(const DenseVector& f, double p);

}  // namespace mucert
