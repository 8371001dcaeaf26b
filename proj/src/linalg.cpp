#include "mucert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail_util.hpp"

namespace mucert {

namespace {

void require_finite(const double* data, std::size_t n, const char* what) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(data[i])) {
      throw InvalidInputError(std::string(what) + ": non-finite entry at index " +
                              std::to_string(i));
    }
  }
}

void require_valid_p(double p) {
  if (std::isnan(p) || p < 1.0) {
    throw InvalidInputError("p must satisfy p >= 1 or p = inf, got " + std::to_string(p));
  }
}

}  // namespace

DenseVector::DenseVector(std::size_t n, double fill) : v_(n, fill) {
  require_finite(v_.data(), v_.size(), "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values) : v_(values) {
  require_finite(v_.data(), v_.size(), "DenseVector");
}

DenseVector::DenseVector(std::vector<double> values) : v_(std::move(values)) {
  require_finite(v_.data(), v_.size(), "DenseVector");
}

DenseVector operator+(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector add: size mismatch");
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

DenseVector operator-(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector sub: size mismatch");
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

DenseVector operator*(double s, const DenseVector& a) {
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), a_(rows * cols, fill) {
  require_finite(a_.data(), a_.size(), "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  a_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("DenseMatrix: ragged initializer");
    a_.insert(a_.end(), row.begin(), row.end());
  }
  require_finite(a_.data(), a_.size(), "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), a_(std::move(row_major)) {
  if (a_.size() != rows_ * cols_) {
    throw DimensionError("DenseMatrix: rows*cols != entry count");
  }
  require_finite(a_.data(), a_.size(), "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const DenseVector& d) {
  DenseMatrix m(d.size(), d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix add: shape mismatch");
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
  return r;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix sub: shape mismatch");
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
  return r;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) r.a_[i] = s * a.a_[i];
  return r;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimension mismatch");
  DenseMatrix r(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

DenseVector operator*(const DenseMatrix& a, const DenseVector& x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: dimension mismatch");
  DenseVector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

WeightedNorm::WeightedNorm(double p_in, DenseVector q_in) : p(p_in), q(std::move(q_in)) {
  require_valid_p(p);
  if (q.empty()) throw InvalidInputError("WeightedNorm: empty weight vector");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0.0)) {
      throw InvalidInputError("WeightedNorm: weight q[" + std::to_string(i) +
                              "] must be strictly positive");
    }
  }
}

WeightedNorm WeightedNorm::unweighted(double p, std::size_t dim) {
  return WeightedNorm(p, DenseVector(dim, 1.0));
}

double p_norm(const DenseVector& x, double p) {
  require_valid_p(p);
  return detail::raw_p_norm(x.values(), p);
}

double weighted_p_norm(const DenseVector& x, const WeightedNorm& w) {
  if (x.size() != w.q.size())
    throw DimensionError("weighted_p_norm: dim(x) != dim(q)");
  if (std::isinf(w.p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, w.q[i] * std::abs(x[i]));
    return m;
  }
  std::vector<double> scaled(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = w.q[i] * x[i];
  return detail::raw_p_norm(scaled, w.p);
}

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix r(a.rows() * b.rows(), a.cols() * b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& a) {
  if (!a.is_square()) throw DimensionError("symmetric_eigenvalues: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  const double scale = std::max(1.0, a.frobenius_norm());
  if (a.asymmetry() > 1e-12 * scale) {
    throw InvalidInputError("symmetric_eigenvalues: matrix not symmetric within 1e-12");
  }

  // Work on the symmetrized copy (A + A^T)/2.
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (a(i, j) + a(j, i));

  const double fro = m.frobenius_norm();
  if (fro == 0.0) return std::vector<double>(n, 0.0);

  // Cyclic Jacobi sweeps; stop once the off-diagonal Frobenius norm falls
  // below 1e-12 * ||A||_F.
  const double stop = 1e-12 * fro;
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * m(i, j) * m(i, j);
    if (std::sqrt(off) < stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = m(p, p), aqq = m(q, q);
        m(p, p) = app - t * apq;
        m(q, q) = aqq + t * apq;
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = m(r, p), arq = m(r, q);
          m(r, p) = arp - s * (arq + tau * arp);
          m(p, r) = m(r, p);
          m(r, q) = arq + s * (arp - tau * arq);
          m(q, r) = m(r, q);
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

namespace {

double column_abs_sum_max(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double row_abs_sum_max(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double spectral_norm(const DenseMatrix& a) {
  const DenseMatrix gram = a.transpose() * a;
  const auto eig = symmetric_eigenvalues(gram);
  const double top = eig.empty() ? 0.0 : std::max(0.0, eig.back());
  return std::sqrt(top);
}

}  // namespace

NormEstimate operator_p_norm(const DenseMatrix& a, double p, std::uint64_t seed) {
  if (!a.is_square()) throw DimensionError("operator_p_norm: matrix not square");
  require_valid_p(p);
  if (p == 1.0) return {column_abs_sum_max(a), true};
  if (std::isinf(p)) return {row_abs_sum_max(a), true};
  if (p == 2.0) return {spectral_norm(a), true};

  // Lower-bound estimate: maximize ||Ax||_p^p over the unit p-sphere from
  // +-e_i and random starts.
  const std::size_t n = a.rows();
  const auto value = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double yi = 0.0;
      for (std::size_t j = 0; j < n; ++j) yi += a(i, j) * x[j];
      s += std::pow(std::abs(yi), p);
    }
    return s;
  };
  const auto grad = [&](const std::vector<double>& x, std::vector<double>& g) {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += a(i, j) * x[j];
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += detail::signed_pow(y[i], p - 1.0) * a(i, j);
      g[j] = p * s;
    }
  };

  double best = 0.0;
  auto starts = detail::ascent_starts(n, 16, p, seed);
  {
    const DenseMatrix gram = a.transpose() * a;
    starts.push_back(detail::top_symmetric_eigvec(
        std::vector<double>(gram.data(), gram.data() + n * n), n));
  }
  for (auto& start : starts) {
    best = std::max(best, detail::sphere_ascent(start, p, value, grad));
  }
  return {std::pow(best, 1.0 / p), false};
}

double grid_weighted_p_norm(const DenseVector& stacked, std::size_t n_species,
                            double cell_weight, const WeightedNorm& w) {
  if (n_species == 0 || stacked.size() % n_species != 0)
    throw DimensionError("grid_weighted_p_norm: state size not a multiple of n_species");
  if (w.q.size() != n_species)
    throw DimensionError("grid_weighted_p_norm: weight dimension != n_species");
  if (!(cell_weight > 0.0))
    throw InvalidInputError("grid_weighted_p_norm: cell weight must be positive");
  const std::size_t cells = stacked.size() / n_species;

  if (std::isinf(w.p)) {
    double m = 0.0;
    for (std::size_t k = 0; k < cells; ++k)
      for (std::size_t i = 0; i < n_species; ++i)
        m = std::max(m, w.q[i] * std::abs(stacked[k * n_species + i]));
    return m;
  }

  double peak = 0.0;
  for (std::size_t k = 0; k < cells; ++k)
    for (std::size_t i = 0; i < n_species; ++i)
      peak = std::max(peak, w.q[i] * std::abs(stacked[k * n_species + i]));
  if (peak == 0.0) return 0.0;

  double s = 0.0;
  for (std::size_t k = 0; k < cells; ++k)
    for (std::size_t i = 0; i < n_species; ++i)
      s += std::pow(w.q[i] * std::abs(stacked[k * n_species + i]) / peak, w.p);
  return peak * std::pow(cell_weight * s, 1.0 / w.p);
}

double p_mean(const DenseVector& f, double p) {
  require_valid_p(p);
  if (f.empty()) throw InvalidInputError("p_mean: empty grid function");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(s / static_cast<double>(f.size()), 1.0 / p);
}

}  // namespace mucert
