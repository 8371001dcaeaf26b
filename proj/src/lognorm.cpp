#include "mucert/lognorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail_util.hpp"

namespace mucert {

namespace {

void require_square(const DenseMatrix& a, const char* where) {
  if (!a.is_square()) throw DimensionError(std::string(where) + ": matrix not square");
}

/// QAQ^{-1} for diagonal Q = diag(q): entries a_ij * q_i / q_j.
DenseMatrix diag_similarity(const DenseMatrix& a, const DenseVector& q) {
  if (a.rows() != q.size()) throw DimensionError("mu_weighted: dim(A) != dim(q)");
  DenseMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) * (q[i] / q[j]);
  return m;
}

// ---------------------------------------------------------------------------
// Stable excess arithmetic.  The h-quotient definition divides ||I+hA|| - 1 by
// h down to h = 2^-40; forming the norm and subtracting 1 would lose ~12
// digits there, so every path below computes the excess ||.|| - 1 directly.
// ---------------------------------------------------------------------------

/// |1+z| - 1 without cancellation.
double abs1p_minus1(double z) { return z >= -1.0 ? z : -2.0 - z; }

/// (||I+hA||_1 - 1): column sums with the diagonal excess isolated.
double one_norm_excess(const DenseMatrix& a, double h) {
  double best = -kInf;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = abs1p_minus1(h * a(j, j));
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != j) s += h * std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double inf_norm_excess(const DenseMatrix& a, double h) {
  double best = -kInf;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = abs1p_minus1(h * a(i, i));
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (j != i) s += h * std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

/// (||I+hA||_2 - 1) via (I+hA)^T(I+hA) = I + h(A + A^T + hA^TA): the shift by
/// the identity is removed before the eigensolve.
double two_norm_excess(const DenseMatrix& a, double h) {
  const DenseMatrix c = a + a.transpose() + h * (a.transpose() * a);
  const auto eig = symmetric_eigenvalues(c);
  const double nu = eig.empty() ? 0.0 : eig.back();
  const double one_plus = std::max(0.0, 1.0 + h * nu);
  return h * nu / (1.0 + std::sqrt(one_plus));
}

/// sum_i (|x_i + h y_i|^p - |x_i|^p) for a unit-p vector x, term by term.
double unit_power_excess(const std::vector<double>& x, const std::vector<double>& y,
                         double h, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double z = h * y[i];
    if (xi == 0.0) {
      s += std::pow(std::abs(z), p);
    } else {
      const double r = z / xi;
      if (r > -1.0) {
        s += std::pow(std::abs(xi), p) * std::expm1(p * std::log1p(r));
      } else {
        s += std::pow(std::abs(xi), p) * (std::pow(-(1.0 + r), p) - 1.0);
      }
    }
  }
  return s;
}

void matvec_into(const DenseMatrix& a, const std::vector<double>& x,
                 std::vector<double>& y) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
}

/// Best excess over the unit p-sphere at one h, by multi-start projected
/// gradient ascent on the power-sum excess; `carry` holds the argmax from the
/// previous (smaller) h so the quotient trace stays monotone by construction.
double ascend_norm_excess(const DenseMatrix& a, double h, double p, std::uint64_t seed,
                          std::vector<double>* carry) {
  const std::size_t n = a.rows();
  const auto value = [&](const std::vector<double>& x) {
    std::vector<double> y(n);
    matvec_into(a, x, y);
    return unit_power_excess(x, y, h, p);
  };
  const auto grad = [&](const std::vector<double>& x, std::vector<double>& g) {
    std::vector<double> v(n), y(n);
    matvec_into(a, x, y);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] + h * y[i];
    // d/dx_k [sum |v_i|^p - sum |x_i|^p] = p [(I+hA)^T psi(v) - psi(x)]_k.
    for (std::size_t k = 0; k < n; ++k) {
      double s = detail::signed_pow(v[k], p - 1.0);
      for (std::size_t i = 0; i < n; ++i)
        s += h * detail::signed_pow(v[i], p - 1.0) * a(i, k);
      g[k] = p * (s - detail::signed_pow(x[k], p - 1.0));
    }
  };

  double best = -kInf;
  std::vector<double> best_x;
  auto starts = detail::ascent_starts(n, 16, p, seed);
  starts.push_back(detail::top_symmetric_eigvec(
      std::vector<double>(a.data(), a.data() + n * n), n));
  if (carry != nullptr && !carry->empty()) starts.push_back(*carry);
  for (auto& start : starts) {
    const double v = detail::sphere_ascent(start, p, value, grad);
    if (v > best) {
      best = v;
      best_x = start;
    }
  }
  if (carry != nullptr) *carry = best_x;
  if (best <= -1.0) return -1.0;
  return std::expm1(std::log1p(best) / p);
}

double deimling_functional(const DenseMatrix& a, const std::vector<double>& x, double p) {
  const std::size_t n = a.rows();
  std::vector<double> y(n);
  matvec_into(a, x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += detail::signed_pow(x[i], p - 1.0) * y[i];
  return s;
}

}  // namespace

double mu_closed_form(const DenseMatrix& a, double p) {
  require_square(a, "mu_closed_form");
  if (p == 1.0) {
    double best = -kInf;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = a(j, j);
      for (std::size_t i = 0; i < a.rows(); ++i)
        if (i != j) s += std::abs(a(i, j));
      best = std::max(best, s);
    }
    return best;
  }
  if (p == 2.0) {
    const std::size_t n = a.rows();
    DenseMatrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (a(i, j) + a(j, i));
    const auto eig = symmetric_eigenvalues(sym);
    return eig.empty() ? 0.0 : eig.back();
  }
  if (std::isinf(p)) {
    double best = -kInf;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = a(i, i);
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (j != i) s += std::abs(a(i, j));
      best = std::max(best, s);
    }
    return best;
  }
  throw InvalidInputError("mu_closed_form: no closed form for p = " + std::to_string(p) +
                          "; use mu_estimate");
}

std::vector<std::pair<double, double>> mu_h_quotient_trace(const DenseMatrix& a, double p,
                                                           int k_min, int k_max,
                                                           std::uint64_t seed) {
  require_square(a, "mu_h_quotient_trace");
  if (std::isnan(p) || p < 1.0) throw InvalidInputError("mu_h_quotient_trace: p < 1");
  if (k_min > k_max) throw InvalidInputError("mu_h_quotient_trace: empty k range");

  std::vector<std::pair<double, double>> trace;
  trace.reserve(static_cast<std::size_t>(k_max - k_min + 1));

  const bool closed = (p == 1.0) || (p == 2.0) || std::isinf(p);
  if (closed) {
    for (int k = k_min; k <= k_max; ++k) {
      const double h = std::ldexp(1.0, -k);
      double excess;
      if (p == 1.0) {
        excess = one_norm_excess(a, h);
      } else if (p == 2.0) {
        excess = two_norm_excess(a, h);
      } else {
        excess = inf_norm_excess(a, h);
      }
      trace.emplace_back(h, excess / h);
    }
    return trace;
  }

  // Generic p: walk h upward, seeding each ascent with the argmax from the
  // previous (smaller) h.  Per-direction monotonicity of the quotient then
  // keeps the reported trace non-increasing toward h -> 0+.
  std::vector<double> carry;
  std::vector<std::pair<double, double>> ascending;
  for (int k = k_max; k >= k_min; --k) {
    const double h = std::ldexp(1.0, -k);
    const double excess =
        ascend_norm_excess(a, h, p, seed + static_cast<std::uint64_t>(k), &carry);
    ascending.emplace_back(h, excess / h);
  }
  trace.assign(ascending.rbegin(), ascending.rend());
  return trace;
}

MeasureResult mu_estimate(const DenseMatrix& a, double p, EstimateMethod method,
                          std::uint64_t seed) {
  require_square(a, "mu_estimate");
  if (!(p > 1.0) || std::isinf(p)) {
    throw InvalidInputError("mu_estimate: requires 1 < p < inf");
  }

  MeasureResult res;
  res.p = p;
  res.exact = false;

  if (method == EstimateMethod::kSemiInner) {
    const std::size_t n = a.rows();
    const auto value = [&](const std::vector<double>& x) {
      return deimling_functional(a, x, p);
    };
    const auto grad = [&](const std::vector<double>& x, std::vector<double>& g) {
      std::vector<double> y(n);
      matvec_into(a, x, y);
      for (std::size_t k = 0; k < n; ++k) {
        // (p-1)|x_k|^{p-2} y_k + sum_i |x_i|^{p-2} x_i a_ik, with the weight
        // floored away from the p < 2 singularity at x_k = 0.
        const double w = std::pow(std::max(std::abs(x[k]), 1e-12), p - 2.0);
        double s = (p - 1.0) * w * y[k];
        for (std::size_t i = 0; i < n; ++i)
          s += detail::signed_pow(x[i], p - 1.0) * a(i, k);
        g[k] = s;
      }
    };
    double best = -kInf;
    auto starts = detail::ascent_starts(n, 16, p, seed);
    starts.push_back(detail::top_symmetric_eigvec(
        std::vector<double>(a.data(), a.data() + n * n), n));
    for (auto& start : starts) {
      best = std::max(best, detail::sphere_ascent(start, p, value, grad));
    }
    res.value = best;
    return res;
  }

  res.h_trace = mu_h_quotient_trace(a, p, 4, 40, seed);

  double scale = 1.0;
  for (const auto& hq : res.h_trace) scale = std::max(scale, std::abs(hq.second));
  const double slack = 1e-9 * scale;
  for (std::size_t i = 1; i < res.h_trace.size(); ++i) {
    if (res.h_trace[i].second > res.h_trace[i - 1].second + slack) {
      throw TraceError("mu_estimate: h-quotient trace is not monotone", res.h_trace);
    }
  }
  res.value = res.h_trace.back().second;
  return res;
}

MeasureResult mu_weighted(const DenseMatrix& a, const WeightedNorm& w,
                          std::uint64_t seed) {
  require_square(a, "mu_weighted");
  const DenseMatrix m = diag_similarity(a, w.q);
  if (w.p == 1.0 || w.p == 2.0 || std::isinf(w.p)) {
    MeasureResult res;
    res.value = mu_closed_form(m, w.p);
    res.p = w.p;
    res.exact = true;
    return res;
  }
  return mu_estimate(m, w.p, EstimateMethod::kHQuotient, seed);
}

double semi_inner_plus(const DenseVector& x, const DenseVector& y,
                       const WeightedNorm& w) {
  if (x.size() != y.size() || x.size() != w.q.size()) {
    throw DimensionError("semi_inner_plus: dimension mismatch");
  }
  const double nx = weighted_p_norm(x, w);
  if (nx == 0.0) throw InvalidInputError("semi_inner_plus: x must be nonzero");

  if (!std::isinf(w.p) && w.p > 1.0) {
    // (x,y)_+ = ||x||^{2-p} sum |xt_i|^{p-2} xt_i yt_i in weighted coordinates.
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xt = w.q[i] * x[i];
      const double yt = w.q[i] * y[i];
      s += detail::signed_pow(xt, w.p - 1.0) * yt;
    }
    return std::pow(nx, 2.0 - w.p) * s;
  }

  // p in {1, inf}: one-sided quotients at h and h/2; the norm is piecewise
  // linear along rays, so the halved step is at least as close to the limit.
  const auto quotient = [&](double h) {
    DenseVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + h * y[i];
    return (weighted_p_norm(z, w) - nx) / h;
  };
  const double ny = weighted_p_norm(y, w);
  const double h0 = 1e-8 * std::max(1.0, ny > 0.0 ? nx / ny : 1.0);
  (void)quotient(h0);
  return nx * quotient(0.5 * h0);
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << points_per_axis << " pts/axis, cap " << unbounded_cap;
  if (time_points > 1) {
    os << ", t in [" << time_span.first << ", " << time_span.second << "] ("
       << time_points << " pts)";
  }
  return os.str();
}

LipschitzEstimate lipschitz_constant(const VectorField& f, const WeightedNorm& w,
                                     const GridSpec& grid, std::uint64_t seed) {
  if (w.q.size() != f.dim()) throw DimensionError("lipschitz_constant: weight dimension");
  if (grid.points_per_axis < 1) throw InvalidInputError("lipschitz_constant: empty grid");
  const std::size_t n = f.dim();

  // Axis samples; unbounded edges truncated at the cap.
  std::vector<std::vector<double>> axes(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = f.domain().lower[i], hi = f.domain().upper[i];
    if (std::isinf(lo)) lo = -grid.unbounded_cap;
    if (std::isinf(hi)) hi = grid.unbounded_cap;
    if (!(lo < hi)) throw InvalidInputError("lipschitz_constant: cap below box edge");
    const int m = grid.points_per_axis;
    axes[i].resize(m);
    for (int k = 0; k < m; ++k) {
      axes[i][k] = m == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (m - 1);
    }
  }
  std::vector<double> times{0.0};
  if (f.time_dependent() && grid.time_points > 1) {
    times.resize(grid.time_points);
    for (int k = 0; k < grid.time_points; ++k) {
      times[k] = grid.time_span.first +
                 (grid.time_span.second - grid.time_span.first) *
                     static_cast<double>(k) / (grid.time_points - 1);
    }
  }

  LipschitzEstimate est;
  est.value = -kInf;
  est.grid_spec = grid;

  DenseVector x(n);
  std::vector<std::size_t> idx(n, 0);
  bool done = false;
  while (!done) {
    for (std::size_t i = 0; i < n; ++i) x[i] = axes[i][idx[i]];
    for (double t : times) {
      const DenseMatrix j = f.jacobian(x, t);
      const double v = mu_weighted(j, w, seed).value;
      if (v > est.value) {  // strictly greater: the first grid point wins ties
        est.value = v;
        est.argmax_point = x;
        est.argmax_time = t;
      }
    }
    // Lexicographic advance, last axis fastest.
    done = true;
    for (std::size_t i = n; i-- > 0;) {
      if (++idx[i] < axes[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }
  return est;
}

}  // namespace mucert
