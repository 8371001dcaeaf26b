#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mucert/linalg.hpp"
#include "mucert/models.hpp"

namespace mucert {

/// A matrix measure value.  `exact` separates the closed forms (p = 1, 2, inf)
/// from ascent-based estimates; estimated h-quotient results carry the
/// monotone trace of (||I+hA|| - 1)/h values.
struct MeasureResult {
  double value = 0.0;
  double p = 2.0;
  bool exact = true;
  std::vector<std::pair<double, double>> h_trace;  // (h, quotient), h descending
};

enum class EstimateMethod { kHQuotient, kSemiInner };

/// Closed-form matrix measure for p in {1, 2, inf}:
///   p = 1:   max_j (a_jj + sum_{i != j} |a_ij|)
///   p = 2:   largest eigenvalue of (A + A^T)/2
///   p = inf: max_i (a_ii + sum_{j != i} |a_ij|)
double mu_closed_form(const DenseMatrix& a, double p);

/// Measure in the weighted norm ||Qx||_p, computed as the measure of QAQ^{-1}
/// (diagonal similarity); delegates to the closed forms or to mu_estimate.
MeasureResult mu_weighted(const DenseMatrix& a, const WeightedNorm& w,
                          std::uint64_t seed = kDefaultSeed);

/// Measure estimate for p strictly between 1 and inf.  The h-quotient method
/// walks (||I+hA||_p - 1)/h down h = 2^-k, k = 4..40, and reports the final
/// value together with the trace (guaranteed non-increasing as h shrinks);
/// the semi-inner method ascends sup_{||x||_p=1} sum_i |x_i|^{p-2} x_i (Ax)_i.
MeasureResult mu_estimate(const DenseMatrix& a, double p,
                          EstimateMethod method = EstimateMethod::kHQuotient,
                          std::uint64_t seed = kDefaultSeed);

/// The raw h-quotient trace for any p in [1, inf] (closed-form norms where
/// they exist, warm-started ascent otherwise).
std::vector<std::pair<double, double>> mu_h_quotient_trace(
    const DenseMatrix& a, double p, int k_min = 4, int k_max = 40,
    std::uint64_t seed = kDefaultSeed);

/// Right semi inner product (x, y)_+ in the weighted norm: the one-sided
/// directional derivative ||x|| lim_{h->0+} (||x+hy|| - ||x||)/h.  Closed form
/// for p in (1, inf); one-sided difference quotient for p in {1, inf}.
double semi_inner_plus(const DenseVector& x, const DenseVector& y,
                       const WeightedNorm& w);

/// Sampling description for Jacobian suprema over a box domain.  Unbounded
/// box edges are truncated at `unbounded_cap`; time-varying fields add a time
/// axis over `time_span` with `time_points` samples.
struct GridSpec {
  int points_per_axis = 33;
  double unbounded_cap = 10.0;
  int time_points = 9;
  std::pair<double, double> time_span{0.0, 10.0};

  std::string describe() const;
};

/// Least-upper-bound logarithmic Lipschitz constant of a field over its box
/// domain, as the grid supremum of mu_weighted(J_F(x), w); exact in the grid
/// limit on convex domains.
struct LipschitzEstimate {
  double value = 0.0;
  DenseVector argmax_point;
  double argmax_time = 0.0;
  GridSpec grid_spec;
};

LipschitzEstimate lipschitz_constant(const VectorField& f, const WeightedNorm& w,
                                     const GridSpec& grid = {},
                                     std::uint64_t seed = kDefaultSeed);

}  // namespace mucert
