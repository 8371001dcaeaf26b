#pragma once

// Internal helpers shared by the norm/measure estimators.  Not installed.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mucert::detail {

/// sign(s) * |s|^e with the continuous extension 0 at s = 0 (for e > 0).
inline double signed_pow(double s, double e) {
  if (s == 0.0) return 0.0;
  const double m = std::pow(std::abs(s), e);
  return s > 0.0 ? m : -m;
}

inline double raw_p_norm(const std::vector<double>& x, double p) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0 || std::isinf(p)) return m;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

/// Scales x onto the unit p-sphere; returns false when x is (numerically)
/// zero and cannot be normalized.
inline bool p_normalize(std::vector<double>& x, double p) {
  const double n = raw_p_norm(x, p);
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  for (double& v : x) v /= n;
  return true;
}

/// Multi-start seeds for sphere ascents: +-e_i, then unit-normalized Gaussian
/// vectors until `count` starts exist.
inline std::vector<std::vector<double>> ascent_starts(std::size_t n, std::size_t count,
                                                      double p, std::uint64_t seed) {
  std::vector<std::vector<double>> starts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    starts.push_back(e);
    e[i] = -1.0;
    starts.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (starts.size() < count) {
    std::vector<double> x(n);
    for (double& v : x) v = gauss(rng);
    if (p_normalize(x, p)) starts.push_back(std::move(x));
  }
  return starts;
}

/// Dominant eigenvector of (A + A^T)/2 by shifted power iteration; a strong
/// extra ascent seed (exact maximizer at p = 2, a good neighborhood else).
inline std::vector<double> top_symmetric_eigvec(
    const std::vector<double>& row_major, std::size_t n) {
  if (n == 0) return {};
  std::vector<double> b(n * n);
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      b[i * n + j] = 0.5 * (row_major[i * n + j] + row_major[j * n + i]);
      row += std::abs(b[i * n + j]);
    }
    shift = std::max(shift, row);
  }
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n);
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = shift * x[i];
      for (std::size_t j = 0; j < n; ++j) s += b[i * n + j] * x[j];
      y[i] = s;
    }
    if (!p_normalize(y, 2.0)) break;
    x = y;
  }
  return x;
}

/// Projected gradient ascent on the unit p-sphere with step halving.  The
/// gradient is projected onto the sphere's tangent space (the radial part is
/// annihilated by the renormalization anyway and only shortens steps).
/// Converged once the relative gain stays below 1e-10 for a few accepted
/// steps or no step size improves.  Returns the best value found starting
/// from x0 (never below the value there); the argmax is left in x0.
template <class Objective, class Gradient>
double sphere_ascent(std::vector<double>& x0, double p, Objective&& value,
                     Gradient&& grad, int max_iter = 1500) {
  if (!p_normalize(x0, p)) return -std::numeric_limits<double>::infinity();
  std::vector<double> x = x0;
  double best = value(x);
  double alpha = 1.0;
  int small_gains = 0;
  const std::size_t n = x.size();
  std::vector<double> g(n), nrm(n), trial(n);
  for (int it = 0; it < max_iter; ++it) {
    grad(x, g);
    // Tangent projection: the sphere normal at x is psi_p(x) up to scale.
    double nn = 0.0, gdotn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nrm[i] = signed_pow(x[i], p - 1.0);
      nn += nrm[i] * nrm[i];
      gdotn += g[i] * nrm[i];
    }
    if (nn > 0.0) {
      for (std::size_t i = 0; i < n; ++i) g[i] -= (gdotn / nn) * nrm[i];
    }
    double gn = 0.0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (!(gn > 0.0) || !std::isfinite(gn)) break;

    bool improved = false;
    double cand = best;
    while (alpha >= 1e-18) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + alpha * g[i] / gn;
      if (p_normalize(trial, p)) {
        cand = value(trial);
        if (std::isfinite(cand) && cand > best) {
          improved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!improved) break;
    const double gain = cand - best;
    x = trial;
    best = cand;
    alpha = std::min(alpha * 4.0, 1e2);
    if (gain <= 1e-10 * std::max(std::abs(best), 1e-30)) {
      if (++small_gains >= 3) break;
    } else {
      small_gains = 0;
    }
  }
  x0 = x;
  return best;
}

}  // namespace mucert::detail
