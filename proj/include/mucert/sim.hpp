#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mucert/graphnet.hpp"
#include "mucert/linalg.hpp"
#include "mucert/lognorm.hpp"
#include "mucert/models.hpp"

namespace mucert {

/// Fixed-step trajectory; states are validated against the domain box while
/// stepping and an escape aborts the run.
struct Trajectory {
  std::vector<double> times;
  std::vector<DenseVector> states;
  std::string system_tag;
};

/// Classic fourth-order fixed-step integration.  For PDE discretizations the
/// step must satisfy dt <= 0.9 * h^2 / (2 max_i d_i).
Trajectory integrate(const VectorField& f, const DenseVector& u0, double t_end, double dt);
Trajectory integrate(const NetworkSystem& sys, const DenseVector& u0, double t_end,
                     double dt);

/// Outcome of checking ||u(t)-v(t)|| <= e^{ct} ||u(0)-v(0)|| step by step.
/// Distances of PDE discretizations use the cell-weighted grid norm; long
/// runs store every `stored_stride`-th sample while the bound itself is
/// checked at every step.
struct ContractionReport {
  double rate_c = 0.0;
  WeightedNorm norm = WeightedNorm::unweighted(2.0, 1);
  std::vector<std::pair<double, double>> distances;     // (t, distance), downsampled
  bool bound_ok = false;
  double max_violation = 0.0;  // max_t distance/envelope - 1 (before tolerance)
  double worst_time = 0.0;
  std::vector<std::pair<double, double>> dini_margins;  // (t, D+dist - c*dist)
  double max_dini_excess = 0.0;  // max_t margin - max(1e-6, 0.01|c|dist); <= 0 is clean
  double tolerance = 0.01;
  std::size_t steps_checked = 0;
  std::size_t stored_stride = 1;
};

ContractionReport verify_contraction(const NetworkSystem& sys, const DenseVector& u0,
                                     const DenseVector& v0, const WeightedNorm& w,
                                     double rate_c, double t_end, double dt,
                                     double tolerance = 0.01);
ContractionReport verify_contraction(const VectorField& f, const DenseVector& u0,
                                     const DenseVector& v0, const WeightedNorm& w,
                                     double rate_c, double t_end, double dt,
                                     double tolerance = 0.01);

/// Synchronization envelope W(t) = || (pairwise weighted distances) ||_p
/// against e^{ct} W(0) with c = sup mu_{p,Q}(J_F - lambda D); the derivation
/// needs 1 < p < inf.  The rate is guaranteed for the N = 2, 3 topologies;
/// larger graphs are simulated with `guaranteed` = false.
struct SyncReport {
  std::string topology;
  double lambda = 0.0;
  double rate_c = 0.0;
  WeightedNorm norm = WeightedNorm::unweighted(2.0, 1);
  std::vector<std::pair<double, double>> w_series;  // (t, W(t)), downsampled
  bool bound_ok = false;
  double max_violation = 0.0;
  double worst_time = 0.0;
  bool guaranteed = false;
  double tolerance = 0.01;
  std::size_t steps_checked = 0;
};

SyncReport verify_sync(const VectorField& f, const GraphLaplacian& topology,
                       const DiffusionMatrix& d, const WeightedNorm& w,
                       const DenseVector& u0, double t_end, double dt,
                       double tolerance = 0.01, const GridSpec& grid = {},
                       std::uint64_t seed = kDefaultSeed,
                       const std::string& topology_name = "graph");

}  // namespace mucert
