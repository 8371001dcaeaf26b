#include "mucert/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace mucert {

namespace {

/// Uniform view over plain fields and interconnections for the stepper.
struct SystemView {
  std::size_t dim;
  std::size_t species;    // per-compartment state size
  double cell_weight;     // h for PDE discretizations, 1 otherwise
  bool from_pde = false;
  double pde_h = 0.0;
  double max_diffusion = 0.0;
  std::string tag;
  std::function<void(const double*, double, double*)> eval;
  std::function<bool(const double*, double)> in_domain;
};

SystemView make_view(const VectorField& f) {
  SystemView v;
  v.dim = f.dim();
  v.species = f.dim();
  v.cell_weight = 1.0;
  v.tag = f.name();
  v.eval = [f](const double* x, double t, double* out) { f.eval_into(x, t, out); };
  v.in_domain = [f](const double* x, double tol) {
    return f.domain().contains(x, f.dim(), tol);
  };
  return v;
}

SystemView make_view(const NetworkSystem& sys) {
  SystemView v;
  v.dim = sys.dim();
  v.species = sys.species();
  v.cell_weight = sys.cell_weight();
  v.from_pde = sys.from_pde();
  v.pde_h = sys.pde_h();
  double dmax = 0.0;
  for (std::size_t i = 0; i < sys.diffusion().dim(); ++i)
    dmax = std::max(dmax, sys.diffusion().d[i]);
  v.max_diffusion = dmax;
  std::ostringstream tag;
  tag << sys.cell_field().name() << (sys.from_pde() ? "-pde" : "-network") << "-N"
      << sys.n_compartments();
  v.tag = tag.str();
  v.eval = [sys](const double* x, double t, double* out) { sys.eval_into(x, t, out); };
  v.in_domain = [sys](const double* x, double tol) { return sys.state_in_domain(x, tol); };
  return v;
}

constexpr double kDomainSlack = 1e-9;

void check_step_preconditions(const SystemView& sys, const DenseVector& u0, double dt) {
  if (u0.size() != sys.dim) throw DimensionError("integrate: state dimension mismatch");
  if (!(dt > 0.0)) throw InvalidInputError("integrate: dt must be positive");
  if (!sys.in_domain(u0.data(), kDomainSlack)) {
    throw InvalidInputError("integrate: initial state outside the domain box");
  }
  if (sys.from_pde) {
    const double limit = 0.9 * sys.pde_h * sys.pde_h / (2.0 * sys.max_diffusion);
    if (dt > limit) {
      std::ostringstream os;
      os << "integrate: dt = " << dt << " violates the explicit stability limit for the "
         << "discretized diffusion; use dt <= " << limit;
      throw InvalidInputError(os.str());
    }
  }
}

/// One classic RK4 step: y <- y + dt/6 (k1 + 2k2 + 2k3 + k4), buffers reused.
struct Rk4Workspace {
  explicit Rk4Workspace(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
  std::vector<double> k1, k2, k3, k4, tmp;
};

void rk4_step(const SystemView& sys, double t, double dt, std::vector<double>& y,
              Rk4Workspace& ws) {
  const std::size_t n = y.size();
  sys.eval(y.data(), t, ws.k1.data());
  for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k1[i];
  sys.eval(ws.tmp.data(), t + 0.5 * dt, ws.k2.data());
  for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k2[i];
  sys.eval(ws.tmp.data(), t + 0.5 * dt, ws.k3.data());
  for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + dt * ws.k3[i];
  sys.eval(ws.tmp.data(), t + dt, ws.k4.data());
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += dt / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
  }
}

std::size_t step_count(double t_end, double dt) {
  if (!(t_end > 0.0)) throw InvalidInputError("integrate: t_end must be positive");
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
}

Trajectory integrate_view(const SystemView& sys, const DenseVector& u0, double t_end,
                          double dt) {
  check_step_preconditions(sys, u0, dt);
  const std::size_t n_steps = step_count(t_end, dt);

  Trajectory traj;
  traj.system_tag = sys.tag;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);

  std::vector<double> y(u0.data(), u0.data() + u0.size());
  Rk4Workspace ws(y.size());
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    rk4_step(sys, t, dt, y, ws);
    const double t_next = static_cast<double>(k + 1) * dt;
    if (!sys.in_domain(y.data(), kDomainSlack)) {
      throw DomainEscapeError("integrate: trajectory left the domain at t = " +
                                  std::to_string(t_next),
                              t_next);
    }
    traj.times.push_back(t_next);
    traj.states.push_back(DenseVector(y));
  }
  return traj;
}

/// Weighted grid distance between stacked states: the cell-weighted norm of
/// a - b (cell weight 1 collapses to the plain weighted p-norm).
double weighted_distance(const double* a, const double* b, std::size_t len,
                         std::size_t species, double cell_weight, const WeightedNorm& w) {
  const DenseVector& q = w.q;
  if (std::isinf(w.p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < len; ++i)
      m = std::max(m, q[i % species] * std::abs(a[i] - b[i]));
    return m;
  }
  if (w.p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += q[i % species] * std::abs(a[i] - b[i]);
    return cell_weight * s;
  }
  if (w.p == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double z = q[i % species] * (a[i] - b[i]);
      s += z * z;
    }
    return std::sqrt(cell_weight * s);
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < len; ++i)
    peak = std::max(peak, q[i % species] * std::abs(a[i] - b[i]));
  if (peak == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i)
    s += std::pow(q[i % species] * std::abs(a[i] - b[i]) / peak, w.p);
  return peak * std::pow(cell_weight * s, 1.0 / w.p);
}

ContractionReport verify_view(const SystemView& sys, const DenseVector& u0,
                              const DenseVector& v0, const WeightedNorm& w, double rate_c,
                              double t_end, double dt, double tolerance) {
  if (w.q.size() != sys.species) {
    throw DimensionError("verify_contraction: weight dimension != species count");
  }
  check_step_preconditions(sys, u0, dt);
  check_step_preconditions(sys, v0, dt);
  const std::size_t n_steps = step_count(t_end, dt);
  const std::size_t stride = std::max<std::size_t>(1, n_steps / 2000);

  ContractionReport rep;
  rep.rate_c = rate_c;
  rep.norm = w;
  rep.tolerance = tolerance;
  rep.stored_stride = stride;
  rep.steps_checked = n_steps + 1;
  rep.max_violation = -kInf;
  rep.max_dini_excess = -kInf;

  std::vector<double> u(u0.data(), u0.data() + u0.size());
  std::vector<double> v(v0.data(), v0.data() + v0.size());
  Rk4Workspace wu(u.size()), wv(v.size());

  const double d0 = weighted_distance(u.data(), v.data(), u.size(), sys.species,
                                      sys.cell_weight, w);
  double d_prev = d0;
  rep.distances.emplace_back(0.0, d0);

  bool ok = true;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    rk4_step(sys, t, dt, u, wu);
    rk4_step(sys, t, dt, v, wv);
    const double t_next = static_cast<double>(k + 1) * dt;
    if (!sys.in_domain(u.data(), kDomainSlack) || !sys.in_domain(v.data(), kDomainSlack)) {
      throw DomainEscapeError("verify_contraction: trajectory left the domain at t = " +
                                  std::to_string(t_next),
                              t_next);
    }
    const double d = weighted_distance(u.data(), v.data(), u.size(), sys.species,
                                       sys.cell_weight, w);

    // Envelope check (multiplicative tolerance).
    if (d0 > 0.0) {
      const double env = d0 * std::exp(rate_c * t_next);
      const double ratio = d / env - 1.0;
      if (ratio > rep.max_violation) {
        rep.max_violation = ratio;
        rep.worst_time = t_next;
      }
      if (ratio > tolerance) ok = false;
    } else if (d > 0.0) {
      ok = false;  // identical starts must stay identical
      rep.max_violation = kInf;
      rep.worst_time = t_next;
    }

    // Forward Dini quotient against the rate.
    const double margin = (d - d_prev) / dt - rate_c * d_prev;
    const double slack = std::max(1e-6, 0.01 * std::abs(rate_c) * d_prev);
    rep.max_dini_excess = std::max(rep.max_dini_excess, margin - slack);
    if (k % stride == 0 || k + 1 == n_steps) {
      rep.dini_margins.emplace_back(t, margin);
      rep.distances.emplace_back(t_next, d);
    }
    d_prev = d;
  }

  if (rep.max_violation == -kInf) rep.max_violation = 0.0;
  if (rep.max_dini_excess == -kInf) rep.max_dini_excess = 0.0;
  rep.bound_ok = ok;
  return rep;
}

}  // namespace

Trajectory integrate(const VectorField& f, const DenseVector& u0, double t_end,
                     double dt) {
  return integrate_view(make_view(f), u0, t_end, dt);
}

Trajectory integrate(const NetworkSystem& sys, const DenseVector& u0, double t_end,
                     double dt) {
  return integrate_view(make_view(sys), u0, t_end, dt);
}

ContractionReport verify_contraction(const NetworkSystem& sys, const DenseVector& u0,
                                     const DenseVector& v0, const WeightedNorm& w,
                                     double rate_c, double t_end, double dt,
                                     double tolerance) {
  return verify_view(make_view(sys), u0, v0, w, rate_c, t_end, dt, tolerance);
}

ContractionReport verify_contraction(const VectorField& f, const DenseVector& u0,
                                     const DenseVector& v0, const WeightedNorm& w,
                                     double rate_c, double t_end, double dt,
                                     double tolerance) {
  return verify_view(make_view(f), u0, v0, w, rate_c, t_end, dt, tolerance);
}

SyncReport verify_sync(const VectorField& f, const GraphLaplacian& topology,
                       const DiffusionMatrix& d, const WeightedNorm& w,
                       const DenseVector& u0, double t_end, double dt, double tolerance,
                       const GridSpec& grid, std::uint64_t seed,
                       const std::string& topology_name) {
  if (w.p == 1.0 || std::isinf(w.p)) {
    throw InvalidInputError(
        "verify_sync: the synchronization bound requires 1 < p < inf (the pairwise "
        "semi-inner-product expansion only exists there)");
  }
  const double lambda = lambda2(topology);  // throws when disconnected

  // Rate from the shifted Jacobian J_F - lambda D.
  DenseMatrix shift = DenseMatrix::diagonal(d.d);
  shift = lambda * shift;
  const VectorField shifted = shift_field(f, shift);
  const LipschitzEstimate lip = lipschitz_constant(shifted, w, grid, seed);

  const NetworkSystem sys = assemble_network(f, topology, d);
  const SystemView view = make_view(sys);
  check_step_preconditions(view, u0, dt);
  const std::size_t n_steps = step_count(t_end, dt);
  const std::size_t stride = std::max<std::size_t>(1, n_steps / 2000);
  const std::size_t N = sys.n_compartments();
  const std::size_t n = sys.species();

  SyncReport rep;
  rep.topology = topology_name;
  rep.lambda = lambda;
  rep.rate_c = lip.value;
  rep.norm = w;
  rep.tolerance = tolerance;
  rep.guaranteed = N <= 3;
  rep.steps_checked = n_steps + 1;
  rep.max_violation = -kInf;

  const auto envelope_w = [&](const std::vector<double>& u) {
    std::vector<double> pair_norms;
    pair_norms.reserve(N * (N - 1) / 2);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i + 1; j < N; ++j) {
        pair_norms.push_back(weighted_distance(u.data() + i * n, u.data() + j * n, n, n,
                                               1.0, w));
      }
    }
    return p_norm(DenseVector(pair_norms), w.p);
  };

  std::vector<double> u(u0.data(), u0.data() + u0.size());
  Rk4Workspace ws(u.size());
  const double w0 = envelope_w(u);
  rep.w_series.emplace_back(0.0, w0);

  bool ok = true;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    rk4_step(view, t, dt, u, ws);
    const double t_next = static_cast<double>(k + 1) * dt;
    if (!view.in_domain(u.data(), kDomainSlack)) {
      throw DomainEscapeError("verify_sync: trajectory left the domain at t = " +
                                  std::to_string(t_next),
                              t_next);
    }
    const double wt = envelope_w(u);
    if (w0 > 0.0) {
      const double ratio = wt / (w0 * std::exp(rep.rate_c * t_next)) - 1.0;
      if (ratio > rep.max_violation) {
        rep.max_violation = ratio;
        rep.worst_time = t_next;
      }
      if (ratio > tolerance) ok = false;
    } else if (wt > 1e-12) {
      ok = false;
      rep.max_violation = kInf;
      rep.worst_time = t_next;
    }
    if (k % stride == 0 || k + 1 == n_steps) rep.w_series.emplace_back(t_next, wt);
  }
  if (rep.max_violation == -kInf) rep.max_violation = 0.0;
  rep.bound_ok = ok;
  return rep;
}

}  // namespace mucert
