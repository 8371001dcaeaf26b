#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mucert/linalg.hpp"
#include "mucert/models.hpp"

namespace mucert {

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight = 1.0;
};

/// Symmetric positive-semidefinite graph Laplacian: row sums zero,
/// off-diagonals <= 0.  This artifact couples compartments as -(L (x) D)
/// throughout; graphs written with negative diagonals elsewhere are the
/// negated form of these matrices.
struct GraphLaplacian {
  /// Validates symmetry (1e-12), zero row sums (1e-12) and the off-diagonal
  /// sign; positive semidefiniteness then follows from diagonal dominance.
  explicit GraphLaplacian(DenseMatrix m);

  std::size_t n_nodes() const { return matrix.rows(); }
  DenseMatrix matrix;
};

GraphLaplacian laplacian_from_edges(std::size_t n_nodes, const std::vector<Edge>& edges);
GraphLaplacian path_laplacian(std::size_t n_nodes, double weight = 1.0);
GraphLaplacian complete_laplacian(std::size_t n_nodes, double weight = 1.0);

/// Second-smallest Laplacian eigenvalue (the synchronization rate shift);
/// errors on disconnected graphs, naming the zero-eigenvalue multiplicity.
double lambda2(const GraphLaplacian& l);

/// Positive per-species diffusion rates D = diag(d).
struct DiffusionMatrix {
  explicit DiffusionMatrix(DenseVector rates);
  std::size_t dim() const { return d.size(); }
  DenseVector d;
};

/// Uniform 1-D grid over an interval of the given length: m cells of width
/// length/m (midpoint rule).
struct SpatialGrid {
  SpatialGrid(double length, std::size_t cells);
  double h() const { return length / static_cast<double>(cells); }
  double length;
  std::size_t cells;
};

/// The diffusive interconnection du/dt = F~(u) - (L (x) D) u of N identical
/// compartments; states stack compartment-major.  PDE semidiscretizations are
/// the same object with L = L_path / h^2 and carry the cell weight h so that
/// distances approximate the continuum weighted norm.
class NetworkSystem {
 public:
  NetworkSystem(VectorField cell_field, GraphLaplacian laplacian, DiffusionMatrix diffusion,
                double cell_weight = 1.0, bool from_pde = false, double pde_h = 0.0);

  const VectorField& cell_field() const { return cell_field_; }
  const GraphLaplacian& laplacian() const { return laplacian_; }
  const DiffusionMatrix& diffusion() const { return diffusion_; }
  const DenseMatrix& coupling() const { return coupling_; }

  std::size_t n_compartments() const { return laplacian_.n_nodes(); }
  std::size_t species() const { return cell_field_.dim(); }
  std::size_t dim() const { return species() * n_compartments(); }
  double cell_weight() const { return cell_weight_; }
  bool from_pde() const { return from_pde_; }
  double pde_h() const { return pde_h_; }

  /// Stacked right-hand side F(u_i) - sum_j L_ij D u_j, allocation-free.
  void eval_into(const double* u, double t, double* out) const;
  DenseVector operator()(const DenseVector& u, double t = 0.0) const;

  bool state_in_domain(const double* u, double tol = 0.0) const;

 private:
  VectorField cell_field_;
  GraphLaplacian laplacian_;
  DiffusionMatrix diffusion_;
  DenseMatrix coupling_;  // -(L (x) D), kept for inspection
  double cell_weight_;
  bool from_pde_;
  double pde_h_;
  // Nonzero Laplacian entries per row for the fast evaluation path.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
};

/// u' = F~(u) - (L (x) D) u.
NetworkSystem assemble_network(const VectorField& f, const GraphLaplacian& l,
                               const DiffusionMatrix& d);

/// Method-of-lines semidiscretization of u_t = F(u) + D u_xx with no-flux
/// boundaries: the path-graph Laplacian scaled by 1/h^2, so the result is an
/// exact diffusive interconnection and every network-level bound applies to
/// the discretization itself.
NetworkSystem discretize_pde(const VectorField& f, const DiffusionMatrix& d,
                             const SpatialGrid& grid);

}  // namespace mucert
