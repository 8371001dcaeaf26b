#include "mucert/graphnet.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace mucert {

GraphLaplacian::GraphLaplacian(DenseMatrix m) : matrix(std::move(m)) {
  if (!matrix.is_square()) throw DimensionError("GraphLaplacian: matrix not square");
  const std::size_t n = matrix.rows();
  if (n < 2) throw InvalidInputError("GraphLaplacian: need at least 2 nodes");
  const double scale = std::max(1.0, matrix.max_abs());
  if (matrix.asymmetry() > 1e-12 * scale) {
    throw InvalidInputError("GraphLaplacian: matrix not symmetric");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += matrix(i, j);
      if (i != j && matrix(i, j) > 1e-12 * scale) {
        throw InvalidInputError("GraphLaplacian: positive off-diagonal entry");
      }
    }
    if (std::abs(row) > 1e-12 * scale * static_cast<double>(n)) {
      throw InvalidInputError("GraphLaplacian: row sums must vanish (L*1 = 0)");
    }
  }
  // Zero row sums with non-positive off-diagonals make every Gershgorin disc
  // sit in [0, 2*diag], so the matrix is PSD without an eigensolve.
}

GraphLaplacian laplacian_from_edges(std::size_t n_nodes, const std::vector<Edge>& edges) {
  if (n_nodes < 2) throw InvalidInputError("laplacian_from_edges: need at least 2 nodes");
  DenseMatrix m(n_nodes, n_nodes, 0.0);
  for (const Edge& e : edges) {
    if (e.i >= n_nodes || e.j >= n_nodes) {
      throw InvalidInputError("laplacian_from_edges: node index out of range");
    }
    if (e.i == e.j) throw InvalidInputError("laplacian_from_edges: self-loop rejected");
    if (!(e.weight > 0.0)) {
      throw InvalidInputError("laplacian_from_edges: edge weight must be positive");
    }
    m(e.i, e.j) -= e.weight;
    m(e.j, e.i) -= e.weight;
    m(e.i, e.i) += e.weight;
    m(e.j, e.j) += e.weight;
  }
  return GraphLaplacian(std::move(m));
}

GraphLaplacian path_laplacian(std::size_t n_nodes, double weight) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n_nodes; ++i) edges.push_back({i, i + 1, weight});
  return laplacian_from_edges(n_nodes, edges);
}

GraphLaplacian complete_laplacian(std::size_t n_nodes, double weight) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n_nodes; ++i)
    for (std::size_t j = i + 1; j < n_nodes; ++j) edges.push_back({i, j, weight});
  return laplacian_from_edges(n_nodes, edges);
}

double lambda2(const GraphLaplacian& l) {
  const auto eig = symmetric_eigenvalues(l.matrix);
  std::size_t zeros = 0;
  const double tol = 1e-10 * std::max(1.0, l.matrix.max_abs());
  for (double v : eig) {
    if (std::abs(v) <= tol) ++zeros;
  }
  if (zeros != 1) {
    throw InvalidInputError("lambda2: graph is disconnected (zero eigenvalue multiplicity " +
                            std::to_string(zeros) + ")");
  }
  return eig[1];
}

DiffusionMatrix::DiffusionMatrix(DenseVector rates) : d(std::move(rates)) {
  if (d.empty()) throw InvalidInputError("DiffusionMatrix: empty rate vector");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw InvalidInputError("DiffusionMatrix: d[" + std::to_string(i) +
                              "] must be strictly positive");
    }
  }
}

SpatialGrid::SpatialGrid(double length_in, std::size_t cells_in)
    : length(length_in), cells(cells_in) {
  if (!(length > 0.0)) throw InvalidInputError("SpatialGrid: length must be positive");
  if (cells < 2) throw InvalidInputError("SpatialGrid: need at least 2 cells");
}

NetworkSystem::NetworkSystem(VectorField cell_field, GraphLaplacian laplacian,
                             DiffusionMatrix diffusion, double cell_weight, bool from_pde,
                             double pde_h)
    : cell_field_(std::move(cell_field)),
      laplacian_(std::move(laplacian)),
      diffusion_(std::move(diffusion)),
      coupling_(),
      cell_weight_(cell_weight),
      from_pde_(from_pde),
      pde_h_(pde_h) {
  if (diffusion_.dim() != cell_field_.dim()) {
    throw DimensionError("NetworkSystem: dim(D) != dim(F)");
  }
  coupling_ = -1.0 * kronecker(laplacian_.matrix, DenseMatrix::diagonal(diffusion_.d));
  const std::size_t N = laplacian_.n_nodes();
  rows_.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double lij = laplacian_.matrix(i, j);
      if (lij != 0.0) rows_[i].push_back({j, lij});
    }
  }
}

void NetworkSystem::eval_into(const double* u, double t, double* out) const {
  const std::size_t n = species();
  const std::size_t N = n_compartments();
  for (std::size_t i = 0; i < N; ++i) {
    cell_field_.eval_into(u + i * n, t, out + i * n);
  }
  for (std::size_t i = 0; i < N; ++i) {
    double* oi = out + i * n;
    for (const auto& [j, lij] : rows_[i]) {
      const double* uj = u + j * n;
      for (std::size_t k = 0; k < n; ++k) oi[k] -= lij * diffusion_.d[k] * uj[k];
    }
  }
}

DenseVector NetworkSystem::operator()(const DenseVector& u, double t) const {
  if (u.size() != dim()) throw DimensionError("NetworkSystem eval: dimension mismatch");
  DenseVector out(u.size());
  eval_into(u.data(), t, out.data());
  return out;
}

bool NetworkSystem::state_in_domain(const double* u, double tol) const {
  const std::size_t n = species();
  for (std::size_t i = 0; i < n_compartments(); ++i) {
    if (!cell_field_.domain().contains(u + i * n, n, tol)) return false;
  }
  return true;
}

NetworkSystem assemble_network(const VectorField& f, const GraphLaplacian& l,
                               const DiffusionMatrix& d) {
  return NetworkSystem(f, l, d);
}

NetworkSystem discretize_pde(const VectorField& f, const DiffusionMatrix& d,
                             const SpatialGrid& grid) {
  const double h = grid.h();
  const GraphLaplacian scaled = path_laplacian(grid.cells, 1.0 / (h * h));
  return NetworkSystem(f, scaled, d, /*cell_weight=*/h, /*from_pde=*/true, /*pde_h=*/h);
}

}  // namespace mucert
