#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mucert/linalg.hpp"

namespace mucert {

/// Axis-aligned convex box; -inf/+inf edges mark unbounded directions.
struct BoxDomain {
  BoxDomain(std::vector<double> lower, std::vector<double> upper);
  static BoxDomain unbounded(std::size_t dim);

  std::size_t dim() const { return lower.size(); }
  bool contains(const double* x, std::size_t n, double tol = 0.0) const;
  bool contains(const DenseVector& x, double tol = 0.0) const;

  std::vector<double> lower;
  std::vector<double> upper;
};

/// Reaction field F with value, Jacobian and convex box domain.  The raw
/// callbacks write into caller buffers so stacked systems can evaluate cells
/// without allocating.
class VectorField {
 public:
  using RawEval = std::function<void(const double* x, double t, double* out)>;
  using RawJacobian = std::function<void(const double* x, double t, DenseMatrix& out)>;

  VectorField(std::string name, std::size_t dim, RawEval eval, RawJacobian jacobian,
              BoxDomain domain, bool time_dependent = false,
              bool analytic_jacobian = true);

  /// Field with a central finite-difference Jacobian; certification refuses
  /// such fields unless the difference check passes at 1e-7.
  static VectorField with_fd_jacobian(std::string name, std::size_t dim, RawEval eval,
                                      BoxDomain domain, bool time_dependent = false);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const BoxDomain& domain() const { return domain_; }
  bool time_dependent() const { return time_dependent_; }
  bool analytic_jacobian() const { return analytic_jacobian_; }

  DenseVector operator()(const DenseVector& x, double t = 0.0) const;
  DenseMatrix jacobian(const DenseVector& x, double t = 0.0) const;
  void eval_into(const double* x, double t, double* out) const { eval_(x, t, out); }
  void jacobian_into(const double* x, double t, DenseMatrix& out) const {
    jacobian_(x, t, out);
  }

 private:
  std::string name_;
  std::size_t dim_;
  RawEval eval_;
  RawJacobian jacobian_;
  BoxDomain domain_;
  bool time_dependent_;
  bool analytic_jacobian_;
};

/// Rates of the binding/degradation model; all strictly positive.
struct EnzymeParams {
  double z = 1.0;      // production rate of the free enzyme
  double delta = 1.0;  // degradation/dilution rate
  double k1 = 1.0;     // unbinding rate
  double k2 = 1.0;     // binding rate
  double s_y = 2.0;    // conserved substrate+complex total

  void validate() const;
};

/// Reduced 2-species model on V = [0,inf) x [0,s_y]:
///   x' = z - delta x + k1 y - k2 (s_y - y) x
///   y' = -k1 y + k2 (s_y - y) x
VectorField enzyme_reduced(const EnzymeParams& params);

/// Full 3-species model (x, y, s); y + s is conserved along solutions.
VectorField enzyme_full(const EnzymeParams& params);

/// F(x) = Ax on an unbounded domain.
VectorField linear_field(const DenseMatrix& a);

/// x |-> f(x,t) - S x with the correspondingly shifted Jacobian.
VectorField shift_field(const VectorField& f, const DenseMatrix& shift);

DenseMatrix finite_difference_jacobian(const VectorField& f, const DenseVector& x,
                                       double t = 0.0);

/// Largest elementwise deviation between the analytic Jacobian and central
/// differences over `samples` interior points (unbounded edges truncated at
/// `cap`), normalized by max(1, max|J|).
double jacobian_agreement(const VectorField& f, int samples, double cap,
                          std::uint64_t seed);

/// max_t |y(t) + s(t) - s_y| over the 3-species states.
double enzyme_conservation_max_deviation(const std::vector<DenseVector>& states,
                                         double s_y);

/// Model registry for the CLI: "enzyme", "enzyme-full" (scalar parameters) or
/// "linear" (requires the matrix argument).
VectorField make_model(const std::string& name,
                       const std::map<std::string, double>& params,
                       const DenseMatrix* matrix = nullptr);

}  // namespace mucert
