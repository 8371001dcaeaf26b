#include "mucert/models.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace mucert {

BoxDomain::BoxDomain(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw DimensionError("BoxDomain: bound size mismatch");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || !(lower[i] < upper[i])) {
      throw InvalidInputError("BoxDomain: requires lower[i] < upper[i] at axis " +
                              std::to_string(i));
    }
  }
}

BoxDomain BoxDomain::unbounded(std::size_t dim) {
  return BoxDomain(std::vector<double>(dim, -kInf), std::vector<double>(dim, kInf));
}

bool BoxDomain::contains(const double* x, std::size_t n, double tol) const {
  if (n != lower.size()) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] >= lower[i] - tol) || !(x[i] <= upper[i] + tol)) return false;
  }
  return true;
}

bool BoxDomain::contains(const DenseVector& x, double tol) const {
  return contains(x.data(), x.size(), tol);
}

VectorField::VectorField(std::string name, std::size_t dim, RawEval eval,
                         RawJacobian jacobian, BoxDomain domain, bool time_dependent,
                         bool analytic_jacobian)
    : name_(std::move(name)),
      dim_(dim),
      eval_(std::move(eval)),
      jacobian_(std::move(jacobian)),
      domain_(std::move(domain)),
      time_dependent_(time_dependent),
      analytic_jacobian_(analytic_jacobian) {
  if (domain_.dim() != dim_) throw DimensionError("VectorField: domain dimension mismatch");
}

VectorField VectorField::with_fd_jacobian(std::string name, std::size_t dim, RawEval eval,
                                          BoxDomain domain, bool time_dependent) {
  auto eval_copy = eval;
  auto jac = [dim, eval_copy](const double* x, double t, DenseMatrix& out) {
    if (out.rows() != dim || out.cols() != dim) out = DenseMatrix(dim, dim);
    std::vector<double> xp(x, x + dim), xm(x, x + dim), fp(dim), fm(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const double h = 6e-6 * std::max(1.0, std::abs(x[j]));
      xp[j] = x[j] + h;
      xm[j] = x[j] - h;
      eval_copy(xp.data(), t, fp.data());
      eval_copy(xm.data(), t, fm.data());
      for (std::size_t i = 0; i < dim; ++i) out(i, j) = (fp[i] - fm[i]) / (2.0 * h);
      xp[j] = x[j];
      xm[j] = x[j];
    }
  };
  return VectorField(std::move(name), dim, std::move(eval), std::move(jac),
                     std::move(domain), time_dependent, /*analytic_jacobian=*/false);
}

DenseVector VectorField::operator()(const DenseVector& x, double t) const {
  if (x.size() != dim_) throw DimensionError("VectorField eval: dimension mismatch");
  DenseVector out(dim_);
  eval_(x.data(), t, out.data());
  return out;
}

DenseMatrix VectorField::jacobian(const DenseVector& x, double t) const {
  if (x.size() != dim_) throw DimensionError("VectorField jacobian: dimension mismatch");
  DenseMatrix out(dim_, dim_);
  jacobian_(x.data(), t, out);
  return out;
}

void EnzymeParams::validate() const {
  if (!(z > 0.0 && delta > 0.0 && k1 > 0.0 && k2 > 0.0 && s_y > 0.0)) {
    throw InvalidInputError("EnzymeParams: all parameters must be strictly positive");
  }
}

VectorField enzyme_reduced(const EnzymeParams& params) {
  params.validate();
  const EnzymeParams p = params;
  auto eval = [p](const double* u, double, double* out) {
    const double x = u[0], y = u[1];
    const double bind = p.k2 * (p.s_y - y) * x;
    out[0] = p.z - p.delta * x + p.k1 * y - bind;
    out[1] = -p.k1 * y + bind;
  };
  auto jac = [p](const double* u, double, DenseMatrix& out) {
    if (out.rows() != 2 || out.cols() != 2) out = DenseMatrix(2, 2);
    const double x = u[0], y = u[1];
    const double a = p.k2 * (p.s_y - y);
    const double b = p.k1 + p.k2 * x;
    out(0, 0) = -p.delta - a;
    out(0, 1) = b;
    out(1, 0) = a;
    out(1, 1) = -b;
  };
  return VectorField("enzyme", 2, std::move(eval), std::move(jac),
                     BoxDomain({0.0, 0.0}, {kInf, params.s_y}));
}

VectorField enzyme_full(const EnzymeParams& params) {
  params.validate();
  const EnzymeParams p = params;
  auto eval = [p](const double* u, double, double* out) {
    const double x = u[0], y = u[1], s = u[2];
    const double bind = p.k2 * s * x;
    out[0] = p.z - p.delta * x + p.k1 * y - bind;
    out[1] = -p.k1 * y + bind;
    out[2] = p.k1 * y - bind;
  };
  auto jac = [p](const double* u, double, DenseMatrix& out) {
    if (out.rows() != 3 || out.cols() != 3) out = DenseMatrix(3, 3);
    const double x = u[0], s = u[2];
    out(0, 0) = -p.delta - p.k2 * s;
    out(0, 1) = p.k1;
    out(0, 2) = -p.k2 * x;
    out(1, 0) = p.k2 * s;
    out(1, 1) = -p.k1;
    out(1, 2) = p.k2 * x;
    out(2, 0) = -p.k2 * s;
    out(2, 1) = p.k1;
    out(2, 2) = -p.k2 * x;
  };
  return VectorField("enzyme-full", 3, std::move(eval), std::move(jac),
                     BoxDomain({0.0, 0.0, 0.0}, {kInf, params.s_y, params.s_y}));
}

VectorField linear_field(const DenseMatrix& a) {
  if (!a.is_square()) throw DimensionError("linear_field: matrix not square");
  const std::size_t n = a.rows();
  auto eval = [a, n](const double* x, double, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
      out[i] = s;
    }
  };
  auto jac = [a](const double*, double, DenseMatrix& out) { out = a; };
  return VectorField("linear", n, std::move(eval), std::move(jac),
                     BoxDomain::unbounded(n));
}

VectorField shift_field(const VectorField& f, const DenseMatrix& shift) {
  if (!shift.is_square() || shift.rows() != f.dim()) {
    throw DimensionError("shift_field: shift must be square of the field dimension");
  }
  const std::size_t n = f.dim();
  const VectorField base = f;
  const DenseMatrix s = shift;
  auto eval = [base, s, n](const double* x, double t, double* out) {
    base.eval_into(x, t, out);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += s(i, j) * x[j];
      out[i] -= acc;
    }
  };
  auto jac = [base, s](const double* x, double t, DenseMatrix& out) {
    base.jacobian_into(x, t, out);
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) -= s(i, j);
  };
  return VectorField(base.name() + "-shifted", n, std::move(eval), std::move(jac),
                     base.domain(), base.time_dependent(), base.analytic_jacobian());
}

DenseMatrix finite_difference_jacobian(const VectorField& f, const DenseVector& x,
                                       double t) {
  const std::size_t n = f.dim();
  if (x.size() != n) throw DimensionError("finite_difference_jacobian: dimension mismatch");
  DenseMatrix out(n, n);
  std::vector<double> xp(x.data(), x.data() + n), xm = xp, fp(n), fm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = 6e-6 * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    f.eval_into(xp.data(), t, fp.data());
    f.eval_into(xm.data(), t, fm.data());
    for (std::size_t i = 0; i < n; ++i) out(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return out;
}

double jacobian_agreement(const VectorField& f, int samples, double cap,
                          std::uint64_t seed) {
  const std::size_t n = f.dim();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    DenseVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      double lo = f.domain().lower[i], hi = f.domain().upper[i];
      if (std::isinf(lo)) lo = -cap;
      if (std::isinf(hi)) hi = cap;
      const double margin = 1e-3 * (hi - lo);
      x[i] = std::uniform_real_distribution<double>(lo + margin, hi - margin)(rng);
    }
    const double t =
        f.time_dependent() ? std::uniform_real_distribution<double>(0.0, 10.0)(rng) : 0.0;
    const DenseMatrix ja = f.jacobian(x, t);
    const DenseMatrix jf = finite_difference_jacobian(f, x, t);
    const double scale = std::max(1.0, ja.max_abs());
    worst = std::max(worst, (ja - jf).max_abs() / scale);
  }
  return worst;
}

double enzyme_conservation_max_deviation(const std::vector<DenseVector>& states,
                                         double s_y) {
  double worst = 0.0;
  for (const auto& u : states) {
    if (u.size() != 3) {
      throw DimensionError("enzyme_conservation_max_deviation: states must be 3-D");
    }
    worst = std::max(worst, std::abs(u[1] + u[2] - s_y));
  }
  return worst;
}

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

EnzymeParams enzyme_params_from(const std::map<std::string, double>& params) {
  EnzymeParams p;
  p.z = param_or(params, "z", p.z);
  p.delta = param_or(params, "delta", p.delta);
  p.k1 = param_or(params, "k1", p.k1);
  p.k2 = param_or(params, "k2", p.k2);
  p.s_y = param_or(params, "s_y", p.s_y);
  return p;
}

}  // namespace

VectorField make_model(const std::string& name,
                       const std::map<std::string, double>& params,
                       const DenseMatrix* matrix) {
  if (name == "enzyme") return enzyme_reduced(enzyme_params_from(params));
  if (name == "enzyme-full") return enzyme_full(enzyme_params_from(params));
  if (name == "linear") {
    if (matrix == nullptr) {
      throw InvalidInputError("model 'linear' requires a matrix");
    }
    return linear_field(*matrix);
  }
  throw InvalidInputError("unknown model '" + name + "'");
}

}  // namespace mucert
