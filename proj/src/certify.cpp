#include "mucert/certify.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace mucert {

namespace {

constexpr const char* kDiffusionNote =
    "rate transfers unchanged to the no-flux reaction-diffusion PDE and to every "
    "diffusive interconnection with symmetric Laplacian coupling and positive "
    "diagonal diffusion";

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi > lo)) {
    throw InvalidInputError("weight candidates: need count >= 1 and 0 < min < max");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(k) / (count - 1));
  }
  return out;
}

ContractionCertificate build_certificate(const VectorField& f, const WeightedNorm& w,
                                         const LipschitzEstimate& evidence,
                                         const std::map<std::string, double>& params) {
  ContractionCertificate cert;
  cert.model = f.name();
  cert.model_params = params;
  cert.norm = w;
  cert.rate_c = evidence.value;
  cert.evidence = evidence;
  cert.diffusion_note = kDiffusionNote;
  return cert;
}

void require_certifiable_jacobian(const VectorField& f, const GridSpec& grid,
                                  std::uint64_t seed) {
  if (f.analytic_jacobian()) return;
  const double dev = jacobian_agreement(f, 200, grid.unbounded_cap, seed);
  if (dev > 1e-7) {
    std::ostringstream os;
    os << "certification refused: finite-difference Jacobian of '" << f.name()
       << "' deviates by " << dev << " (limit 1e-7)";
    throw InvalidInputError(os.str());
  }
}

}  // namespace

WeightSearchResult search_weights(const VectorField& f, double p, const GridSpec& grid,
                                  const WeightCandidates& candidates, std::uint64_t seed,
                                  const std::map<std::string, double>& model_params) {
  require_certifiable_jacobian(f, grid, seed);
  const std::size_t n = f.dim();
  const std::vector<double> coarse = log_spaced(candidates.min, candidates.max,
                                                candidates.count);

  DenseVector q(n, 1.0);
  LipschitzEstimate best = lipschitz_constant(f, WeightedNorm(p, q), grid, seed);
  DenseVector best_q = q;

  const auto scan_axis = [&](std::size_t axis, const std::vector<double>& values) {
    for (double c : values) {
      DenseVector trial = best_q;
      trial[axis] = c;
      const LipschitzEstimate est = lipschitz_constant(f, WeightedNorm(p, trial), grid,
                                                       seed);
      if (est.value < best.value) {
        best = est;
        best_q = trial;
      }
    }
  };

  // Coordinate descent over the coarse grid (the first weight stays 1), then
  // one refinement pass scanning a single coarse spacing around the optimum.
  for (std::size_t axis = 1; axis < n; ++axis) scan_axis(axis, coarse);
  if (candidates.count > 1 && n > 1) {
    const double step = std::pow(candidates.max / candidates.min,
                                 1.0 / (candidates.count - 1));
    for (std::size_t axis = 1; axis < n; ++axis) {
      const double center = best_q[axis];
      scan_axis(axis, log_spaced(center / step, center * step, candidates.count));
    }
  }

  WeightSearchResult res;
  res.best_norm = WeightedNorm(p, best_q);
  res.rate = best.value;
  res.evidence = best;
  if (best.value < 0.0) {
    res.certificate = build_certificate(f, res.best_norm, best, model_params);
  }
  return res;
}

ImpossibilityWitness impossibility_search(const EnzymeParams& params, double p, double q,
                                          double b_cap, std::uint64_t seed) {
  params.validate();
  if (!(p > 1.0)) throw InvalidInputError("impossibility_search: requires p > 1");
  if (!(q > 0.0)) throw InvalidInputError("impossibility_search: weight q must be positive");

  const VectorField f = enzyme_reduced(params);
  const WeightedNorm w(p, DenseVector{1.0, q});

  ImpossibilityWitness wit;
  wit.p = p;
  wit.q = q;

  // Witness points sit on the y = s_y face (a = 0); only b = k1 + k2 x moves.
  const auto point_for = [&](double b) {
    return DenseVector{(b - params.k1) / params.k2, params.s_y};
  };

  if (std::isinf(p)) {
    // Row form of the measure: mu_inf(QJQ^{-1}) = max(-delta - a + b/q, -b + aq),
    // positive once b > delta q at a = 0.
    double b = params.k1;
    while (!(-params.delta + b / q > 0.0)) {
      b *= 1.25;
      if (b > b_cap) {
        throw InvalidInputError(
            "impossibility_search: b exceeded b_cap before the row sum turned positive; "
            "raise b_cap");
      }
    }
    wit.b = b;
    wit.direction_lambda = 0.0;
    wit.witness_point = point_for(b);
    wit.lower_bound = std::max(-params.delta + b / q, -b);
    wit.mu_at_witness = mu_weighted(f.jacobian(wit.witness_point), w, seed).value;
  } else {
    // Direction (1, lambda) with lambda^{p-1} q = 1/p, which maximizes the
    // growth coefficient and keeps 1 - lambda^{p-1} q = 1 - 1/p positive.
    const double lambda = std::pow(1.0 / (p * q), 1.0 / (p - 1.0));
    const auto fprime0 = [&](double b) {
      // p (b lambda / q - a)(1 - lambda^{p-1} q) - p delta at a = 0.
      return p * (b * lambda / q) * (1.0 - 1.0 / p) - p * params.delta;
    };
    double b = params.k1;
    while (!(fprime0(b) > 0.0)) {
      b *= 1.25;
      if (b > b_cap) {
        throw InvalidInputError(
            "impossibility_search: b exceeded b_cap before the directional derivative "
            "turned positive; raise b_cap");
      }
    }
    wit.b = b;
    wit.direction_lambda = lambda;
    wit.witness_point = point_for(b);
    wit.lower_bound = fprime0(b) / (p * (1.0 + std::pow(lambda, p)));
    wit.mu_at_witness = mu_weighted(f.jacobian(wit.witness_point), w, seed).value;
  }

  if (wit.mu_at_witness < -1e-9) {
    throw Error("impossibility_search: estimator cross-check failed at the witness");
  }
  return wit;
}

ContractionCertificate issue_certificate(const VectorField& f, const WeightedNorm& w,
                                         const GridSpec& grid, std::uint64_t seed,
                                         const std::map<std::string, double>& model_params) {
  require_certifiable_jacobian(f, grid, seed);
  const LipschitzEstimate est = lipschitz_constant(f, w, grid, seed);
  if (!(est.value < 0.0)) {
    std::ostringstream os;
    os << "certification refused: sup mu = " << est.value << " >= 0 at grid point (";
    for (std::size_t i = 0; i < est.argmax_point.size(); ++i) {
      os << (i ? ", " : "") << est.argmax_point[i];
    }
    os << ")";
    throw CertificationRefused(os.str(), est.argmax_point.values(), est.value);
  }
  return build_certificate(f, w, est, model_params);
}

}  // namespace mucert
