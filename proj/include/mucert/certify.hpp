#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "mucert/linalg.hpp"
#include "mucert/lognorm.hpp"
#include "mucert/models.hpp"

namespace mucert {

/// Evidence-grade contraction certificate: the measured rate is a grid
/// supremum of the weighted measure of the Jacobian, so it certifies up to
/// the sampling resolution recorded in `evidence`.
struct ContractionCertificate {
  std::string model;
  std::map<std::string, double> model_params;
  WeightedNorm norm = WeightedNorm::unweighted(2.0, 1);
  double rate_c = 0.0;
  LipschitzEstimate evidence;
  /// The same rate bounds the Neumann reaction-diffusion PDE and every
  /// diffusive interconnection built from this field, for any positive
  /// diagonal diffusion and any symmetric graph Laplacian.
  std::string diffusion_note;
};

/// Log-spaced diagonal weight candidates per free axis (the first weight is
/// pinned to 1; measures are invariant under scaling Q).
struct WeightCandidates {
  int count = 41;
  double min = 1e-3;
  double max = 1e3;
};

struct WeightSearchResult {
  WeightedNorm best_norm = WeightedNorm::unweighted(2.0, 1);
  double rate = 0.0;
  LipschitzEstimate evidence;
  std::optional<ContractionCertificate> certificate;
};

/// Minimize the logarithmic Lipschitz constant over diagonal weights by
/// coordinate descent on the candidate grid plus one log-local refinement
/// pass; issues a certificate iff the minimized rate is negative.
WeightSearchResult search_weights(const VectorField& f, double p, const GridSpec& grid,
                                  const WeightCandidates& candidates = {},
                                  std::uint64_t seed = kDefaultSeed,
                                  const std::map<std::string, double>& model_params = {});

/// A point, direction and sign-definite directional derivative showing that
/// mu_{p,Q} of the binding-model Jacobian cannot be negative everywhere for
/// p > 1: the certificate-impossibility side of the weighted-L1 result.
struct ImpossibilityWitness {
  double p = 2.0;
  double q = 1.0;
  DenseVector witness_point;   // (x, y) with y = s_y, so a = 0
  double direction_lambda = 0.0;  // witness direction (1, lambda); 0 for p = inf
  double lower_bound = 0.0;    // directional lower bound on mu at the witness
  double mu_at_witness = 0.0;  // estimator cross-check value
  double b = 0.0;              // b = k1 + k2 x at the witness
};

/// Scans x (through b = k1 + k2 x) upward until the directional derivative of
/// the weighted norm along (1, lambda) is positive at y = s_y; p = inf uses
/// the closed-form measure row instead.  Errors if b exceeds b_cap.
ImpossibilityWitness impossibility_search(const EnzymeParams& params, double p, double q,
                                          double b_cap = 1e6,
                                          std::uint64_t seed = kDefaultSeed);

/// Certificate for a field whose grid supremum of mu_{p,Q}(J_F) is negative;
/// throws CertificationRefused (carrying the argmax) otherwise.  Fields with
/// finite-difference Jacobians are accepted only when they agree with central
/// differences at 1e-7.
ContractionCertificate issue_certificate(const VectorField& f, const WeightedNorm& w,
                                         const GridSpec& grid = {},
                                         std::uint64_t seed = kDefaultSeed,
                                         const std::map<std::string, double>& model_params = {});

}  // namespace mucert
