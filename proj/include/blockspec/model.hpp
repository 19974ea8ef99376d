#pragma once

#include <limits>
#include <span>
#include <vector>

#include "blockspec/types.hpp"

namespace blockspec {

inline constexpr double kRhoSumTolerance = 1e-12;
// Two rows (or columns) closer than this in Euclidean norm count as equal-valued.
inline constexpr double kEqualityTolerance = 1e-10;
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kConstantShrink = 0.99;

// Stochastic block model parameters: K blocks drawn with probabilities rho,
// one K x K communication matrix per modality, shared directedness.
struct SbmParams {
  int K = 0;
  std::vector<double> rho;
  std::vector<Matrix> modalities;
  bool directed = false;
};

// M = mu * nu^T with both factors K x rank and full column rank.
struct LatentFactors {
  Matrix mu;
  Matrix nu;
  int rank = 0;
};

struct ModelConstants {
  double alpha = 0.0;
  // +infinity when no pair of nonequal-valued latent rows exists (K = 1).
  double beta = std::numeric_limits<double>::infinity();
  double gamma = 0.0;
};

/// Returns `raw` unchanged when every parameter invariant holds; throws
/// RhoInvalid, EntryOutOfRange, SymmetryViolation or NotIdentifiable otherwise.
SbmParams validate_params(const SbmParams& raw);

/// Number of singular values above rel_tol times the largest one. Zero for
/// the zero matrix.
int numerical_rank(const Matrix& m, double rel_tol = kRankTolerance);

/// mu = U sqrt(S), nu = V sqrt(S) from the SVD of m, truncated to its
/// numerical rank.
LatentFactors factorize(const Matrix& m);

std::vector<LatentFactors> factorize_all(const SbmParams& params);

/// alpha = 0.99 min rho; beta = 0.99 min distance between nonequal latent
/// rows; gamma = 0.99 min eigenvalue of every mu^T mu and nu^T nu.
ModelConstants compute_constants(const SbmParams& params, std::span<const LatentFactors> factors);

ModelConstants compute_constants(const SbmParams& params);

// True when rows p and q of m differ by more than kEqualityTolerance.
bool rows_differ(const Matrix& m, int p, int q);

}  // namespace blockspec
