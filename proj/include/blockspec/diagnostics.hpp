#pragma once

#include <string>
#include <vector>

#include "blockspec/model.hpp"
#include "blockspec/rng.hpp"
#include "blockspec/types.hpp"

namespace blockspec {

// One finite-sample bound evaluated on one instance: holds iff lhs <= rhs.
// Lower bounds "a >= b" are stored with lhs = b and rhs = a.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double margin = 0.0;
  int n = 0;
  Seed seed;
};

BoundReport make_report(std::string name, double lhs, double rhs, int n, const Seed& seed = {});

/// P(i,j) = M(tau(i), tau(j)) for all i, j, diagonal included.
Matrix probability_matrix(const Labels& tau, const Matrix& m);

// Thin SVD P = U diag(values) V^T of the noiseless probability matrix.
struct NoiselessSpectrum {
  Vector values;
  Matrix U;
  Matrix V;
};

/// Built from the block structure: with D the block counts and Z the block
/// indicator matrix, P = (Z D^-1/2) (D^1/2 M D^1/2) (Z D^-1/2)^T, so only a
/// K x K SVD is needed. Truncated to the numerical rank.
NoiselessSpectrum noiseless_spectrum(const Labels& tau, const Matrix& m);

/// ||A A^T - P P^T||_F and ||A^T A - P^T P||_F against sqrt(3) n^1.5 sqrt(log n).
std::vector<BoundReport> check_lemma1(const Matrix& a, const Matrix& p);

/// Smallest nonzero noiseless singular value against alpha gamma n, and the
/// largest against n.
std::vector<BoundReport> check_lemma2(const NoiselessSpectrum& noiseless, int n,
                                      const ModelConstants& constants);

/// sigma_1 <= n, sigma_rankM >= alpha gamma n, and
/// sigma_{rankM+1} <= 3^(1/4) n^(3/4) log^(1/4) n.
std::vector<BoundReport> check_corollary3(const Vector& sigma, int n, int rank_m,
                                          const ModelConstants& constants);

/// min over orthogonal Q of ||U_noiseless Q - U_sample||_F through the SVD of
/// U_noiseless^T U_sample. Both inputs need orthonormal columns (1e-8).
double procrustes_residual(const Matrix& u_noiseless, const Matrix& u_sample);

double procrustes_bound(int n, const ModelConstants& constants);

BoundReport check_corollary5(const Matrix& u_noiseless, const Matrix& u_sample, int n,
                             const ModelConstants& constants);

/// ||X_c||_F over columns r+1..R of X against sqrt(R - r) sigma_{r+1}^(1/2).
BoundReport check_center_block(const Matrix& x, const Vector& sigma, int r);

}  // namespace blockspec
