#pragma once

#include <span>
#include <vector>

#include "blockspec/sampler.hpp"
#include "blockspec/types.hpp"

namespace blockspec {

inline constexpr double kDefaultOmega = 0.8;

// Scaled top-R singular vectors of one adjacency matrix: X = U sqrt(S),
// Y = V sqrt(S). sigma keeps all n singular values, nonincreasing.
struct ModalityEmbedding {
  int R = 0;
  Vector sigma;
  Matrix X;
  Matrix Y;

  // Leading r columns of X and Y; equals svd_embed with R = r on the same input.
  ModalityEmbedding truncated(int r) const;
};

/// Throws DimensionError unless 1 <= R <= n.
ModalityEmbedding svd_embed(const Adjacency& a, int R);
ModalityEmbedding svd_embed(const Matrix& a, int R);

/// [X1|...|XS], [Y1|...|YS] or [X1|...|XS|Y1|...|YS] depending on mode.
Matrix assemble_features(std::span<const ModalityEmbedding> embeddings, KnowledgeMode mode);

/// Embeds each modality of the sample with its own R and assembles features.
Matrix embed_sample(const GraphSample& sample, std::span<const int> R, KnowledgeMode mode);

/// Number of singular values strictly above n^omega; omega must lie in (3/4, 1).
int estimate_rank(const Vector& sigma, int n, double omega = kDefaultOmega);

Matrix to_dense(const Adjacency& a);

}  // namespace blockspec
