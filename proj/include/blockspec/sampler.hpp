#pragma once

#include <vector>

#include "blockspec/model.hpp"
#include "blockspec/rng.hpp"
#include "blockspec/types.hpp"

namespace blockspec {

// A realized graph: labels tau (1..K) and one n x n 0/1 matrix per modality.
// Diagonals are zero; undirected samples are symmetric.
struct GraphSample {
  int n = 0;
  Labels tau;
  std::vector<Adjacency> adjacency;
  bool directed = false;
};

Labels sample_tau(int n, const std::vector<double>& rho, const Seed& seed);

/// One Bernoulli(M[tau(i), tau(j)]) draw per ordered pair (directed) or per
/// unordered pair mirrored across the diagonal (undirected); every modality
/// uses its own derived stream.
GraphSample sample_adjacency(const Labels& tau, const SbmParams& params, const Seed& seed);

/// tau and adjacency from independent child streams of `seed`.
GraphSample sample_graph(int n, const SbmParams& params, const Seed& seed);

/// Appends one vertex: its label and incident edges come from `seed` alone,
/// everything already present is kept bit-exactly.
GraphSample extend_sample(const GraphSample& existing, const SbmParams& params, const Seed& seed);

/// Seed consumed by vertex `index` (0-based) when growing from `base`.
Seed vertex_seed(const Seed& base, int index) noexcept;

/// Equivalent to repeated extend_sample with vertex_seed(base, v) for
/// v = existing.n .. target_n - 1, without the per-step copies.
GraphSample grow_sample(const GraphSample& existing, const SbmParams& params, int target_n,
                        const Seed& base);

/// Leading n vertices of a sample.
GraphSample restrict_sample(const GraphSample& sample, int n);

GraphSample empty_sample(const SbmParams& params);

}  // namespace blockspec
