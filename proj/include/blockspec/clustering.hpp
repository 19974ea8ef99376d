#pragma once

#include <vector>

#include "blockspec/rng.hpp"
#include "blockspec/types.hpp"

namespace blockspec {

inline constexpr int kExactGuard = 14;

// Least-squares partition of the rows of Z into at most k_parts parts.
// assignment holds labels 1..k_parts (some parts may be empty); centroids is
// k_parts x d with row l-1 the centroid of label l; objective = ||C - Z||_F^2
// where C stacks the centroid of each row's label.
struct Clustering {
  int k_parts = 0;
  Labels assignment;
  Matrix centroids;
  double objective = 0.0;

  Matrix fitted() const;
  std::vector<int> part_sizes() const;
};

struct LloydOptions {
  int restarts = 50;
  int max_iterations = 300;
  double rel_tol = 1e-9;
};

struct LloydRun {
  Clustering result;
  std::vector<double> objective_history;
};

/// Global minimum over every partition into at most k parts, found by
/// branch-and-bound over restricted growth strings. Throws TooLargeForExact
/// when n exceeds `guard`.
Clustering exact_min_sse(const Matrix& z, int k, int guard = kExactGuard);

/// k-means++ seeding: first centre uniform, later ones drawn proportional to
/// squared distance from the nearest chosen centre.
Matrix seed_centroids(const Matrix& z, int k, Engine& engine);

/// Lloyd iterations from the given centroids. Ties go to the lowest centroid
/// index; an empty part is reseeded at the row farthest from its centroid.
LloydRun lloyd_refine(const Matrix& z, Matrix centroids, const LloydOptions& options);

/// Best of options.restarts seeded runs; restart r draws from derive(seed, r)
/// and ties on objective keep the earliest restart.
Clustering lloyd_cluster(const Matrix& z, int k, const LloydOptions& options, const Seed& seed);

/// Labels renumbered so parts are ordered by their lowest-index member;
/// empty parts vanish.
Labels assignment_from_clustering(const Clustering& c);

/// Sum of squared distances from each row to the centroid of its label.
double clustering_objective(const Matrix& z, const Labels& labels, const Matrix& centroids);

/// Smallest pairwise distance between centroids (+infinity for one part).
double centroid_separation(const Clustering& c);

int min_part_size(const Clustering& c);

}  // namespace blockspec
