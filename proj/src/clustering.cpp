#include "blockspec/clustering.hpp"

#include <algorithm>
#include <limits>

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

void check_k(const Matrix& z, int k) {
  if (z.rows() == 0) throw Error(ErrorCode::EmptyInput, "no rows to cluster");
  if (k < 1 || k > z.rows()) {
    throw Error(ErrorCode::DimensionError, "part count must lie in [1, n]");
  }
}

// Branch-and-bound state for the exact search. Adding row x to a part with
// count c and mean m raises that part's SSE by c/(c+1) * ||x - m||^2, so a
// partial SSE never decreases and can be pruned against the incumbent.
class ExactSearch {
 public:
  ExactSearch(const Matrix& z, int k)
      : points_(z.transpose()), k_(k), n_(static_cast<int>(z.rows())),
        d_(static_cast<int>(z.cols())), labels_(n_, 0), best_labels_(n_, 0), counts_(k, 0),
        means_(static_cast<std::size_t>(k) * d_, 0.0),
        saved_(static_cast<std::size_t>(n_) * d_, 0.0) {}

  std::vector<int> run() {
    descend(0, 0, 0.0);
    return best_labels_;
  }

 private:
  void descend(int row, int used, double partial) {
    if (partial >= best_) return;
    if (row == n_) {
      best_ = partial;
      best_labels_ = labels_;
      return;
    }
    const double* x = points_.col(row).data();
    double* saved = saved_.data() + static_cast<std::size_t>(row) * d_;
    const int limit = std::min(used + 1, k_);
    for (int b = 0; b < limit; ++b) {
      const int c = counts_[b];
      double* mean = means_.data() + static_cast<std::size_t>(b) * d_;
      double gap = 0.0;
      for (int t = 0; t < d_; ++t) {
        saved[t] = mean[t];
        const double diff = x[t] - mean[t];
        gap += diff * diff;
        mean[t] += diff / (c + 1);
      }
      const double delta = c == 0 ? 0.0 : static_cast<double>(c) / (c + 1) * gap;
      counts_[b] = c + 1;
      labels_[row] = b;
      descend(row + 1, std::max(used, b + 1), partial + delta);
      counts_[b] = c;
      std::copy(saved, saved + d_, mean);
    }
  }

  Matrix points_;
  int k_;
  int n_;
  int d_;
  std::vector<int> labels_;
  std::vector<int> best_labels_;
  std::vector<int> counts_;
  std::vector<double> means_;
  std::vector<double> saved_;
  double best_ = std::numeric_limits<double>::infinity();
};

// Column-per-point copy of z so each point is contiguous.
Matrix points_of(const Matrix& z) { return z.transpose(); }

int nearest(const Matrix& points, Eigen::Index i, const Matrix& centres_t, double* best_dist) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < centres_t.cols(); ++j) {
    const double d = (points.col(i) - centres_t.col(j)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  if (best_dist != nullptr) *best_dist = best_d;
  return best;
}

}  // namespace

Matrix Clustering::fitted() const {
  Matrix c(static_cast<Eigen::Index>(assignment.size()), centroids.cols());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    c.row(static_cast<Eigen::Index>(i)) = centroids.row(assignment[i] - 1);
  }
  return c;
}

std::vector<int> Clustering::part_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k_parts), 0);
  for (int label : assignment) ++sizes[label - 1];
  return sizes;
}

double clustering_objective(const Matrix& z, const Labels& labels, const Matrix& centroids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    total += (z.row(i) - centroids.row(labels[i] - 1)).squaredNorm();
  }
  return total;
}

Clustering exact_min_sse(const Matrix& z, int k, int guard) {
  check_k(z, k);
  if (z.rows() > guard) {
    throw Error(ErrorCode::TooLargeForExact,
                "exact search limited to " + std::to_string(guard) + " rows");
  }
  const std::vector<int> parts = ExactSearch(z, k).run();
  Clustering c;
  c.k_parts = k;
  c.assignment.resize(parts.size());
  Matrix sums = Matrix::Zero(k, z.cols());
  std::vector<int> counts(k, 0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    c.assignment[i] = parts[i] + 1;
    sums.row(parts[i]) += z.row(static_cast<Eigen::Index>(i));
    ++counts[parts[i]];
  }
  c.centroids = Matrix::Zero(k, z.cols());
  for (int b = 0; b < k; ++b) {
    // Unused parts duplicate part 1, keeping at most k distinct rows in C.
    c.centroids.row(b) = counts[b] > 0 ? Eigen::RowVectorXd(sums.row(b) / counts[b])
                                       : Eigen::RowVectorXd(sums.row(0) / counts[0]);
  }
  c.objective = clustering_objective(z, c.assignment, c.centroids);
  return c;
}

Matrix seed_centroids(const Matrix& z, int k, Engine& engine) {
  check_k(z, k);
  const Matrix points = points_of(z);
  const auto n = points.cols();
  Matrix centres_t(points.rows(), k);
  centres_t.col(0) = points.col(static_cast<Eigen::Index>(uniform_index(engine, n)));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = (points.col(i) - centres_t.col(0)).squaredNorm();
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (double d : d2) total += d;
    const Eigen::Index pick = total > 0.0
                                  ? static_cast<Eigen::Index>(weighted_index(engine, d2))
                                  : static_cast<Eigen::Index>(uniform_index(engine, n));
    centres_t.col(j) = points.col(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.col(i) - centres_t.col(j)).squaredNorm());
    }
  }
  return centres_t.transpose();
}

LloydRun lloyd_refine(const Matrix& z, Matrix centroids, const LloydOptions& options) {
  const Matrix points = points_of(z);
  const auto n = points.cols();
  const auto d = points.rows();
  const auto k = centroids.rows();
  Matrix centres_t = centroids.transpose();
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<int> counts(static_cast<std::size_t>(k));
  LloydRun run;

  for (int iter = 0; iter < std::max(options.max_iterations, 1); ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = nearest(points, i, centres_t, &dist[i]);
      changed = changed || l != labels[i];
      labels[i] = l;
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (int l : labels) ++counts[l];
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[j] > 0) continue;
      const auto far = std::max_element(dist.begin(), dist.end()) - dist.begin();
      // Fewer distinct rows than parts: nothing left to split off.
      if (!(dist[far] > 0.0)) break;
      --counts[labels[far]];
      labels[far] = static_cast<int>(j);
      counts[j] = 1;
      dist[far] = 0.0;
      centres_t.col(j) = points.col(far);
      changed = true;
    }
    Matrix sums = Matrix::Zero(d, k);
    for (Eigen::Index i = 0; i < n; ++i) sums.col(labels[i]) += points.col(i);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[j] > 0) centres_t.col(j) = sums.col(j) / counts[j];
    }
    double objective = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      objective += (points.col(i) - centres_t.col(labels[i])).squaredNorm();
    }
    const double previous =
        run.objective_history.empty() ? objective : run.objective_history.back();
    run.objective_history.push_back(objective);
    if (!changed) break;
    if (run.objective_history.size() > 1 && previous - objective <= options.rel_tol * previous) {
      break;
    }
  }

  Clustering& c = run.result;
  c.k_parts = static_cast<int>(k);
  c.assignment.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) c.assignment[i] = labels[i] + 1;
  c.centroids = centres_t.transpose();
  c.objective = clustering_objective(z, c.assignment, c.centroids);
  return run;
}

Clustering lloyd_cluster(const Matrix& z, int k, const LloydOptions& options, const Seed& seed) {
  check_k(z, k);
  Clustering best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(options.restarts, 1); ++r) {
    Engine engine = make_engine(derive(seed, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd_refine(z, seed_centroids(z, k, engine), options);
    if (run.result.objective < best.objective) best = std::move(run.result);
  }
  return best;
}

Labels assignment_from_clustering(const Clustering& c) {
  std::vector<int> renamed(static_cast<std::size_t>(c.k_parts) + 1, 0);
  int next = 0;
  Labels out(c.assignment.size());
  for (std::size_t i = 0; i < c.assignment.size(); ++i) {
    int& slot = renamed[c.assignment[i]];
    if (slot == 0) slot = ++next;
    out[i] = slot;
  }
  return out;
}

double centroid_separation(const Clustering& c) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 0; p < c.centroids.rows(); ++p) {
    for (Eigen::Index q = p + 1; q < c.centroids.rows(); ++q) {
      best = std::min(best, (c.centroids.row(p) - c.centroids.row(q)).norm());
    }
  }
  return best;
}

int min_part_size(const Clustering& c) {
  const auto sizes = c.part_sizes();
  return sizes.empty() ? 0 : *std::min_element(sizes.begin(), sizes.end());
}

}  // namespace blockspec
