#include "blockspec/selection.hpp"

#include <algorithm>
#include <cmath>

#include "blockspec/embedding.hpp"

namespace blockspec {

namespace {

void check_xi(double xi) {
  if (!(xi > 0.375 && xi < 0.5)) throw Error(ErrorCode::XiOutOfRange, "xi must lie in (3/8, 1/2)");
}

}  // namespace

Clustering cluster_at(const Matrix& z, int k, const ClustererConfig& config) {
  return lloyd_cluster(z, k, config.lloyd, derive(config.seed, static_cast<std::uint64_t>(k)));
}

SelectionRow describe(const Clustering& c, int n) {
  SelectionRow row;
  row.k = c.k_parts;
  row.residual = std::sqrt(std::max(c.objective, 0.0));
  row.statistic = std::log(row.residual) / std::log(static_cast<double>(n));
  row.min_part = min_part_size(c);
  row.separation = centroid_separation(c);
  return row;
}

int default_k_max(int total_R, int n) { return std::max(1, std::min(2 * total_R + 2, n)); }

KSelection estimate_k_hat(const Matrix& z, int n, double xi, int k_max,
                          const ClustererConfig& config) {
  check_xi(xi);
  if (k_max < 1) throw Error(ErrorCode::DimensionError, "k_max must be positive");
  const double threshold = std::pow(static_cast<double>(n), xi);
  const int last = std::min<int>(k_max, static_cast<int>(z.rows()));
  KSelection out;
  for (int k = 1; k <= last; ++k) {
    Clustering c = cluster_at(z, k, config);
    out.trace.rows.push_back(describe(c, n));
    if (out.trace.rows.back().residual <= threshold) {
      out.k = k;
      out.trace.chosen = k;
      out.clustering = std::move(c);
      return out;
    }
  }
  out.trace.diagnostic = "no K' <= " + std::to_string(last) + " reached residual <= n^xi";
  throw NoKFoundError(std::move(out.trace));
}

int k_hat_from_trace(const SelectionTrace& trace, int n, double xi) {
  const double threshold = std::pow(static_cast<double>(n), xi);
  for (const SelectionRow& row : trace.rows) {
    if (row.residual <= threshold) return row.k;
  }
  return 0;
}

bool qualifies(const SelectionRow& row, int n, double zeta, double theta) {
  return row.min_part > theta * n && row.separation >= zeta;
}

KSelection estimate_k_check(const Matrix& z, int n, double zeta, double theta,
                            const ClustererConfig& config) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::ThetaOutOfRange, "theta must lie in (0, 1]");
  }
  if (!(zeta > 0.0)) throw Error(ErrorCode::ConfigError, "zeta must be positive");
  const int last = std::min(static_cast<int>(std::floor(1.0 / theta)), static_cast<int>(z.rows()));
  KSelection out;
  for (int k = 1; k <= last; ++k) {
    Clustering c = cluster_at(z, k, config);
    out.trace.rows.push_back(describe(c, n));
    if (qualifies(out.trace.rows.back(), n, zeta, theta)) {
      out.k = k;
      out.clustering = std::move(c);
    }
  }
  out.trace.chosen = out.k;
  if (out.k == 0) out.trace.diagnostic = "no K' <= " + std::to_string(last) + " qualified";
  return out;
}

ExtendedPartition extended_partition(const GraphSample& graph, std::span<const int> R,
                                     KnowledgeMode mode, double xi, int k_max,
                                     const ClustererConfig& config) {
  const Matrix z = embed_sample(graph, R, mode);
  KSelection sel = estimate_k_hat(z, graph.n, xi, k_max, config);
  ExtendedPartition out;
  out.k_hat = sel.k;
  out.tau_hat = assignment_from_clustering(*sel.clustering);
  out.trace = std::move(sel.trace);
  return out;
}

}  // namespace blockspec
