#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockspec/clustering.hpp"
#include "blockspec/error.hpp"
#include "blockspec/sampler.hpp"

namespace blockspec {

inline constexpr double kDefaultXi = 0.40;

// Clusterer used at each candidate part count K'. The clustering for K' is
// drawn from derive(seed, K'), so it is the same whichever estimator asks.
struct ClustererConfig {
  LloydOptions lloyd;
  Seed seed;
};

struct SelectionRow {
  int k = 0;
  double residual = 0.0;   // ||C - Z||_F
  double statistic = 0.0;  // log_n of residual
  int min_part = 0;
  double separation = 0.0;
};

struct SelectionTrace {
  std::vector<SelectionRow> rows;
  int chosen = 0;
  std::string diagnostic;
};

class NoKFoundError : public Error {
 public:
  explicit NoKFoundError(SelectionTrace trace)
      : Error(ErrorCode::NoKFound, "no part count up to " +
                                       std::to_string(trace.rows.empty() ? 0 : trace.rows.back().k) +
                                       " met the residual threshold"),
        trace_(std::move(trace)) {}

  const SelectionTrace& trace() const noexcept { return trace_; }

 private:
  SelectionTrace trace_;
};

struct KSelection {
  int k = 0;
  SelectionTrace trace;
  // Clustering at the chosen K' (absent when no K' qualified).
  std::optional<Clustering> clustering;
};

Clustering cluster_at(const Matrix& z, int k, const ClustererConfig& config);

SelectionRow describe(const Clustering& c, int n);

/// Least K' in 1..k_max with ||C_K' - Z||_F <= n^xi. xi must lie in
/// (3/8, 1/2); throws NoKFoundError carrying the full trace on failure.
KSelection estimate_k_hat(const Matrix& z, int n, double xi, int k_max, const ClustererConfig& config);

/// Least K' whose row in `trace` satisfies residual <= n^xi, or 0.
int k_hat_from_trace(const SelectionTrace& trace, int n, double xi);

/// Greatest K' in 1..floor(1/theta) whose clustering has min part size
/// > theta n and centroid separation >= zeta; k = 0 with a diagnostic when
/// none qualifies.
KSelection estimate_k_check(const Matrix& z, int n, double zeta, double theta,
                            const ClustererConfig& config);

bool qualifies(const SelectionRow& row, int n, double zeta, double theta);

/// min(2 R_total + 2, n).
int default_k_max(int total_R, int n);

struct ExtendedPartition {
  Labels tau_hat;
  int k_hat = 0;
  SelectionTrace trace;
};

/// Embed every modality with its own R, select K-hat, and return the
/// canonical assignment of the clustering at K-hat.
ExtendedPartition extended_partition(const GraphSample& graph, std::span<const int> R,
                                     KnowledgeMode mode, double xi, int k_max,
                                     const ClustererConfig& config);

}  // namespace blockspec
