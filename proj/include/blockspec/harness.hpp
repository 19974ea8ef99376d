#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "blockspec/diagnostics.hpp"
#include "blockspec/model.hpp"
#include "blockspec/rng.hpp"
#include "blockspec/types.hpp"

namespace blockspec {

inline constexpr const char* kVersion = "0.1.0";

enum class Study { Misassignment, KStat, Bounds };

Study parse_study(std::string_view text);
std::string_view to_string(Study study) noexcept;

struct ExperimentConfig {
  Study study = Study::Misassignment;
  SbmParams params;
  std::vector<int> n_list;
  // Embedding dimension, applied to every modality.
  std::vector<int> R_list;
  // Part counts whose statistic is reported (kstat study).
  std::vector<int> k_list;
  int replicates = 1;
  std::uint64_t seed = 0;
  KnowledgeMode mode = KnowledgeMode::RowsDistinct;
  double xi = 0.40;
  double omega = 0.8;
  // Check-estimator settings; the estimator runs only when both are set.
  std::optional<double> zeta;
  std::optional<double> theta;
  int restarts = 50;
  std::optional<int> k_max;
  // Grow one sample per replicate through n_list instead of redrawing per n.
  bool growth = false;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
};

/// Throws ConfigError for empty lists, nonpositive counts, or parameters
/// that fail validate_params.
void validate_config(const ExperimentConfig& config);

ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Model constants with any configured overrides applied.
ModelConstants effective_constants(const ExperimentConfig& config);

/// Seed of replicate `replicate` at vertex count n: stream = n << 32 | replicate.
Seed replicate_seed(const ExperimentConfig& config, int n, int replicate);

// One row per (cell, replicate); kstat rows are per K' as well. Optional
// fields are empty when the study does not produce them.
struct ExperimentRecord {
  Study study = Study::Misassignment;
  int n = 0;
  int R = 0;
  int k_prime = 0;
  int replicate = 0;
  std::uint64_t stream = 0;
  std::optional<double> misassignment;
  std::optional<int> k_hat;
  std::optional<int> k_check;
  std::optional<int> r_hat;
  std::optional<double> statistic;
  std::optional<double> residual;
  std::optional<int> min_part;
  std::optional<double> separation;
  std::optional<bool> qualifies;
  std::string error;
};

struct BoundRecord {
  int n = 0;
  int replicate = 0;
  std::uint64_t stream = 0;
  int modality = 1;
  BoundReport report;
  std::string error;
};

struct Timing {
  int n = 0;
  int replicate = 0;
  double seconds = 0.0;
};

struct StudyResult {
  Study study = Study::Misassignment;
  std::vector<ExperimentRecord> records;
  std::vector<BoundRecord> bounds;
  std::vector<Timing> timings;
};

StudyResult run_misassignment_study(const ExperimentConfig& config, int workers = 1);
StudyResult run_kstat_study(const ExperimentConfig& config, int workers = 1);
StudyResult run_bounds_study(const ExperimentConfig& config, int workers = 1);
StudyResult run_study(const ExperimentConfig& config, int workers = 1);

// Comma-separated tables with a header row.
std::string records_csv(const StudyResult& result);
std::string aggregates_csv(const StudyResult& result, const ExperimentConfig& config);
std::string timings_csv(const StudyResult& result);

/// records.csv, aggregates.csv, timings.csv and manifest.json under out_dir.
void write_study_outputs(const std::filesystem::path& out_dir, const ExperimentConfig& config,
                         const StudyResult& result, int workers);

}  // namespace blockspec
