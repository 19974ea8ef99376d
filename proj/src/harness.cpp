#include "blockspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "blockspec/clustering.hpp"
#include "blockspec/embedding.hpp"
#include "blockspec/error.hpp"
#include "blockspec/evaluation.hpp"
#include "blockspec/io.hpp"
#include "blockspec/linalg.hpp"
#include "blockspec/sampler.hpp"
#include "blockspec/selection.hpp"

namespace blockspec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kClusterTag = 0x636c757300000000ULL;
constexpr std::uint64_t kGrowthStream = 0xffffffffULL << 32;

struct TaskOutput {
  std::vector<ExperimentRecord> records;
  std::vector<BoundRecord> bounds;
  double seconds = 0.0;
};

// Runs task(i) for i in [0, count) on `workers` threads. Output slots are
// indexed by task, so assembly order never depends on scheduling.
std::vector<TaskOutput> run_tasks(std::size_t count, int workers,
                                  const std::function<TaskOutput(std::size_t)>& task) {
  std::vector<TaskOutput> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const auto start = std::chrono::steady_clock::now();
      out[i] = task(i);
      out[i].seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

struct ReplicateGraph {
  GraphSample graph;
  Seed seed;
};

ReplicateGraph graph_for(const ExperimentConfig& config, int n, int replicate) {
  if (config.growth) {
    const Seed base{config.seed, kGrowthStream | static_cast<std::uint64_t>(replicate)};
    return {grow_sample(empty_sample(config.params), config.params, n, base), base};
  }
  const Seed seed = replicate_seed(config, n, replicate);
  return {sample_graph(n, config.params, seed), seed};
}

std::vector<ModalityEmbedding> embed_all(const GraphSample& g, int R) {
  std::vector<ModalityEmbedding> parts;
  parts.reserve(g.adjacency.size());
  for (const Adjacency& a : g.adjacency) parts.push_back(svd_embed(a, std::min(R, g.n)));
  return parts;
}

Matrix features_at(const std::vector<ModalityEmbedding>& parts, int R, KnowledgeMode mode) {
  std::vector<ModalityEmbedding> cut;
  cut.reserve(parts.size());
  for (const auto& p : parts) cut.push_back(p.truncated(R));
  return assemble_features(cut, mode);
}

std::string error_name(const Error& e) { return std::string(to_string(e.code())); }

ExperimentRecord base_record(const ExperimentConfig& config, int n, int R, int replicate,
                             const Seed& seed) {
  ExperimentRecord r;
  r.study = config.study;
  r.n = n;
  r.R = R;
  r.replicate = replicate;
  r.stream = seed.stream;
  return r;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

std::pair<std::size_t, int> split_task(std::size_t task, int replicates) {
  return {task / static_cast<std::size_t>(replicates), static_cast<int>(task % replicates)};
}

TaskOutput misassignment_task(const ExperimentConfig& config, int n, int replicate) {
  TaskOutput out;
  ReplicateGraph rg;
  std::vector<ModalityEmbedding> parts;
  std::optional<int> r_hat;
  std::string failure;
  try {
    rg = graph_for(config, n, replicate);
    parts = embed_all(rg.graph, max_of(config.R_list));
    r_hat = estimate_rank(parts.front().sigma, n, config.omega);
  } catch (const Error& e) {
    failure = error_name(e);
  }
  for (int R : config.R_list) {
    ExperimentRecord rec = base_record(config, n, R, replicate, rg.seed);
    rec.k_prime = config.params.K;
    rec.r_hat = r_hat;
    rec.error = failure;
    if (failure.empty()) {
      try {
        if (R > n) throw Error(ErrorCode::DimensionError, "R exceeds n");
        const Matrix z = features_at(parts, R, config.mode);
        LloydOptions opts;
        opts.restarts = config.restarts;
        const Clustering c =
            lloyd_cluster(z, config.params.K, opts, derive(rg.seed, kClusterTag + R));
        rec.misassignment = misassignment_fraction(rg.graph.tau, assignment_from_clustering(c));
      } catch (const Error& e) {
        rec.error = error_name(e);
      }
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

TaskOutput kstat_task(const ExperimentConfig& config, int n, int replicate) {
  TaskOutput out;
  ReplicateGraph rg;
  std::vector<ModalityEmbedding> parts;
  std::optional<int> r_hat;
  std::string failure;
  try {
    rg = graph_for(config, n, replicate);
    parts = embed_all(rg.graph, max_of(config.R_list));
    r_hat = estimate_rank(parts.front().sigma, n, config.omega);
  } catch (const Error& e) {
    failure = error_name(e);
  }
  const int modalities = static_cast<int>(config.params.modalities.size());
  for (int R : config.R_list) {
    std::vector<ExperimentRecord> cell;
    for (int k : config.k_list) {
      ExperimentRecord rec = base_record(config, n, R, replicate, rg.seed);
      rec.k_prime = k;
      rec.r_hat = r_hat;
      rec.error = failure;
      cell.push_back(std::move(rec));
    }
    if (failure.empty()) {
      try {
        if (R > n) throw Error(ErrorCode::DimensionError, "R exceeds n");
        const Matrix z = features_at(parts, R, config.mode);
        LloydOptions opts;
        opts.restarts = config.restarts;
        const ClustererConfig cc{opts, derive(rg.seed, kClusterTag + R)};
        std::map<int, SelectionRow> rows;
        auto row_at = [&](int k) -> const SelectionRow& {
          auto it = rows.find(k);
          if (it == rows.end()) it = rows.emplace(k, describe(cluster_at(z, k, cc), n)).first;
          return it->second;
        };

        const int k_max = std::min(config.k_max.value_or(default_k_max(R * modalities, n)), n);
        const double threshold = std::pow(static_cast<double>(n), config.xi);
        std::optional<int> k_hat;
        for (int k = 1; k <= k_max && !k_hat; ++k) {
          if (row_at(k).residual <= threshold) k_hat = k;
        }
        std::optional<int> k_check;
        if (config.theta && config.zeta) {
          const int last = std::min(static_cast<int>(std::floor(1.0 / *config.theta)), n);
          k_check = 0;
          for (int k = 1; k <= last; ++k) {
            if (qualifies(row_at(k), n, *config.zeta, *config.theta)) k_check = k;
          }
        }
        for (ExperimentRecord& rec : cell) {
          rec.k_hat = k_hat;
          rec.k_check = k_check;
          if (!k_hat) rec.error = std::string(to_string(ErrorCode::NoKFound));
          if (rec.k_prime > n) {
            rec.error = std::string(to_string(ErrorCode::DimensionError));
            continue;
          }
          const SelectionRow& row = row_at(rec.k_prime);
          rec.statistic = row.statistic;
          rec.residual = row.residual;
          rec.min_part = row.min_part;
          rec.separation = row.separation;
          if (config.theta && config.zeta) rec.qualifies = qualifies(row, n, *config.zeta, *config.theta);
        }
      } catch (const Error& e) {
        for (ExperimentRecord& rec : cell) rec.error = error_name(e);
      }
    }
    for (ExperimentRecord& rec : cell) out.records.push_back(std::move(rec));
  }
  return out;
}

TaskOutput bounds_task(const ExperimentConfig& config, const ModelConstants& constants, int n,
                       int replicate) {
  TaskOutput out;
  ReplicateGraph rg;
  try {
    rg = graph_for(config, n, replicate);
  } catch (const Error& e) {
    BoundRecord b{n, replicate, 0, 1, {}, error_name(e)};
    out.bounds.push_back(std::move(b));
    return out;
  }
  for (std::size_t s = 0; s < config.params.modalities.size(); ++s) {
    const Matrix& m = config.params.modalities[s];
    auto push = [&](const BoundReport& r) {
      BoundReport tagged = r;
      tagged.seed = rg.seed;
      out.bounds.push_back(
          BoundRecord{n, replicate, rg.seed.stream, static_cast<int>(s) + 1, tagged, {}});
    };
    try {
      const Matrix a = to_dense(rg.graph.adjacency[s]);
      const int rank = numerical_rank(m);
      const TopSingular top = top_singular(a, std::min(rank, n));
      for (const auto& r : check_corollary3(top.sigma, n, rank, constants)) push(r);
      const Matrix p = probability_matrix(rg.graph.tau, m);
      for (const auto& r : check_lemma1(a, p)) push(r);
      const NoiselessSpectrum noiseless = noiseless_spectrum(rg.graph.tau, m);
      for (const auto& r : check_lemma2(noiseless, n, constants)) push(r);
      if (noiseless.U.cols() != top.left.cols()) {
        throw Error(ErrorCode::DimensionError, "noiseless rank below rank M (empty block)");
      }
      BoundReport left = check_corollary5(noiseless.U, top.left, n, constants);
      left.name = "cor5_procrustes_left";
      push(left);
      BoundReport right = check_corollary5(noiseless.V, top.right, n, constants);
      right.name = "cor5_procrustes_right";
      push(right);
    } catch (const Error& e) {
      out.bounds.push_back(
          BoundRecord{n, replicate, rg.seed.stream, static_cast<int>(s) + 1, {}, error_name(e)});
    }
  }
  return out;
}

StudyResult collect(Study study, const ExperimentConfig& config, std::vector<TaskOutput> outputs) {
  StudyResult result;
  result.study = study;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto [n_index, replicate] = split_task(i, config.replicates);
    for (auto& r : outputs[i].records) result.records.push_back(std::move(r));
    for (auto& b : outputs[i].bounds) result.bounds.push_back(std::move(b));
    result.timings.push_back(Timing{config.n_list[n_index], replicate, outputs[i].seconds});
  }
  return result;
}

template <typename Task>
StudyResult run_grid(Study study, const ExperimentConfig& config, int workers, Task task) {
  validate_config(config);
  if (config.study != study) throw Error(ErrorCode::ConfigError, "config names a different study");
  const std::size_t count = config.n_list.size() * static_cast<std::size_t>(config.replicates);
  auto outputs = run_tasks(count, workers, [&](std::size_t i) {
    const auto [n_index, replicate] = split_task(i, config.replicates);
    return task(config.n_list[n_index], replicate);
  });
  return collect(study, config, std::move(outputs));
}

template <typename T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) {
    return format_double(*v);
  } else if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else {
    return std::to_string(*v);
  }
}

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

double rate(std::size_t hits, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

Study parse_study(std::string_view text) {
  if (text == "misassignment") return Study::Misassignment;
  if (text == "kstat") return Study::KStat;
  if (text == "bounds") return Study::Bounds;
  throw Error(ErrorCode::ConfigError, "unknown study '" + std::string(text) + "'");
}

std::string_view to_string(Study study) noexcept {
  switch (study) {
    case Study::Misassignment: return "misassignment";
    case Study::KStat: return "kstat";
    case Study::Bounds: return "bounds";
  }
  return "misassignment";
}

void validate_config(const ExperimentConfig& config) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigError, what); };
  if (config.n_list.empty()) fail("n_list is empty");
  if (config.study != Study::Bounds && config.R_list.empty()) fail("R_list is empty");
  if (config.study == Study::KStat && config.k_list.empty()) fail("k_list is empty");
  if (config.replicates < 1) fail("replicates must be at least 1");
  if (config.restarts < 1) fail("restarts must be at least 1");
  for (int n : config.n_list) {
    if (n < 2) fail("every n must be at least 2");
  }
  for (int R : config.R_list) {
    if (R < 1) fail("every R must be positive");
  }
  for (int k : config.k_list) {
    if (k < 1) fail("every K' must be positive");
  }
  if (config.k_max && *config.k_max < 1) fail("k_max must be positive");
  if (!(config.omega > 0.75 && config.omega < 1.0)) fail("omega must lie in (3/4, 1)");
  if (config.study == Study::KStat && !(config.xi > 0.375 && config.xi < 0.5)) {
    fail("xi must lie in (3/8, 1/2)");
  }
  if (config.theta.has_value() != config.zeta.has_value()) fail("theta and zeta go together");
  if (config.theta && !(*config.theta > 0.0 && *config.theta <= 1.0)) fail("theta must lie in (0, 1]");
  if (config.zeta && !(*config.zeta > 0.0)) fail("zeta must be positive");
  validate_params(config.params);
}

ExperimentConfig config_from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  try {
    if (j.contains("study")) c.study = parse_study(j.at("study").get<std::string>());
    if (j.contains("params")) {
      const json& p = j.at("params");
      c.params = p.is_string() ? load_params(base_dir / p.get<std::string>())
                               : params_from_json(p, base_dir);
    } else {
      throw Error(ErrorCode::ConfigError, "config needs a 'params' entry");
    }
    c.n_list = j.value("n_list", std::vector<int>{});
    c.R_list = j.value("R_list", std::vector<int>{});
    c.k_list = j.value("k_list", std::vector<int>{});
    c.replicates = j.value("replicates", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("mode")) c.mode = parse_knowledge_mode(j.at("mode").get<std::string>());
    c.xi = j.value("xi", kDefaultXi);
    c.omega = j.value("omega", kDefaultOmega);
    c.restarts = j.value("restarts", 50);
    c.growth = j.value("growth", false);
    auto optional_double = [&](const char* key, std::optional<double>& slot) {
      if (j.contains(key) && !j.at(key).is_null()) slot = j.at(key).get<double>();
    };
    optional_double("zeta", c.zeta);
    optional_double("theta", c.theta);
    optional_double("alpha", c.alpha);
    optional_double("beta", c.beta);
    optional_double("gamma", c.gamma);
    if (j.contains("k_max") && !j.at("k_max").is_null()) c.k_max = j.at("k_max").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"study", to_string(c.study)},
         {"params", params_to_json(c.params)},
         {"n_list", c.n_list},
         {"R_list", c.R_list},
         {"k_list", c.k_list},
         {"replicates", c.replicates},
         {"seed", c.seed},
         {"mode", to_string(c.mode)},
         {"xi", c.xi},
         {"omega", c.omega},
         {"restarts", c.restarts},
         {"growth", c.growth}};
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("zeta", c.zeta);
  put("theta", c.theta);
  put("alpha", c.alpha);
  put("beta", c.beta);
  put("gamma", c.gamma);
  put("k_max", c.k_max);
  return j;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

ModelConstants effective_constants(const ExperimentConfig& config) {
  ModelConstants c = compute_constants(config.params);
  if (config.alpha) c.alpha = *config.alpha;
  if (config.beta) c.beta = *config.beta;
  if (config.gamma) c.gamma = *config.gamma;
  return c;
}

Seed replicate_seed(const ExperimentConfig& config, int n, int replicate) {
  return Seed{config.seed, (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint32_t>(replicate)};
}

StudyResult run_misassignment_study(const ExperimentConfig& config, int workers) {
  return run_grid(Study::Misassignment, config, workers,
                  [&](int n, int rep) { return misassignment_task(config, n, rep); });
}

StudyResult run_kstat_study(const ExperimentConfig& config, int workers) {
  return run_grid(Study::KStat, config, workers,
                  [&](int n, int rep) { return kstat_task(config, n, rep); });
}

StudyResult run_bounds_study(const ExperimentConfig& config, int workers) {
  validate_config(config);
  const ModelConstants constants = effective_constants(config);
  return run_grid(Study::Bounds, config, workers,
                  [&](int n, int rep) { return bounds_task(config, constants, n, rep); });
}

StudyResult run_study(const ExperimentConfig& config, int workers) {
  switch (config.study) {
    case Study::Misassignment: return run_misassignment_study(config, workers);
    case Study::KStat: return run_kstat_study(config, workers);
    case Study::Bounds: return run_bounds_study(config, workers);
  }
  throw Error(ErrorCode::ConfigError, "unknown study");
}

std::string records_csv(const StudyResult& result) {
  std::ostringstream os;
  if (result.study == Study::Bounds) {
    os << "study,n,replicate,stream,modality,bound,lhs,rhs,holds,margin,error\n";
    for (const BoundRecord& b : result.bounds) {
      os << "bounds," << b.n << ',' << b.replicate << ',' << b.stream << ',' << b.modality << ','
         << b.report.name << ',' << format_double(b.report.lhs) << ','
         << format_double(b.report.rhs) << ',' << (b.report.holds ? 1 : 0) << ','
         << format_double(b.report.margin) << ',' << b.error << '\n';
    }
    return os.str();
  }
  os << "study,n,R,k_prime,replicate,stream,misassignment,k_hat,k_check,r_hat,statistic,"
        "residual,min_part,separation,qualifies,error\n";
  for (const ExperimentRecord& r : result.records) {
    os << to_string(r.study) << ',' << r.n << ',' << r.R << ',' << r.k_prime << ',' << r.replicate
       << ',' << r.stream << ',' << opt(r.misassignment) << ',' << opt(r.k_hat) << ','
       << opt(r.k_check) << ',' << opt(r.r_hat) << ',' << opt(r.statistic) << ','
       << opt(r.residual) << ',' << opt(r.min_part) << ',' << opt(r.separation) << ','
       << opt(r.qualifies) << ',' << r.error << '\n';
  }
  return os.str();
}

std::string aggregates_csv(const StudyResult& result, const ExperimentConfig& config) {
  std::ostringstream os;
  if (result.study == Study::Bounds) {
    os << "n,modality,bound,count,failures,passes,pass_rate,mean_lhs,mean_rhs\n";
    std::vector<std::tuple<int, int, std::string>> keys;
    for (const BoundRecord& b : result.bounds) {
      if (!b.error.empty()) continue;
      const auto key = std::make_tuple(b.n, b.modality, b.report.name);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [n, modality, name] : keys) {
      std::vector<double> lhs, rhs;
      std::size_t passes = 0;
      for (const BoundRecord& b : result.bounds) {
        if (b.error.empty() && b.n == n && b.modality == modality && b.report.name == name) {
          lhs.push_back(b.report.lhs);
          rhs.push_back(b.report.rhs);
          passes += b.report.holds ? 1 : 0;
        }
      }
      std::size_t failures = 0;
      for (const BoundRecord& b : result.bounds) failures += (b.n == n && !b.error.empty()) ? 1 : 0;
      os << n << ',' << modality << ',' << name << ',' << lhs.size() << ',' << failures << ','
         << passes << ',' << format_double(rate(passes, lhs.size())) << ','
         << format_double(moments(lhs).mean) << ',' << format_double(moments(rhs).mean) << '\n';
    }
    return os.str();
  }

  const int true_k = config.params.K;
  const int true_rank = numerical_rank(config.params.modalities.front());
  if (result.study == Study::Misassignment) {
    os << "n,R,count,failures,mean_misassignment,sd_misassignment\n";
    for (int n : config.n_list) {
      for (int R : config.R_list) {
        std::vector<double> xs;
        std::size_t failures = 0;
        for (const ExperimentRecord& r : result.records) {
          if (r.n != n || r.R != R) continue;
          if (r.misassignment) {
            xs.push_back(*r.misassignment);
          } else {
            ++failures;
          }
        }
        const Moments m = moments(xs);
        os << n << ',' << R << ',' << m.count << ',' << failures << ',' << format_double(m.mean)
           << ',' << format_double(m.sd) << '\n';
      }
    }
    return os.str();
  }

  os << "n,R,k_prime,replicates,count,failures,mean_statistic,sd_statistic,k_hat_correct_rate,"
        "k_check_correct_rate,r_hat_correct_rate,qualify_rate\n";
  for (int n : config.n_list) {
    for (int R : config.R_list) {
      for (int k : config.k_list) {
        std::vector<double> xs;
        std::size_t total = 0, failures = 0, hat = 0, check = 0, rank = 0, qual = 0;
        for (const ExperimentRecord& r : result.records) {
          if (r.n != n || r.R != R || r.k_prime != k) continue;
          ++total;
          if (r.statistic) xs.push_back(*r.statistic);
          if (!r.error.empty()) ++failures;
          hat += (r.k_hat && *r.k_hat == true_k) ? 1 : 0;
          check += (r.k_check && *r.k_check == true_k) ? 1 : 0;
          rank += (r.r_hat && *r.r_hat == true_rank) ? 1 : 0;
          qual += (r.qualifies && *r.qualifies) ? 1 : 0;
        }
        const Moments m = moments(xs);
        os << n << ',' << R << ',' << k << ',' << total << ',' << m.count << ',' << failures << ','
           << format_double(m.mean) << ',' << format_double(m.sd) << ','
           << format_double(rate(hat, total)) << ',' << format_double(rate(check, total)) << ','
           << format_double(rate(rank, total)) << ',' << format_double(rate(qual, total)) << '\n';
      }
    }
  }
  return os.str();
}

std::string timings_csv(const StudyResult& result) {
  std::ostringstream os;
  os << "n,replicate,seconds\n";
  for (const Timing& t : result.timings) {
    os << t.n << ',' << t.replicate << ',' << format_double(t.seconds) << '\n';
  }
  return os.str();
}

void write_study_outputs(const fs::path& out_dir, const ExperimentConfig& config,
                         const StudyResult& result, int workers) {
  fs::create_directories(out_dir);
  save_text(out_dir / "records.csv", records_csv(result));
  save_text(out_dir / "aggregates.csv", aggregates_csv(result, config));
  save_text(out_dir / "timings.csv", timings_csv(result));
  const json manifest{{"version", kVersion},
                      {"study", to_string(result.study)},
                      {"seed", config.seed},
                      {"workers", workers},
                      {"config", config_to_json(config)}};
  save_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace blockspec
