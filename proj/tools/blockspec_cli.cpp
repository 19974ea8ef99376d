#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "blockspec/blockspec.hpp"

namespace bs = blockspec;

namespace {

std::vector<int> per_modality(const std::vector<int>& R, std::size_t modalities) {
  if (R.size() == 1) return std::vector<int>(modalities, R.front());
  if (R.size() != modalities) {
    throw bs::Error(bs::ErrorCode::ConfigError, "--R takes one value or one per modality");
  }
  return R;
}

bs::GraphFormat parse_format(const std::string& s) {
  if (s == "edgelist") return bs::GraphFormat::EdgeList;
  if (s == "dense") return bs::GraphFormat::Dense;
  throw bs::Error(bs::ErrorCode::ConfigError, "unknown graph format '" + s + "'");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    bs::save_text(path, text);
  }
}

std::string trace_csv(const bs::SelectionTrace& trace) {
  std::ostringstream os;
  os << "k_prime,objective,statistic,min_part,separation\n";
  for (const auto& r : trace.rows) {
    os << r.k << ',' << bs::format_double(r.residual) << ',' << bs::format_double(r.statistic)
       << ',' << r.min_part << ',' << bs::format_double(r.separation) << '\n';
  }
  return os.str();
}

struct EmbedArgs {
  std::string graph;
  std::vector<int> R{2};
  std::string mode = "rows";
};

void add_embed_args(CLI::App* app, EmbedArgs& a) {
  app->add_option("--graph", a.graph, "Graph file (edgelist or dense)")->required();
  app->add_option("--R", a.R, "Embedding dimension, one value or one per modality");
  app->add_option("--mode", a.mode, "Knowledge mode")
      ->check(CLI::IsMember({"rows", "columns", "neither"}));
}

bs::Matrix features_for(const bs::GraphSample& g, const EmbedArgs& a) {
  const auto R = per_modality(a.R, g.adjacency.size());
  return bs::embed_sample(g, R, bs::parse_knowledge_mode(a.mode));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjacency-spectral partitioning of stochastic block model graphs"};
  app.set_version_flag("--version", std::string(bs::kVersion));
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a graph from model parameters");
  std::string gen_params, gen_out, gen_labels, gen_format = "edgelist";
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--params", gen_params, "Model parameter JSON")->required();
  gen->add_option("--n", gen_n, "Vertex count")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Graph output path")->required();
  gen->add_option("--labels", gen_labels, "Write the true labels here");
  gen->add_option("--format", gen_format, "edgelist or dense")
      ->check(CLI::IsMember({"edgelist", "dense"}));

  // embed
  auto* emb = app.add_subcommand("embed", "Write the spectral feature matrix");
  EmbedArgs emb_args;
  std::string emb_out, emb_sigma;
  double emb_omega = bs::kDefaultOmega;
  add_embed_args(emb, emb_args);
  emb->add_option("--out", emb_out, "Feature table path (stdout when omitted)");
  emb->add_option("--sigma", emb_sigma, "Write each modality's singular values here");
  emb->add_option("--omega", emb_omega, "Rank estimator exponent in (3/4, 1)");

  // partition
  auto* part = app.add_subcommand("partition", "Cluster vertices into blocks");
  EmbedArgs part_args;
  std::optional<int> part_k;
  std::string part_out;
  int part_restarts = 50;
  std::uint64_t part_seed = 0;
  double part_xi = bs::kDefaultXi;
  std::optional<int> part_k_max;
  add_embed_args(part, part_args);
  part->add_option("--k", part_k, "Known block count; estimated with K-hat when omitted");
  part->add_option("--xi", part_xi, "Threshold exponent in (3/8, 1/2) when K is estimated");
  part->add_option("--k-max", part_k_max, "Largest K' tried when K is estimated");
  part->add_option("--restarts", part_restarts, "Lloyd restarts")->check(CLI::PositiveNumber);
  part->add_option("--seed", part_seed, "Seed");
  part->add_option("--out", part_out, "Label output path (stdout when omitted)");

  // select-k
  auto* sel = app.add_subcommand("select-k", "Estimate the number of blocks");
  EmbedArgs sel_args;
  double sel_xi = bs::kDefaultXi;
  std::optional<double> sel_zeta, sel_theta;
  std::optional<int> sel_k_max;
  std::string sel_estimator = "hat", sel_trace;
  int sel_restarts = 50;
  std::uint64_t sel_seed = 0;
  add_embed_args(sel, sel_args);
  sel->add_option("--xi", sel_xi, "Threshold exponent in (3/8, 1/2)");
  sel->add_option("--zeta", sel_zeta, "Centroid separation floor for K-check");
  sel->add_option("--theta", sel_theta, "Part size fraction for K-check");
  sel->add_option("--k-max", sel_k_max, "Largest K' tried by K-hat");
  sel->add_option("--estimator", sel_estimator, "hat, check or both")
      ->check(CLI::IsMember({"hat", "check", "both"}));
  sel->add_option("--restarts", sel_restarts, "Lloyd restarts")->check(CLI::PositiveNumber);
  sel->add_option("--seed", sel_seed, "Seed");
  sel->add_option("--trace", sel_trace, "Trace table path");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Misassignment of estimated labels");
  std::string ev_truth, ev_estimate;
  ev->add_option("--truth", ev_truth, "True label file")->required();
  ev->add_option("--estimate", ev_estimate, "Estimated label file")->required();

  // check-bounds
  auto* cb = app.add_subcommand("check-bounds", "Evaluate the spectral bounds on one sample");
  std::string cb_graph, cb_params, cb_labels, cb_out;
  cb->add_option("--graph", cb_graph, "Graph file")->required();
  cb->add_option("--params", cb_params, "Model parameter JSON")->required();
  cb->add_option("--labels", cb_labels, "True label file")->required();
  cb->add_option("--out", cb_out, "Report table path (stdout when omitted)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo study");
  std::string sim_study, sim_config, sim_out;
  int sim_workers = 1;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--study", sim_study, "misassignment, kstat or bounds")
      ->check(CLI::IsMember({"misassignment", "kstat", "bounds"}));
  sim->add_option("--config", sim_config, "Experiment config JSON")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--workers", sim_workers, "Worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Base seed, overriding the config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const bs::SbmParams params = bs::validate_params(bs::load_params(gen_params));
      const bs::GraphSample g = bs::sample_graph(gen_n, params, bs::Seed{gen_seed, 0});
      bs::save_graph(gen_out, g, parse_format(gen_format));
      if (!gen_labels.empty()) bs::save_labels(gen_labels, g.tau);
    } else if (*emb) {
      const bs::GraphSample g = bs::load_graph(emb_args.graph);
      const auto R = per_modality(emb_args.R, g.adjacency.size());
      std::vector<bs::ModalityEmbedding> parts;
      std::ostringstream sigma;
      for (std::size_t s = 0; s < g.adjacency.size(); ++s) {
        parts.push_back(bs::svd_embed(g.adjacency[s], R[s]));
        std::cerr << "modality " << s + 1 << ": r_hat = "
                  << bs::estimate_rank(parts.back().sigma, g.n, emb_omega) << '\n';
        bs::write_matrix_text(sigma, parts.back().sigma.transpose());
      }
      std::ostringstream table;
      bs::write_matrix_text(table, bs::assemble_features(parts, bs::parse_knowledge_mode(emb_args.mode)));
      emit(emb_out, table.str());
      if (!emb_sigma.empty()) bs::save_text(emb_sigma, sigma.str());
    } else if (*part) {
      const bs::GraphSample g = bs::load_graph(part_args.graph);
      bs::LloydOptions opts;
      opts.restarts = part_restarts;
      const bs::ClustererConfig config{opts, bs::Seed{part_seed, 0}};
      bs::Labels labels;
      if (part_k) {
        const bs::Matrix z = features_for(g, part_args);
        labels = bs::assignment_from_clustering(bs::cluster_at(z, *part_k, config));
      } else {
        const auto R = per_modality(part_args.R, g.adjacency.size());
        int total = 0;
        for (int r : R) total += r;
        const auto result = bs::extended_partition(
            g, R, bs::parse_knowledge_mode(part_args.mode), part_xi,
            part_k_max.value_or(bs::default_k_max(total, g.n)), config);
        std::cerr << "K_hat = " << result.k_hat << '\n';
        labels = result.tau_hat;
      }
      std::ostringstream os;
      bs::write_labels(os, labels);
      emit(part_out, os.str());
    } else if (*sel) {
      const bs::GraphSample g = bs::load_graph(sel_args.graph);
      const bs::Matrix z = features_for(g, sel_args);
      bs::LloydOptions opts;
      opts.restarts = sel_restarts;
      const bs::ClustererConfig config{opts, bs::Seed{sel_seed, 0}};
      std::string trace_text;
      if (sel_estimator != "check") {
        int total = 0;
        for (int r : per_modality(sel_args.R, g.adjacency.size())) total += r;
        const int k_max = sel_k_max.value_or(bs::default_k_max(total, g.n));
        try {
          const auto hat = bs::estimate_k_hat(z, g.n, sel_xi, k_max, config);
          std::cout << "k_hat," << hat.k << '\n';
          trace_text = trace_csv(hat.trace);
        } catch (const bs::NoKFoundError& e) {
          std::cout << "k_hat,\n";
          std::cerr << e.what() << '\n';
          trace_text = trace_csv(e.trace());
        }
      }
      if (sel_estimator != "hat") {
        if (!sel_zeta || !sel_theta) {
          throw bs::Error(bs::ErrorCode::ConfigError, "K-check needs --zeta and --theta");
        }
        const auto check = bs::estimate_k_check(z, g.n, *sel_zeta, *sel_theta, config);
        std::cout << "k_check," << check.k << '\n';
        if (!check.trace.diagnostic.empty()) std::cerr << check.trace.diagnostic << '\n';
        if (sel_estimator == "check") trace_text = trace_csv(check.trace);
      }
      if (!sel_trace.empty()) bs::save_text(sel_trace, trace_text);
    } else if (*ev) {
      const bs::Labels truth = bs::load_labels(ev_truth);
      const bs::Labels estimate = bs::load_labels(ev_estimate);
      std::cout << "misassignment_count," << bs::misassignment_count(truth, estimate) << '\n'
                << "misassignment_fraction,"
                << bs::format_double(bs::misassignment_fraction(truth, estimate)) << '\n';
    } else if (*cb) {
      const bs::GraphSample g = bs::load_graph(cb_graph);
      const bs::SbmParams params = bs::validate_params(bs::load_params(cb_params));
      const bs::Labels tau = bs::load_labels(cb_labels);
      if (static_cast<int>(tau.size()) != g.n) {
        throw bs::Error(bs::ErrorCode::LengthMismatch, "label count differs from n");
      }
      if (g.adjacency.size() != params.modalities.size()) {
        throw bs::Error(bs::ErrorCode::DimensionError, "modality count differs from the parameters");
      }
      const bs::ModelConstants constants = bs::compute_constants(params);
      std::ostringstream os;
      os << "modality,bound,lhs,rhs,holds,margin,n\n";
      for (std::size_t s = 0; s < g.adjacency.size(); ++s) {
        const bs::Matrix& m = params.modalities[s];
        const bs::Matrix a = bs::to_dense(g.adjacency[s]);
        const int rank = bs::numerical_rank(m);
        const bs::TopSingular top = bs::top_singular(a, std::min(rank, g.n));
        std::vector<bs::BoundReport> reports = bs::check_corollary3(top.sigma, g.n, rank, constants);
        for (auto& r : bs::check_lemma1(a, bs::probability_matrix(tau, m))) reports.push_back(r);
        const bs::NoiselessSpectrum noiseless = bs::noiseless_spectrum(tau, m);
        for (auto& r : bs::check_lemma2(noiseless, g.n, constants)) reports.push_back(r);
        if (noiseless.U.cols() == top.left.cols()) {
          auto left = bs::check_corollary5(noiseless.U, top.left, g.n, constants);
          left.name = "cor5_procrustes_left";
          auto right = bs::check_corollary5(noiseless.V, top.right, g.n, constants);
          right.name = "cor5_procrustes_right";
          reports.push_back(left);
          reports.push_back(right);
        }
        for (const auto& r : reports) {
          os << s + 1 << ',' << r.name << ',' << bs::format_double(r.lhs) << ','
             << bs::format_double(r.rhs) << ',' << (r.holds ? 1 : 0) << ','
             << bs::format_double(r.margin) << ',' << r.n << '\n';
        }
      }
      emit(cb_out, os.str());
    } else if (*sim) {
      bs::ExperimentConfig config = bs::load_config(sim_config);
      if (!sim_study.empty()) config.study = bs::parse_study(sim_study);
      if (sim_seed) config.seed = *sim_seed;
      const bs::StudyResult result = bs::run_study(config, sim_workers);
      bs::write_study_outputs(sim_out, config, result, sim_workers);
    }
  } catch (const bs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
