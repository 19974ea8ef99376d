// Acceptance suite. Usage: acceptance <1-7|all>
// Prints one PASS/FAIL line per checked claim; exits nonzero on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "fixtures.hpp"

using namespace blockspec;

namespace {

int g_failures = 0;

void report(bool ok, const std::string& id, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << id << ": " << detail << std::endl;
  if (!ok) ++g_failures;
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double mean_misassignment(const StudyResult& r, int n, int R) {
  double sum = 0.0;
  int count = 0;
  for (const ExperimentRecord& rec : r.records) {
    if (rec.n == n && rec.R == R && rec.misassignment) {
      sum += *rec.misassignment;
      ++count;
    }
  }
  return count ? sum / count : std::nan("");
}

// Records for one (n, R, K') cell, one per replicate.
std::vector<const ExperimentRecord*> cell(const StudyResult& r, int n, int R, int k) {
  std::vector<const ExperimentRecord*> out;
  for (const ExperimentRecord& rec : r.records) {
    if (rec.n == n && rec.R == R && rec.k_prime == k) out.push_back(&rec);
  }
  return out;
}

std::string rate_text(int hits, int total) {
  return std::to_string(hits) + "/" + std::to_string(total) + " = " +
         fmt(static_cast<double>(hits) / total);
}

void criterion1() {
  ExperimentConfig c;
  c.study = Study::Misassignment;
  c.params = fixtures::param1();
  c.replicates = 100;
  c.restarts = 50;
  c.seed = 1001;

  c.n_list = {1000};
  c.R_list = {1, 2, 3, 10, 25};
  const StudyResult at1000 = run_misassignment_study(c, workers());
  const std::map<int, std::pair<double, bool>> bands{
      {1, {0.30, false}}, {2, {0.05, true}}, {3, {0.10, true}}, {10, {0.15, true}}, {25, {0.20, true}}};
  for (const auto& [R, band] : bands) {
    const double m = mean_misassignment(at1000, 1000, R);
    const bool ok = band.second ? m < band.first : m > band.first;
    report(ok, "criterion 1 (n=1000, R=" + std::to_string(R) + ")",
           "mean misassignment " + fmt(m) + (band.second ? " < " : " > ") + fmt(band.first));
  }

  c.n_list = {400, 1400};
  c.R_list = {2};
  const StudyResult sweep = run_misassignment_study(c, workers());
  const double small = mean_misassignment(sweep, 400, 2);
  const double large = mean_misassignment(sweep, 1400, 2);
  report(large < small, "criterion 1 (R=2, n=1400 vs n=400)",
         "mean misassignment " + fmt(large) + " < " + fmt(small));
}

void criterion2() {
  ExperimentConfig c;
  c.study = Study::KStat;
  c.params = fixtures::kest();
  c.xi = 0.40;
  c.replicates = 20;
  c.restarts = 50;
  c.seed = 2002;
  c.k_list = {2, 3, 4};

  c.n_list = {3200};
  c.R_list = {6};
  const StudyResult big = run_kstat_study(c, workers());
  int hits = 0;
  std::ostringstream stats;
  const auto rows = cell(big, 3200, 6, 3);
  for (const ExperimentRecord* rec : rows) hits += (rec->k_hat && *rec->k_hat == 3) ? 1 : 0;
  for (int k : c.k_list) {
    double s = 0.0;
    for (const ExperimentRecord* rec : cell(big, 3200, 6, k)) s += *rec->statistic;
    stats << " K'=" << k << ":" << fmt(s / rows.size());
  }
  report(hits >= 0.9 * rows.size(), "criterion 2 (R=6, n=3200, xi=0.40, K_hat=3)",
         "rate " + rate_text(hits, static_cast<int>(rows.size())) +
             " (need >= 0.9); mean statistic" + stats.str());

  c.n_list = {100};
  c.R_list = {3};
  const StudyResult small = run_kstat_study(c, workers());
  const auto srows = cell(small, 100, 3, 3);
  int few = 0;
  for (const ExperimentRecord* rec : srows) few += (rec->k_hat && *rec->k_hat < 3) ? 1 : 0;
  report(few >= 0.5 * srows.size(), "criterion 2 (R=3, n=100, K_hat<3)",
         "rate " + rate_text(few, static_cast<int>(srows.size())) + " (need >= 0.5)");
}

void criterion3() {
  const SbmParams p = fixtures::kest();
  ExperimentConfig c;
  c.params = p;
  c.seed = 3003;
  const double omega = 0.8;
  int hits = 0;
  std::map<int, int> histogram;
  for (int rep = 0; rep < 50; ++rep) {
    const GraphSample g = sample_graph(1600, p, replicate_seed(c, 1600, rep));
    const Vector sigma = singular_values(to_dense(g.adjacency[0]));
    const int r = estimate_rank(sigma, 1600, omega);
    ++histogram[r];
    hits += r == 3 ? 1 : 0;
  }
  std::ostringstream h;
  for (const auto& [r, count] : histogram) h << " r_hat=" << r << ":" << count;
  report(hits >= 0.95 * 50, "criterion 3 (sampled, n=1600, omega=0.8, r_hat=3)",
         "rate " + rate_text(hits, 50) + " (need >= 0.95);" + h.str() + "; threshold n^omega = " +
             fmt(std::pow(1600.0, omega)));

  Labels tau;
  for (int b = 1; b <= 3; ++b) tau.insert(tau.end(), b == 3 ? 160 : 120, b);
  const Vector sigma = singular_values(probability_matrix(tau, fixtures::param1().modalities[0]));
  const int r = estimate_rank(sigma, 400, omega);
  report(r == 2, "criterion 3 (noiseless param1, n=400, r_hat=2)",
         "r_hat = " + std::to_string(r) + "; sigma_1, sigma_2 = " + fmt(sigma(0)) + ", " +
             fmt(sigma(1)) + " against n^omega = " + fmt(std::pow(400.0, omega)));
}

void criterion4() {
  ExperimentConfig c;
  c.study = Study::KStat;
  c.params = fixtures::kest();
  c.n_list = {1600};
  c.R_list = {3};
  c.k_list = {4};
  c.replicates = 50;
  c.restarts = 50;
  c.theta = 0.25;
  c.zeta = 0.01;
  c.seed = 4004;
  const StudyResult r = run_kstat_study(c, workers());
  const auto rows = cell(r, 1600, 3, 4);
  int hits = 0, fails = 0;
  for (const ExperimentRecord* rec : rows) {
    hits += (rec->k_check && *rec->k_check == 3) ? 1 : 0;
    fails += (rec->qualifies && !*rec->qualifies) ? 1 : 0;
  }
  const int total = static_cast<int>(rows.size());
  report(hits >= 0.9 * total, "criterion 4 (K_check=3, n=1600, theta=0.25, zeta=0.01)",
         "rate " + rate_text(hits, total) + " (need >= 0.9)");
  report(fails >= 0.9 * total, "criterion 4 (K'=4 predicate fails)",
         "rate " + rate_text(fails, total) + " (need >= 0.9)");
}

void criterion5() {
  ExperimentConfig c;
  c.study = Study::Bounds;
  c.params = fixtures::param1();
  c.R_list = {2};
  c.seed = 5005;

  auto tally = [](const StudyResult& r, int n, const std::string& name) {
    int hits = 0, total = 0;
    for (const BoundRecord& b : r.bounds) {
      if (b.n == n && b.error.empty() && b.report.name == name) {
        hits += b.report.holds ? 1 : 0;
        ++total;
      }
    }
    return std::pair{hits, total};
  };

  c.n_list = {200, 400, 800};
  c.replicates = 100;
  const StudyResult first = run_bounds_study(c, workers());
  c.n_list = {400, 800, 1600};
  c.replicates = 50;
  const StudyResult second = run_bounds_study(c, workers());

  int sigma_hits = 0, sigma_total = 0;
  for (const StudyResult* r : {&first, &second}) {
    for (const BoundRecord& b : r->bounds) {
      if (b.report.name == "cor3_sigma1_le_n") {
        sigma_hits += b.report.holds ? 1 : 0;
        ++sigma_total;
      }
    }
  }
  report(sigma_hits == sigma_total && sigma_total > 0, "criterion 5 (sigma_1 <= n)",
         "held in " + rate_text(sigma_hits, sigma_total) + " (need all)");

  for (int n : {200, 400, 800}) {
    for (const char* name : {"lemma1_left_gram", "lemma1_right_gram", "cor3_sigma_rank_plus_one"}) {
      const auto [hits, total] = tally(first, n, name);
      report(total == 100 && hits >= 95, std::string("criterion 5 (") + name + ", n=" + std::to_string(n) + ")",
             "held in " + rate_text(hits, total) + " (need >= 0.95)");
    }
  }
  for (int n : {400, 800, 1600}) {
    for (const char* name : {"cor5_procrustes_left", "cor5_procrustes_right"}) {
      const auto [hits, total] = tally(second, n, name);
      report(total == 50 && hits >= 0.95 * 50, std::string("criterion 5 (") + name + ", n=" + std::to_string(n) + ")",
             "held in " + rate_text(hits, total) + " (need >= 0.95)");
    }
  }
}

void criterion6() {
  Engine e = make_engine({6006, 0});
  int matches = 0;
  std::map<std::string, int> gaps;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(uniform_index(e, 12));
    const int d = 1 + static_cast<int>(uniform_index(e, 3));
    const int k = 1 + static_cast<int>(uniform_index(e, std::min(n, 4)));
    const Matrix z = fixtures::random_matrix(e, n, d);
    LloydOptions opts;
    opts.restarts = 50;
    const double lloyd = lloyd_cluster(z, k, opts, {6006, static_cast<std::uint64_t>(t)}).objective;
    const double exact = exact_min_sse(z, k).objective;
    const double gap = lloyd - exact;
    matches += gap <= 1e-9 ? 1 : 0;
    gaps[gap <= 1e-9 ? "<=1e-9" : gap <= 1e-3 ? "<=1e-3" : ">1e-3"]++;
  }
  std::ostringstream g;
  for (const auto& [bucket, count] : gaps) g << " " << bucket << ":" << count;
  report(matches >= 990, "criterion 6 (lloyd vs exact objective)",
         "matched within 1e-9 on " + rate_text(matches, 1000) + " (need >= 0.99); gaps" + g.str());

  int discrepancies = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(uniform_index(e, 30));
    const Labels tau = fixtures::random_labels(e, n, 1 + static_cast<int>(uniform_index(e, 5)));
    const Labels hat = fixtures::random_labels(e, n, 1 + static_cast<int>(uniform_index(e, 5)));
    discrepancies += misassignment_count(tau, hat) != fixtures::brute_force_misassignment(tau, hat);
  }
  report(discrepancies == 0, "criterion 6 (misassignment vs K! oracle)",
         std::to_string(discrepancies) + " discrepancies on 1000 instances");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion7() {
  const auto root = std::filesystem::temp_directory_path() / "blockspec_acceptance_c7";
  std::filesystem::remove_all(root);
  for (Study study : {Study::Misassignment, Study::KStat, Study::Bounds}) {
    ExperimentConfig c;
    c.study = study;
    c.params = study == Study::KStat ? fixtures::kest() : fixtures::param1();
    c.n_list = {80, 150};
    c.R_list = {2, 3};
    c.k_list = {2, 3, 4};
    c.replicates = 4;
    c.restarts = 10;
    c.seed = 7007;
    c.theta = 0.25;
    c.zeta = 0.01;
    std::vector<std::string> tables;
    for (int w : {1, 1, 3, 8}) {
      const auto dir = root / (std::string(to_string(study)) + "_w" + std::to_string(w) + "_" +
                               std::to_string(tables.size()));
      write_study_outputs(dir, c, run_study(c, w), w);
      tables.push_back(slurp(dir / "records.csv"));
    }
    bool same = !tables[0].empty();
    for (const auto& t : tables) same &= t == tables[0];
    report(same, std::string("criterion 7 (") + std::string(to_string(study)) + ")",
           "records.csv byte-identical across 2 runs at 1 worker and runs at 3 and 8 workers (" +
               std::to_string(tables[0].size()) + " bytes)");
  }
  std::filesystem::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  const std::map<std::string, void (*)()> criteria{
      {"1", criterion1}, {"2", criterion2}, {"3", criterion3}, {"4", criterion4},
      {"5", criterion5}, {"6", criterion6}, {"7", criterion7}};
  if (which != "all" && !criteria.count(which)) {
    std::cerr << "usage: acceptance <1-7|all>\n";
    return 2;
  }
  for (const auto& [id, run] : criteria) {
    if (which != "all" && which != id) continue;
    const auto start = std::chrono::steady_clock::now();
    run();
    std::cout << "  (criterion " << id << " took "
              << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 3)
              << " s)" << std::endl;
  }
  return g_failures == 0 ? 0 : 1;
}
