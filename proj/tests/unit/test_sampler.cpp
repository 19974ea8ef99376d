#include "doctest.h"
#include "fixtures.hpp"

using namespace blockspec;

namespace {

bool valid_sample(const GraphSample& g) {
  for (const Adjacency& a : g.adjacency) {
    if (a.rows() != g.n || a.cols() != g.n) return false;
    for (int i = 0; i < g.n; ++i) {
      if (a(i, i) != 0) return false;
      for (int j = 0; j < g.n; ++j) {
        if (a(i, j) > 1) return false;
        if (!g.directed && a(i, j) != a(j, i)) return false;
      }
    }
  }
  return static_cast<int>(g.tau.size()) == g.n;
}

bool same_sample(const GraphSample& a, const GraphSample& b) {
  if (a.n != b.n || a.tau != b.tau || a.adjacency.size() != b.adjacency.size()) return false;
  for (std::size_t s = 0; s < a.adjacency.size(); ++s) {
    if (a.adjacency[s] != b.adjacency[s]) return false;
  }
  return true;
}

// Edge density per ordered block pair, excluding the diagonal.
Matrix block_density(const GraphSample& g, int K, int s = 0) {
  Matrix edges = Matrix::Zero(K, K), pairs = Matrix::Zero(K, K);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (i == j) continue;
      pairs(g.tau[i] - 1, g.tau[j] - 1) += 1;
      edges(g.tau[i] - 1, g.tau[j] - 1) += g.adjacency[s](i, j);
    }
  }
  return edges.cwiseQuotient(pairs);
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("sample_tau") {
  const Labels one = sample_tau(50, {1.0}, {1, 0});
  CHECK(std::all_of(one.begin(), one.end(), [](int l) { return l == 1; }));

  const Labels t = sample_tau(10000, {0.3, 0.3, 0.4}, {2024, 0});
  std::vector<double> freq(3, 0.0);
  for (int l : t) freq[l - 1] += 1.0 / 10000;
  CHECK(std::abs(freq[0] - 0.3) <= 0.02);
  CHECK(std::abs(freq[1] - 0.3) <= 0.02);
  CHECK(std::abs(freq[2] - 0.4) <= 0.02);

  CHECK(sample_tau(200, {0.3, 0.3, 0.4}, {9, 4}) == sample_tau(200, {0.3, 0.3, 0.4}, {9, 4}));
  CHECK(sample_tau(200, {0.3, 0.3, 0.4}, {9, 4}) != sample_tau(200, {0.3, 0.3, 0.4}, {9, 5}));
}

TEST_CASE("sample_adjacency extremes") {
  const Labels tau = sample_tau(30, {0.5, 0.5}, {3, 0});
  SbmParams ones{2, {0.5, 0.5}, {Matrix::Ones(2, 2)}, false};
  // Identifiability is not needed for sampling; the all-ones model is only a probe.
  const GraphSample full = sample_adjacency(tau, ones, {3, 1});
  CHECK(valid_sample(full));
  CHECK(full.adjacency[0].cast<int>().sum() == 30 * 29);

  SbmParams zeros{2, {0.5, 0.5}, {Matrix::Zero(2, 2)}, true};
  const GraphSample empty = sample_adjacency(tau, zeros, {3, 1});
  CHECK(valid_sample(empty));
  CHECK(empty.adjacency[0].cast<int>().sum() == 0);
}

TEST_CASE("block densities track M") {
  const SbmParams p = fixtures::param1();
  const GraphSample g = sample_graph(2000, p, {77, 0});
  CHECK(valid_sample(g));
  const Matrix d = block_density(g, 3);
  CHECK((d - p.modalities[0]).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("directed sampling fills both triangles independently") {
  Matrix m(2, 2);
  m << 0.6, 0.1, 0.3, 0.6;
  const SbmParams p{2, {0.5, 0.5}, {m}, true};
  const GraphSample g = sample_graph(600, p, {5, 0});
  CHECK(valid_sample(g));
  CHECK((block_density(g, 2) - m).cwiseAbs().maxCoeff() <= 0.02);
  bool asymmetric = false;
  for (int i = 0; i < g.n && !asymmetric; ++i) {
    for (int j = 0; j < g.n; ++j) asymmetric |= g.adjacency[0](i, j) != g.adjacency[0](j, i);
  }
  CHECK(asymmetric);
}

TEST_CASE("determinism and stream separation") {
  const SbmParams p = fixtures::param1();
  CHECK(same_sample(sample_graph(300, p, {1, 2}), sample_graph(300, p, {1, 2})));
  CHECK_FALSE(same_sample(sample_graph(300, p, {1, 2}), sample_graph(300, p, {1, 3})));
  CHECK_FALSE(same_sample(sample_graph(300, p, {1, 2}), sample_graph(300, p, {2, 2})));
}

TEST_CASE("modalities are independent given tau") {
  SbmParams p = fixtures::param1();
  p.modalities.push_back(p.modalities[0]);
  const GraphSample g = sample_graph(2000, p, {31, 0});
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, cnt = 0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = j + 1; i < g.n; ++i) {
      const double x = g.adjacency[0](i, j), y = g.adjacency[1](i, j);
      sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y, cnt += 1;
    }
  }
  const double cov = sxy / cnt - (sx / cnt) * (sy / cnt);
  const double corr =
      cov / std::sqrt((sxx / cnt - sx * sx / cnt / cnt) * (syy / cnt - sy * sy / cnt / cnt));
  CHECK(std::abs(corr) <= 0.05);
}

TEST_CASE("extend_sample preserves the existing graph") {
  const SbmParams p = fixtures::param1();
  const GraphSample base = sample_graph(40, p, {8, 0});
  const GraphSample bigger = extend_sample(base, p, {8, 99});
  CHECK(bigger.n == 41);
  CHECK(valid_sample(bigger));
  CHECK(same_sample(restrict_sample(bigger, 40), base));

  const GraphSample single = extend_sample(empty_sample(p), p, {8, 1});
  CHECK(single.n == 1);
  CHECK(single.tau.size() == 1);
  CHECK(single.adjacency[0](0, 0) == 0);

  Matrix m(2, 2);
  m << 0.6, 0.1, 0.3, 0.6;
  const SbmParams d{2, {0.5, 0.5}, {m}, true};
  const GraphSample dg = sample_graph(20, d, {8, 0});
  const GraphSample dgx = extend_sample(dg, d, {8, 5});
  CHECK(valid_sample(dgx));
  CHECK(same_sample(restrict_sample(dgx, 20), dg));
}

TEST_CASE("grow_sample equals repeated extension") {
  const SbmParams p = fixtures::param1();
  const Seed base{4, 7};
  GraphSample step = empty_sample(p);
  for (int v = 0; v < 60; ++v) step = extend_sample(step, p, vertex_seed(base, v));
  CHECK(same_sample(grow_sample(empty_sample(p), p, 60, base), step));

  const GraphSample half = grow_sample(empty_sample(p), p, 30, base);
  CHECK(same_sample(grow_sample(half, p, 60, base), step));
}

TEST_CASE("growth from 100 to 1000 keeps block densities") {
  const SbmParams p = fixtures::param1();
  const Seed base{13, 0};
  const GraphSample start = grow_sample(empty_sample(p), p, 100, base);
  const GraphSample g = grow_sample(start, p, 1000, base);
  CHECK(valid_sample(g));
  CHECK((block_density(g, 3) - p.modalities[0]).cwiseAbs().maxCoeff() <= 0.05);
}

}  // TEST_SUITE
