#include "blockspec/sampler.hpp"

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

constexpr std::uint64_t kTauTag = 0x7461750000000000ULL;
constexpr std::uint64_t kEdgeTag = 0x6564676500000000ULL;
constexpr std::uint64_t kVertexTag = 0x7665727400000000ULL;

int draw_label(Engine& engine, const std::vector<double>& rho) {
  return static_cast<int>(weighted_index(engine, rho)) + 1;
}

// Label and incident edges of vertex v, all from one engine.
void draw_vertex(GraphSample& g, int v, const SbmParams& params, Engine& engine) {
  const int label = draw_label(engine, params.rho);
  g.tau[v] = label;
  for (std::size_t s = 0; s < params.modalities.size(); ++s) {
    const Matrix& m = params.modalities[s];
    Adjacency& a = g.adjacency[s];
    a(v, v) = 0;
    for (int j = 0; j < v; ++j) {
      const int other = g.tau[j] - 1;
      if (params.directed) {
        a(j, v) = bernoulli(engine, m(other, label - 1)) ? 1 : 0;
        a(v, j) = bernoulli(engine, m(label - 1, other)) ? 1 : 0;
      } else {
        const std::uint8_t e = bernoulli(engine, m(label - 1, other)) ? 1 : 0;
        a(j, v) = e;
        a(v, j) = e;
      }
    }
  }
}

GraphSample resized_copy(const GraphSample& g, int n) {
  GraphSample out;
  out.n = n;
  out.directed = g.directed;
  out.tau.assign(n, 0);
  const int keep = std::min(g.n, n);
  std::copy(g.tau.begin(), g.tau.begin() + keep, out.tau.begin());
  out.adjacency.reserve(g.adjacency.size());
  for (const Adjacency& a : g.adjacency) {
    Adjacency b = Adjacency::Zero(n, n);
    b.topLeftCorner(keep, keep) = a.topLeftCorner(keep, keep);
    out.adjacency.push_back(std::move(b));
  }
  return out;
}

}  // namespace

Labels sample_tau(int n, const std::vector<double>& rho, const Seed& seed) {
  Engine engine = make_engine(seed);
  Labels tau(static_cast<std::size_t>(n));
  for (int& t : tau) t = draw_label(engine, rho);
  return tau;
}

GraphSample sample_adjacency(const Labels& tau, const SbmParams& params, const Seed& seed) {
  GraphSample g;
  g.n = static_cast<int>(tau.size());
  g.tau = tau;
  g.directed = params.directed;
  const int n = g.n;
  for (std::size_t s = 0; s < params.modalities.size(); ++s) {
    const Matrix& m = params.modalities[s];
    Engine engine = make_engine(derive(seed, kEdgeTag + s));
    Adjacency a = Adjacency::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const int bi = tau[i] - 1;
      if (params.directed) {
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          a(i, j) = bernoulli(engine, m(bi, tau[j] - 1)) ? 1 : 0;
        }
      } else {
        for (int j = i + 1; j < n; ++j) {
          const std::uint8_t e = bernoulli(engine, m(bi, tau[j] - 1)) ? 1 : 0;
          a(i, j) = e;
          a(j, i) = e;
        }
      }
    }
    g.adjacency.push_back(std::move(a));
  }
  return g;
}

GraphSample sample_graph(int n, const SbmParams& params, const Seed& seed) {
  if (n < 0) throw Error(ErrorCode::DimensionError, "vertex count must be nonnegative");
  const Labels tau = sample_tau(n, params.rho, derive(seed, kTauTag));
  return sample_adjacency(tau, params, seed);
}

Seed vertex_seed(const Seed& base, int index) noexcept {
  return derive(base, kVertexTag + static_cast<std::uint64_t>(index));
}

GraphSample extend_sample(const GraphSample& existing, const SbmParams& params, const Seed& seed) {
  GraphSample g = resized_copy(existing, existing.n + 1);
  g.directed = params.directed;
  if (g.adjacency.size() != params.modalities.size()) {
    g.adjacency.assign(params.modalities.size(), Adjacency::Zero(g.n, g.n));
  }
  Engine engine = make_engine(seed);
  draw_vertex(g, existing.n, params, engine);
  return g;
}

GraphSample grow_sample(const GraphSample& existing, const SbmParams& params, int target_n,
                        const Seed& base) {
  if (target_n < existing.n) {
    throw Error(ErrorCode::DimensionError, "growth target is smaller than the sample");
  }
  GraphSample g = resized_copy(existing, target_n);
  g.directed = params.directed;
  if (g.adjacency.size() != params.modalities.size()) {
    g.adjacency.assign(params.modalities.size(), Adjacency::Zero(target_n, target_n));
  }
  for (int v = existing.n; v < target_n; ++v) {
    Engine engine = make_engine(vertex_seed(base, v));
    draw_vertex(g, v, params, engine);
  }
  return g;
}

GraphSample restrict_sample(const GraphSample& sample, int n) {
  if (n > sample.n || n < 0) throw Error(ErrorCode::DimensionError, "restriction out of range");
  return resized_copy(sample, n);
}

GraphSample empty_sample(const SbmParams& params) {
  GraphSample g;
  g.directed = params.directed;
  g.adjacency.assign(params.modalities.size(), Adjacency(0, 0));
  return g;
}

}  // namespace blockspec
