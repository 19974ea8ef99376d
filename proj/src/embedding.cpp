#include "blockspec/embedding.hpp"

#include <cmath>

#include "blockspec/error.hpp"
#include "blockspec/linalg.hpp"

namespace blockspec {

Matrix to_dense(const Adjacency& a) { return a.cast<double>(); }

ModalityEmbedding ModalityEmbedding::truncated(int r) const {
  if (r < 1 || r > R) throw Error(ErrorCode::DimensionError, "truncation must lie in [1, R]");
  return ModalityEmbedding{r, sigma, X.leftCols(r), Y.leftCols(r)};
}

ModalityEmbedding svd_embed(const Matrix& a, int R) {
  const auto n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::DimensionError, "adjacency must be square");
  if (R < 1 || R > n) {
    throw Error(ErrorCode::DimensionError,
                "embedding dimension " + std::to_string(R) + " outside [1, " + std::to_string(n) + "]");
  }
  TopSingular top = top_singular(a, R);
  // Roundoff can leave tiny negative values on a numerically zero spectrum.
  const Vector root = top.sigma.head(R).cwiseMax(0.0).cwiseSqrt();
  ModalityEmbedding e;
  e.R = R;
  e.sigma = std::move(top.sigma);
  e.X = top.left * root.asDiagonal();
  e.Y = top.right * root.asDiagonal();
  return e;
}

ModalityEmbedding svd_embed(const Adjacency& a, int R) { return svd_embed(to_dense(a), R); }

Matrix assemble_features(std::span<const ModalityEmbedding> embeddings, KnowledgeMode mode) {
  if (embeddings.empty()) throw Error(ErrorCode::EmptyInput, "no embeddings to assemble");
  const auto n = embeddings.front().X.rows();
  Eigen::Index width = 0;
  for (const auto& e : embeddings) {
    if (e.X.rows() != n || e.Y.rows() != n) {
      throw Error(ErrorCode::DimensionError, "embeddings disagree on vertex count");
    }
    width += e.R;
  }
  const bool use_x = mode != KnowledgeMode::ColumnsDistinct;
  const bool use_y = mode != KnowledgeMode::RowsDistinct;
  Matrix z(n, width * ((use_x ? 1 : 0) + (use_y ? 1 : 0)));
  Eigen::Index at = 0;
  if (use_x) {
    for (const auto& e : embeddings) {
      z.middleCols(at, e.R) = e.X;
      at += e.R;
    }
  }
  if (use_y) {
    for (const auto& e : embeddings) {
      z.middleCols(at, e.R) = e.Y;
      at += e.R;
    }
  }
  return z;
}

Matrix embed_sample(const GraphSample& sample, std::span<const int> R, KnowledgeMode mode) {
  if (R.size() != sample.adjacency.size()) {
    throw Error(ErrorCode::DimensionError, "need one embedding dimension per modality");
  }
  std::vector<ModalityEmbedding> parts;
  parts.reserve(R.size());
  for (std::size_t s = 0; s < R.size(); ++s) parts.push_back(svd_embed(sample.adjacency[s], R[s]));
  return assemble_features(parts, mode);
}

int estimate_rank(const Vector& sigma, int n, double omega) {
  if (!(omega > 0.75 && omega < 1.0)) {
    throw Error(ErrorCode::OmegaOutOfRange, "omega must lie in (3/4, 1)");
  }
  const double cut = std::pow(static_cast<double>(n), omega);
  return static_cast<int>((sigma.array() > cut).count());
}

}  // namespace blockspec
