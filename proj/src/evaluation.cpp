#include "blockspec/evaluation.hpp"

#include <algorithm>
#include <limits>

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

int max_label(const Labels& labels) {
  int m = 0;
  for (int l : labels) {
    if (l < 1) throw Error(ErrorCode::DimensionError, "labels must be positive");
    m = std::max(m, l);
  }
  return m;
}

}  // namespace

ConfusionMatrix confusion_matrix(const Labels& tau, const Labels& tau_hat) {
  if (tau.size() != tau_hat.size()) {
    throw Error(ErrorCode::LengthMismatch, "label vectors differ in length");
  }
  ConfusionMatrix c;
  c.counts = Eigen::MatrixXi::Zero(max_label(tau), max_label(tau_hat));
  for (std::size_t j = 0; j < tau.size(); ++j) ++c.counts(tau[j] - 1, tau_hat[j] - 1);
  return c;
}

long long max_weight_assignment(const Eigen::MatrixXi& weights) {
  const int n = static_cast<int>(weights.rows());
  if (weights.cols() != n) throw Error(ErrorCode::DimensionError, "assignment needs a square matrix");
  if (n == 0) return 0;
  // Minimise cost = -weight. Rows and columns are 1-based inside the loop;
  // slot 0 is the virtual column used while augmenting.
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const int r0 = match[col0];
      long long delta = kInf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const long long cur = -static_cast<long long>(weights(r0 - 1, col - 1)) - u[r0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  long long total = 0;
  for (int col = 1; col <= n; ++col) total += weights(match[col] - 1, col - 1);
  return total;
}

long long misassignment_count(const Labels& tau, const Labels& tau_hat) {
  const ConfusionMatrix c = confusion_matrix(tau, tau_hat);
  const auto size = std::max(c.counts.rows(), c.counts.cols());
  Eigen::MatrixXi square = Eigen::MatrixXi::Zero(size, size);
  square.topLeftCorner(c.counts.rows(), c.counts.cols()) = c.counts;
  return static_cast<long long>(tau.size()) - max_weight_assignment(square);
}

double misassignment_fraction(const Labels& tau, const Labels& tau_hat) {
  if (tau.empty()) return 0.0;
  return static_cast<double>(misassignment_count(tau, tau_hat)) / static_cast<double>(tau.size());
}

}  // namespace blockspec
