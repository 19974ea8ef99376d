#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "blockspec/blockspec.hpp"

namespace fixtures {

inline blockspec::SbmParams param1() {
  blockspec::Matrix m(3, 3);
  m << 0.205, 0.045, 0.150, 0.045, 0.205, 0.150, 0.150, 0.150, 0.180;
  return {3, {0.3, 0.3, 0.4}, {m}, false};
}

inline blockspec::SbmParams kest() {
  blockspec::Matrix m(3, 3);
  m << 0.5, 0.1, 0.1, 0.1, 0.5, 0.1, 0.1, 0.1, 0.5;
  return {3, {0.3, 0.3, 0.4}, {m}, false};
}

inline blockspec::Matrix random_matrix(blockspec::Engine& e, int rows, int cols,
                                       double scale = 1.0) {
  blockspec::Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = scale * (2.0 * blockspec::uniform01(e) - 1.0);
  }
  return m;
}

inline blockspec::Labels random_labels(blockspec::Engine& e, int n, int k) {
  blockspec::Labels l(n);
  for (int& x : l) x = static_cast<int>(blockspec::uniform_index(e, k)) + 1;
  return l;
}

// Misassignment by enumerating every bijection between padded label sets.
inline long long brute_force_misassignment(const blockspec::Labels& tau,
                                           const blockspec::Labels& hat) {
  const int k = std::max(*std::max_element(tau.begin(), tau.end()),
                         *std::max_element(hat.begin(), hat.end()));
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  long long best = 0;
  do {
    long long agree = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) agree += (perm[hat[i] - 1] == tau[i] - 1) ? 1 : 0;
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<long long>(tau.size()) - best;
}

// Minimum SSE by enumerating all k^n label vectors.
inline double brute_force_sse(const blockspec::Matrix& z, int k) {
  const int n = static_cast<int>(z.rows());
  std::vector<int> lab(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double sse = 0.0;
    for (int p = 0; p < k; ++p) {
      blockspec::Vector mean = blockspec::Vector::Zero(z.cols());
      int count = 0;
      for (int i = 0; i < n; ++i) {
        if (lab[i] == p) {
          mean += z.row(i).transpose();
          ++count;
        }
      }
      if (count == 0) continue;
      mean /= count;
      for (int i = 0; i < n; ++i) {
        if (lab[i] == p) sse += (z.row(i).transpose() - mean).squaredNorm();
      }
    }
    best = std::min(best, sse);
    int pos = 0;
    while (pos < n && ++lab[pos] == k) lab[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

// Error code thrown by f, or nullopt when f returns normally.
template <typename F>
std::optional<blockspec::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const blockspec::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace fixtures
