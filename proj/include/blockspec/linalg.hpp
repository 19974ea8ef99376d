#pragma once

#include "blockspec/types.hpp"

namespace blockspec {

// All singular values of a square matrix plus its leading k singular vector
// pairs. Columns of left/right are unit vectors ordered with sigma, and each
// pair is sign-normalized so the largest-magnitude entry of the left vector
// is positive.
struct TopSingular {
  Vector sigma;
  Matrix left;
  Matrix right;
};

/// Exact dense factorization. Symmetric input goes through a symmetric
/// eigendecomposition that only forms the k wanted eigenvectors; other input
/// through a full dense SVD (dgesvd).
TopSingular top_singular(const Matrix& a, int k);

/// All singular values, nonincreasing.
Vector singular_values(const Matrix& a);

bool is_symmetric(const Matrix& a);

}  // namespace blockspec
