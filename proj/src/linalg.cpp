#include "blockspec/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw Error(ErrorCode::LapackFailure, std::string(routine) + " returned " + std::to_string(info));
  }
}

void normalize_signs(TopSingular& t) {
  for (Eigen::Index j = 0; j < t.left.cols(); ++j) {
    Eigen::Index at = 0;
    t.left.col(j).cwiseAbs().maxCoeff(&at);
    if (t.left(at, j) < 0.0) {
      t.left.col(j) *= -1.0;
      t.right.col(j) *= -1.0;
    }
  }
}

struct Tridiagonal {
  Matrix reflectors;  // dsytrd output, lower storage
  std::vector<double> diag;
  std::vector<double> offdiag;
  std::vector<double> tau;
};

Tridiagonal tridiagonalize(const Matrix& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Tridiagonal t{a, std::vector<double>(std::max<lapack_int>(n, 1)),
                std::vector<double>(std::max<lapack_int>(n, 1)),
                std::vector<double>(std::max<lapack_int>(n, 1))};
  check_info(LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, t.reflectors.data(), n, t.diag.data(),
                            t.offdiag.data(), t.tau.data()),
             "dsytrd");
  return t;
}

// Ascending eigenvalues of the tridiagonal form.
std::vector<double> tridiagonal_values(const Tridiagonal& t, lapack_int n) {
  std::vector<double> d(t.diag.begin(), t.diag.begin() + n);
  std::vector<double> e(t.offdiag);
  check_info(LAPACKE_dsterf(n, d.data(), e.data()), "dsterf");
  return d;
}

// Eigenvectors of the tridiagonal form for 1-based eigenvalue indices il..iu.
Matrix tridiagonal_vectors(const Tridiagonal& t, lapack_int n, lapack_int il, lapack_int iu) {
  std::vector<double> d(t.diag.begin(), t.diag.begin() + n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.begin() + std::max<lapack_int>(n - 1, 0), e.begin());
  const lapack_int count = iu - il + 1;
  std::vector<double> w(static_cast<std::size_t>(n));
  Matrix z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  check_info(LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, il, iu,
                            &found, w.data(), z.data(), n, count, support.data(), &tryrac),
             "dstemr");
  if (found != count) throw Error(ErrorCode::LapackFailure, "dstemr returned too few vectors");
  return z;
}

TopSingular symmetric_top(const Matrix& a, int k) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Tridiagonal t = tridiagonalize(a);
  const std::vector<double> lambda = tridiagonal_values(t, n);

  // Merge from both ends of the ascending spectrum by magnitude; on ties the
  // positive end wins so the order is fixed.
  std::vector<int> order;
  order.reserve(n);
  int lo = 0;
  int hi = n - 1;
  int low_count = 0;
  while (lo <= hi) {
    if (std::abs(lambda[hi]) >= std::abs(lambda[lo])) {
      order.push_back(hi--);
    } else {
      if (static_cast<int>(order.size()) < k) ++low_count;
      order.push_back(lo++);
    }
  }

  TopSingular out;
  out.sigma.resize(n);
  for (lapack_int i = 0; i < n; ++i) out.sigma(i) = std::abs(lambda[order[i]]);
  out.left.resize(n, k);
  out.right.resize(n, k);
  if (k == 0) return out;

  const int high_count = k - low_count;

  Matrix low_vectors;
  Matrix high_vectors;
  if (low_count > 0) low_vectors = tridiagonal_vectors(t, n, 1, low_count);
  if (high_count > 0) high_vectors = tridiagonal_vectors(t, n, n - high_count + 1, n);
  Matrix picked(n, k);
  for (int j = 0; j < k; ++j) {
    const int idx = order[j];
    picked.col(j) = idx < low_count ? low_vectors.col(idx) : high_vectors.col(idx - (n - high_count));
  }
  check_info(LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', n, k, t.reflectors.data(), n,
                            t.tau.data(), picked.data(), n),
             "dormtr");
  for (int j = 0; j < k; ++j) {
    out.left.col(j) = picked.col(j);
    out.right.col(j) = lambda[order[j]] < 0.0 ? Vector(-picked.col(j)) : Vector(picked.col(j));
  }
  return out;
}

// dgesvd rather than dgesdd: the divide-and-conquer driver in some OpenBLAS
// builds returns inconsistent vectors once n exceeds its base-case size.
TopSingular general_top(const Matrix& a, int k) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Matrix work = a;
  Vector s(n);
  Matrix u(n, n);
  Matrix vt(n, n);
  std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(n - 1, 1)));
  check_info(LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', 'S', n, n, work.data(), n, s.data(), u.data(),
                            n, vt.data(), n, superb.data()),
             "dgesvd");
  TopSingular out;
  out.sigma = s;
  out.left = u.leftCols(k);
  out.right = vt.topRows(k).transpose();
  return out;
}

}  // namespace

bool is_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < a.rows(); ++i) {
      if (a(i, j) != a(j, i)) return false;
    }
  }
  return true;
}

TopSingular top_singular(const Matrix& a, int k) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionError, "matrix must be square");
  if (k < 0 || k > a.rows()) throw Error(ErrorCode::DimensionError, "k must lie in [0, n]");
  if (a.rows() == 0) return TopSingular{};
  TopSingular out = is_symmetric(a) ? symmetric_top(a, k) : general_top(a, k);
  normalize_signs(out);
  return out;
}

Vector singular_values(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionError, "matrix must be square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (n == 0) return Vector();
  if (is_symmetric(a)) {
    const std::vector<double> lambda = tridiagonal_values(tridiagonalize(a), n);
    Vector s(n);
    for (lapack_int i = 0; i < n; ++i) s(i) = std::abs(lambda[i]);
    std::sort(s.data(), s.data() + n, std::greater<>());
    return s;
  }
  Matrix work = a;
  Vector s(n);
  std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(n - 1, 1)));
  check_info(LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'N', 'N', n, n, work.data(), n, s.data(), nullptr, 1,
                            nullptr, 1, superb.data()),
             "dgesvd");
  return s;
}

}  // namespace blockspec
