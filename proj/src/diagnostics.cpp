#include "blockspec/diagnostics.hpp"

#include <cmath>

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

void require_orthonormal(const Matrix& u, const char* which) {
  const Matrix gram = u.transpose() * u;
  const double err = (gram - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
  if (u.cols() > 0 && err > 1e-8) {
    throw Error(ErrorCode::NotOrthonormal, std::string(which) + " columns are not orthonormal");
  }
}

}  // namespace

BoundReport make_report(std::string name, double lhs, double rhs, int n, const Seed& seed) {
  return BoundReport{std::move(name), lhs, rhs, lhs <= rhs, rhs - lhs, n, seed};
}

Matrix probability_matrix(const Labels& tau, const Matrix& m) {
  const auto n = static_cast<Eigen::Index>(tau.size());
  Matrix p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) p(i, j) = m(tau[i] - 1, tau[j] - 1);
  }
  return p;
}

NoiselessSpectrum noiseless_spectrum(const Labels& tau, const Matrix& m) {
  const auto K = m.rows();
  Vector counts = Vector::Zero(K);
  for (int t : tau) counts(t - 1) += 1.0;
  const Vector root = counts.cwiseSqrt();
  const Matrix core = root.asDiagonal() * m * root.asDiagonal();
  Eigen::JacobiSVD<Matrix> svd(core, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0) r = static_cast<int>((s.array() > kRankTolerance * s(0)).count());

  // Row i of Z D^-1/2 is e_{tau(i)} / sqrt(n_tau(i)).
  const auto n = static_cast<Eigen::Index>(tau.size());
  NoiselessSpectrum out;
  out.values = s.head(r);
  out.U.resize(n, r);
  out.V.resize(n, r);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int b = tau[i] - 1;
    out.U.row(i) = svd.matrixU().row(b).head(r) / root(b);
    out.V.row(i) = svd.matrixV().row(b).head(r) / root(b);
  }
  for (int j = 0; j < r; ++j) {
    Eigen::Index at = 0;
    out.U.col(j).cwiseAbs().maxCoeff(&at);
    if (out.U(at, j) < 0.0) {
      out.U.col(j) *= -1.0;
      out.V.col(j) *= -1.0;
    }
  }
  return out;
}

std::vector<BoundReport> check_lemma1(const Matrix& a, const Matrix& p) {
  if (a.rows() != p.rows() || a.cols() != p.cols() || a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionError, "A and P must be square with equal shape");
  }
  const auto n = static_cast<int>(a.rows());
  const double nn = static_cast<double>(n);
  const double rhs = std::sqrt(3.0) * std::pow(nn, 1.5) * std::sqrt(std::log(nn));
  const Matrix left = a * a.transpose() - p * p.transpose();
  const Matrix right = a.transpose() * a - p.transpose() * p;
  return {make_report("lemma1_left_gram", left.norm(), rhs, n),
          make_report("lemma1_right_gram", right.norm(), rhs, n)};
}

std::vector<BoundReport> check_lemma2(const NoiselessSpectrum& noiseless, int n,
                                      const ModelConstants& constants) {
  const auto r = noiseless.values.size();
  const double top = r > 0 ? noiseless.values(0) : 0.0;
  const double low = r > 0 ? noiseless.values(r - 1) : 0.0;
  return {make_report("lemma2_noiseless_top_le_n", top, n, n),
          make_report("lemma2_noiseless_rank_ge_alpha_gamma_n", constants.alpha * constants.gamma * n,
                      low, n)};
}

std::vector<BoundReport> check_corollary3(const Vector& sigma, int n, int rank_m,
                                          const ModelConstants& constants) {
  const double nn = static_cast<double>(n);
  auto at = [&](int one_based) { return one_based <= sigma.size() ? sigma(one_based - 1) : 0.0; };
  const double tail = std::pow(3.0, 0.25) * std::pow(nn, 0.75) * std::pow(std::log(nn), 0.25);
  return {make_report("cor3_sigma1_le_n", at(1), nn, n),
          make_report("cor3_sigma_rank_ge_alpha_gamma_n", constants.alpha * constants.gamma * nn,
                      at(rank_m), n),
          make_report("cor3_sigma_rank_plus_one", at(rank_m + 1), tail, n)};
}

double procrustes_residual(const Matrix& u_noiseless, const Matrix& u_sample) {
  if (u_noiseless.rows() != u_sample.rows() || u_noiseless.cols() != u_sample.cols()) {
    throw Error(ErrorCode::DimensionError, "Procrustes inputs differ in shape");
  }
  require_orthonormal(u_noiseless, "noiseless");
  require_orthonormal(u_sample, "sample");
  if (u_noiseless.cols() == 0) return 0.0;
  // ||U0 Q - U1||_F^2 = 2r - 2 tr(Q^T U0^T U1), maximised by Q = W T^T.
  Eigen::JacobiSVD<Matrix> svd(u_noiseless.transpose() * u_sample,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix q = svd.matrixU() * svd.matrixV().transpose();
  return (u_noiseless * q - u_sample).norm();
}

double procrustes_bound(int n, const ModelConstants& constants) {
  const double nn = static_cast<double>(n);
  const double ag = constants.alpha * constants.gamma;
  return std::sqrt(6.0) / (ag * ag) * std::sqrt(std::log(nn) / nn);
}

BoundReport check_corollary5(const Matrix& u_noiseless, const Matrix& u_sample, int n,
                             const ModelConstants& constants) {
  return make_report("cor5_procrustes", procrustes_residual(u_noiseless, u_sample),
                     procrustes_bound(n, constants), n);
}

BoundReport check_center_block(const Matrix& x, const Vector& sigma, int r) {
  const auto R = static_cast<int>(x.cols());
  if (r < 0 || r > R) throw Error(ErrorCode::DimensionError, "rank split outside [0, R]");
  const double lhs = x.rightCols(R - r).norm();
  const double next = r < sigma.size() ? sigma(r) : 0.0;
  return make_report("center_block_norm", lhs, std::sqrt(static_cast<double>(R - r) * next),
                     static_cast<int>(x.rows()));
}

}  // namespace blockspec
