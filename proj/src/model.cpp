#include "blockspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

std::string pair_text(int p, int q) {
  std::ostringstream os;
  os << "blocks " << p + 1 << " and " << q + 1;
  return os.str();
}

double min_eigenvalue_of_gram(const Matrix& f) {
  if (f.cols() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(f.transpose() * f, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

bool rows_differ(const Matrix& m, int p, int q) {
  return (m.row(p) - m.row(q)).norm() > kEqualityTolerance;
}

SbmParams validate_params(const SbmParams& raw) {
  if (raw.K < 1) throw Error(ErrorCode::RhoInvalid, "K must be a positive integer");
  if (static_cast<int>(raw.rho.size()) != raw.K) {
    throw Error(ErrorCode::RhoInvalid, "rho must have exactly K entries");
  }
  double total = 0.0;
  for (double r : raw.rho) {
    if (!(r > 0.0)) throw Error(ErrorCode::RhoInvalid, "every rho entry must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > kRhoSumTolerance) {
    std::ostringstream os;
    os << "rho sums to " << total << ", expected 1";
    throw Error(ErrorCode::RhoInvalid, os.str());
  }
  if (raw.modalities.empty()) {
    throw Error(ErrorCode::EmptyInput, "at least one communication matrix is required");
  }
  for (const Matrix& m : raw.modalities) {
    if (m.rows() != raw.K || m.cols() != raw.K) {
      throw Error(ErrorCode::DimensionError, "communication matrices must be K x K");
    }
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double v = m.data()[i];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::EntryOutOfRange, "communication probabilities must lie in [0,1]");
      }
    }
    if (!raw.directed && (m - m.transpose()).cwiseAbs().maxCoeff() > 0.0) {
      throw Error(ErrorCode::SymmetryViolation, "undirected model needs symmetric matrices");
    }
  }
  for (int p = 0; p < raw.K; ++p) {
    for (int q = p + 1; q < raw.K; ++q) {
      const bool distinguishable = std::any_of(
          raw.modalities.begin(), raw.modalities.end(), [&](const Matrix& m) {
            const Matrix mt = m.transpose();
            return rows_differ(m, p, q) || rows_differ(mt, p, q);
          });
      if (!distinguishable) {
        throw Error(ErrorCode::NotIdentifiable, pair_text(p, q) + " are indistinguishable");
      }
    }
  }
  return raw;
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cut = rel_tol * s(0);
  return static_cast<int>((s.array() > cut).count());
}

LatentFactors factorize(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0) r = static_cast<int>((s.array() > kRankTolerance * s(0)).count());
  const Vector root = s.head(r).cwiseSqrt();
  LatentFactors out;
  out.rank = r;
  out.mu = svd.matrixU().leftCols(r) * root.asDiagonal();
  out.nu = svd.matrixV().leftCols(r) * root.asDiagonal();
  return out;
}

std::vector<LatentFactors> factorize_all(const SbmParams& params) {
  std::vector<LatentFactors> out;
  out.reserve(params.modalities.size());
  for (const Matrix& m : params.modalities) out.push_back(factorize(m));
  return out;
}

ModelConstants compute_constants(const SbmParams& params, std::span<const LatentFactors> factors) {
  ModelConstants c;
  c.alpha = kConstantShrink * *std::min_element(params.rho.begin(), params.rho.end());

  double min_sep = std::numeric_limits<double>::infinity();
  double min_eig = std::numeric_limits<double>::infinity();
  for (const LatentFactors& f : factors) {
    for (const Matrix* side : {&f.mu, &f.nu}) {
      for (Eigen::Index p = 0; p < side->rows(); ++p) {
        for (Eigen::Index q = p + 1; q < side->rows(); ++q) {
          const double d = (side->row(p) - side->row(q)).norm();
          if (d > kEqualityTolerance) min_sep = std::min(min_sep, d);
        }
      }
      min_eig = std::min(min_eig, min_eigenvalue_of_gram(*side));
    }
  }
  if (!(min_eig > 0.0) || !(min_sep > 0.0)) {
    throw Error(ErrorCode::DegenerateFactors, "latent factors give nonpositive beta or gamma");
  }
  c.beta = std::isinf(min_sep) ? min_sep : kConstantShrink * min_sep;
  c.gamma = kConstantShrink * min_eig;
  return c;
}

ModelConstants compute_constants(const SbmParams& params) {
  const auto factors = factorize_all(params);
  return compute_constants(params, factors);
}

}  // namespace blockspec
