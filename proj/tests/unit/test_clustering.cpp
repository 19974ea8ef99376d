#include "doctest.h"
#include "fixtures.hpp"

using namespace blockspec;
using fixtures::error_of;

namespace {

void check_clustering_invariants(const Matrix& z, const Clustering& c) {
  REQUIRE(static_cast<Eigen::Index>(c.assignment.size()) == z.rows());
  CHECK(c.centroids.rows() == c.k_parts);
  const Matrix fitted = c.fitted();
  CHECK(c.objective == doctest::Approx((fitted - z).squaredNorm()).epsilon(1e-9));
  const auto sizes = c.part_sizes();
  for (int l = 1; l <= c.k_parts; ++l) {
    if (sizes[l - 1] == 0) continue;
    Vector mean = Vector::Zero(z.cols());
    for (int i = 0; i < z.rows(); ++i) {
      if (c.assignment[i] == l) mean += z.row(i).transpose();
    }
    mean /= sizes[l - 1];
    CHECK((c.centroids.row(l - 1).transpose() - mean).norm() <= 1e-9);
  }
  int distinct = 0;
  for (int i = 0; i < fitted.rows(); ++i) {
    bool seen = false;
    for (int j = 0; j < i && !seen; ++j) seen = (fitted.row(i) - fitted.row(j)).norm() <= 1e-12;
    distinct += seen ? 0 : 1;
  }
  CHECK(distinct <= c.k_parts);
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("exact_min_sse small cases") {
  Matrix z(4, 2);
  z << 0, 0, 0, 1, 10, 0, 10, 1;
  const Clustering c = exact_min_sse(z, 2);
  CHECK(c.objective == doctest::Approx(1.0));
  CHECK(assignment_from_clustering(c) == Labels{1, 1, 2, 2});
  check_clustering_invariants(z, c);

  Engine e = make_engine({1, 1});
  const Matrix r = fixtures::random_matrix(e, 7, 3);
  const Clustering all = exact_min_sse(r, 7);
  CHECK(all.objective <= 1e-20);
  const Clustering one = exact_min_sse(r, 1);
  CHECK((one.centroids.row(0) - r.colwise().mean()).norm() <= 1e-12);
  CHECK(one.objective == doctest::Approx((r.rowwise() - r.colwise().mean()).squaredNorm()));

  CHECK(error_of([] { exact_min_sse(Matrix::Zero(15, 1), 2); }) == ErrorCode::TooLargeForExact);
  CHECK_FALSE(error_of([] { exact_min_sse(Matrix::Zero(15, 1), 2, 15); }));
}

TEST_CASE("exact_min_sse matches brute force over all label vectors") {
  Engine e = make_engine({2, 2});
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(e, 7));
    const int d = 1 + static_cast<int>(uniform_index(e, 3));
    const int k = 1 + static_cast<int>(uniform_index(e, std::min(n, 4)));
    const Matrix z = fixtures::random_matrix(e, n, d);
    const Clustering c = exact_min_sse(z, k);
    CHECK(c.objective == doctest::Approx(fixtures::brute_force_sse(z, k)).epsilon(1e-9));
    check_clustering_invariants(z, c);
  }
}

TEST_CASE("exact objective is invariant to orthogonal transforms") {
  Engine e = make_engine({3, 3});
  for (int t = 0; t < 30; ++t) {
    const Matrix z = fixtures::random_matrix(e, 9, 3);
    Eigen::HouseholderQR<Matrix> qr(fixtures::random_matrix(e, 3, 3));
    const Matrix q = qr.householderQ();
    const double a = exact_min_sse(z, 3).objective;
    const double b = exact_min_sse(z * q, 3).objective;
    CHECK(std::abs(a - b) <= 1e-8);
  }
}

TEST_CASE("lloyd_cluster matches the exact optimum on random small instances") {
  Engine e = make_engine({4, 4});
  int matches = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(e, 11));
    const int d = 1 + static_cast<int>(uniform_index(e, 3));
    const int k = 1 + static_cast<int>(uniform_index(e, std::min(n, 4)));
    const Matrix z = fixtures::random_matrix(e, n, d);
    const Clustering lc = lloyd_cluster(z, k, LloydOptions{}, {static_cast<std::uint64_t>(t), 9});
    check_clustering_invariants(z, lc);
    const double exact = exact_min_sse(z, k).objective;
    CHECK(lc.objective >= exact - 1e-9);
    matches += (lc.objective - exact <= 1e-9) ? 1 : 0;
  }
  CHECK(matches >= trials * 99 / 100);
}

TEST_CASE("lloyd recovers well separated planted clusters") {
  Engine e = make_engine({5, 5});
  const int k = 4;
  Matrix z(k * 10, 2);
  Labels truth;
  for (int p = 0; p < k; ++p) {
    for (int i = 0; i < 10; ++i) {
      z(p * 10 + i, 0) = 10.0 * p + 0.01 * uniform01(e);
      z(p * 10 + i, 1) = 10.0 * (p % 2) + 0.01 * uniform01(e);
      truth.push_back(p + 1);
    }
  }
  const Clustering c = lloyd_cluster(z, k, LloydOptions{}, {5, 0});
  CHECK(misassignment_count(truth, c.assignment) == 0);
}

TEST_CASE("duplicate rows share a label") {
  Engine e = make_engine({6, 6});
  for (int t = 0; t < 20; ++t) {
    Matrix z = fixtures::random_matrix(e, 12, 2);
    z.row(7) = z.row(2);
    z.row(11) = z.row(2);
    const Clustering c = lloyd_cluster(z, 3, LloydOptions{10, 300, 1e-9}, {6, static_cast<std::uint64_t>(t)});
    CHECK(c.assignment[2] == c.assignment[7]);
    CHECK(c.assignment[2] == c.assignment[11]);
  }
}

TEST_CASE("Lloyd objective never increases within a restart") {
  Engine e = make_engine({7, 7});
  for (int t = 0; t < 30; ++t) {
    const Matrix z = fixtures::random_matrix(e, 80, 3);
    Engine s = make_engine({7, static_cast<std::uint64_t>(t)});
    const LloydRun run = lloyd_refine(z, seed_centroids(z, 5, s), LloydOptions{});
    for (std::size_t i = 1; i < run.objective_history.size(); ++i) {
      CHECK(run.objective_history[i] <= run.objective_history[i - 1] * (1 + 1e-12));
    }
    check_clustering_invariants(z, run.result);
  }
}

TEST_CASE("lloyd_cluster is deterministic given its seed") {
  Engine e = make_engine({8, 8});
  const Matrix z = fixtures::random_matrix(e, 100, 3);
  const Clustering a = lloyd_cluster(z, 4, LloydOptions{}, {8, 1});
  const Clustering b = lloyd_cluster(z, 4, LloydOptions{}, {8, 1});
  CHECK(a.assignment == b.assignment);
  CHECK(a.objective == b.objective);
}

TEST_CASE("assignment_from_clustering renumbers canonically") {
  Clustering c;
  c.k_parts = 2;
  c.assignment = {2, 2, 1, 1};
  c.centroids = Matrix::Zero(2, 1);
  CHECK(assignment_from_clustering(c) == Labels{1, 1, 2, 2});

  c.k_parts = 1;
  c.assignment = {1, 1, 1};
  CHECK(assignment_from_clustering(c) == Labels{1, 1, 1});

  // Empty labels vanish and the map is a bijection on nonempty parts.
  c.k_parts = 5;
  c.assignment = {5, 3, 5, 1, 3};
  c.centroids = Matrix::Zero(5, 1);
  const Labels r = assignment_from_clustering(c);
  CHECK(r == Labels{1, 2, 1, 3, 2});
  CHECK(misassignment_count(c.assignment, r) == 0);
}

TEST_CASE("separation and part sizes") {
  Clustering c;
  c.k_parts = 3;
  c.assignment = {1, 1, 2, 3, 3, 3};
  c.centroids.resize(3, 2);
  c.centroids << 0, 0, 3, 4, 0, 1;
  CHECK(centroid_separation(c) == doctest::Approx(1.0));
  CHECK(min_part_size(c) == 1);
  c.k_parts = 1;
  c.assignment.assign(6, 1);
  c.centroids = Matrix::Zero(1, 2);
  CHECK(std::isinf(centroid_separation(c)));
}

}  // TEST_SUITE
