#include <doctest.h>

#include <random>

#include "entroseed/kmeans.hpp"
#include "oracles.hpp"

using namespace entroseed;

namespace {

Eigen::MatrixXd points_1d(std::initializer_list<double> values) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

CentroidSet init_1d(std::initializer_list<double> values) {
  CentroidSet set;
  set.points = points_1d(values);
  set.method_tag = "test";
  return set;
}

Eigen::MatrixXd random_points(std::mt19937_64& rng, int n, int dim) {
  Eigen::MatrixXd m(n, dim);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d)
      m(i, d) = static_cast<double>(rng() % 10000) / 100.0;
  return m;
}

void check_local_optimum(const Eigen::MatrixXd& points,
                         const KMeansResult& result) {
  const Eigen::Index k = result.centroids.rows();
  // every point's label indexes a nearest centroid
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double own =
        (points.row(i) - result.centroids.row(result.labels[i])).squaredNorm();
    for (Eigen::Index c = 0; c < k; ++c) {
      const double other = (points.row(i) - result.centroids.row(c)).squaredNorm();
      CHECK(own <= other + 1e-9);
    }
  }
  // every non-empty cluster's centroid is its mean
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(k, points.cols());
  Eigen::VectorXi count = Eigen::VectorXi::Zero(k);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    mean.row(result.labels[i]) += points.row(i);
    count[result.labels[i]] += 1;
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    if (count[c] == 0) continue;
    mean.row(c) /= count[c];
    CHECK((mean.row(c) - result.centroids.row(c)).norm() <= 1e-9);
  }
}

}  // namespace

TEST_CASE("hand trace: {0,1,10,11} from {0,10}") {
  const Eigen::MatrixXd points = points_1d({0, 1, 10, 11});
  const KMeansResult result = fit(points, init_1d({0, 10}));
  CHECK(result.centroids(0, 0) == 0.5);
  CHECK(result.centroids(1, 0) == 10.5);
  CHECK(result.labels[0] == 0);
  CHECK(result.labels[1] == 0);
  CHECK(result.labels[2] == 1);
  CHECK(result.labels[3] == 1);
  CHECK(result.sse == 1.0);
  CHECK(result.nik == 2);
  REQUIRE(result.sse_history.size() == 2);
  CHECK(result.sse_history[0] == 2.0);
  CHECK(result.sse_history[1] == 1.0);
}

TEST_CASE("fixed-point initialization converges in one round") {
  const Eigen::MatrixXd points = points_1d({0, 1, 10, 11});
  const KMeansResult result = fit(points, init_1d({0.5, 10.5}));
  CHECK(result.nik == 1);
  CHECK(result.centroids(0, 0) == 0.5);
  CHECK(result.centroids(1, 0) == 10.5);
  CHECK(result.sse == 1.0);
}

TEST_CASE("sse helper evaluates hand cases") {
  const Eigen::MatrixXd points = points_1d({0, 1, 10, 11});
  Eigen::MatrixXd centroids = points_1d({0.5, 10.5});
  Eigen::VectorXi labels(4);
  labels << 0, 0, 1, 1;
  CHECK(sse(points, centroids, labels) == 1.0);

  // every point equal to its centroid
  Eigen::VectorXi self(2);
  self << 0, 1;
  const Eigen::MatrixXd two = points_1d({3, 8});
  CHECK(sse(two, two, self) == 0.0);

  // {0,1} against one centroid at 0.5
  Eigen::VectorXi zero(2);
  zero << 0, 0;
  CHECK(sse(points_1d({0, 1}), points_1d({0.5}), zero) == 0.5);

  Eigen::VectorXi bad(3);
  bad << 0, 0, 0;
  CHECK_THROWS_AS(sse(two, two, bad), DomainError);
}

TEST_CASE("assignment ties break toward the lowest centroid index") {
  const KMeansResult result = fit(points_1d({5, 5}), init_1d({0, 10}));
  // both points sit at distance 5 from both centroids: label 0 wins
  CHECK(result.labels[0] == 0);
  CHECK(result.labels[1] == 0);
}

TEST_CASE("empty clusters reseed to the farthest point by default") {
  // Centroid 1 starts far right of every point, captures nothing after the
  // first assignment, and must be reseeded for the fit to proceed.
  const Eigen::MatrixXd points = points_1d({0, 0, 0, 100});
  const KMeansResult result = fit(points, init_1d({0, 300}));
  check_local_optimum(points, result);
  CHECK(result.sse == 0.0);

  KMeansConfig strict;
  strict.empty_cluster_policy = EmptyClusterPolicy::DropError;
  CHECK_THROWS_AS(fit(points, init_1d({0, 300}), strict), DomainError);
}

TEST_CASE("oracle conformance on random small instances") {
  std::mt19937_64 rng(47);
  KMeansConfig config;
  config.tol = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 2);
    const int n = k + static_cast<int>(rng() % (13 - k));
    const int dim = 1 + static_cast<int>(rng() % 2);
    const Eigen::MatrixXd points = random_points(rng, n, dim);
    const CentroidSet init = random_seed(points, k, trial + 1);
    const KMeansResult result = fit(points, init, config);

    // per-iteration SSE monotone non-increasing
    for (std::size_t i = 1; i < result.sse_history.size(); ++i)
      CHECK(result.sse_history[i] <=
            result.sse_history[i - 1] + 1e-9 * result.sse_history[i - 1]);

    check_local_optimum(points, result);

    // recomputed SSE consistency
    CHECK(std::abs(sse(points, result.centroids, result.labels) - result.sse) <=
          1e-9 * std::max(1.0, result.sse));

    // never better than the exhaustive global optimum
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < dim; ++d) pts[i][d] = points(i, d);
    const double best = oracles::exhaustive_best_sse(pts, k);
    CHECK(result.sse >= best - 1e-9 * std::max(1.0, best));

    CHECK(result.nik >= 1);
    CHECK(result.nik <= config.max_iter);
  }
}

TEST_CASE("fit is deterministic") {
  std::mt19937_64 rng(53);
  const Eigen::MatrixXd points = random_points(rng, 40, 3);
  const CentroidSet init = random_seed(points, 4, 9);
  const KMeansResult a = fit(points, init);
  const KMeansResult b = fit(points, init);
  CHECK(a.centroids == b.centroids);
  CHECK(a.labels == b.labels);
  CHECK(a.sse == b.sse);
  CHECK(a.nik == b.nik);
}

TEST_CASE("fit validates inputs") {
  const Eigen::MatrixXd points = points_1d({1, 2});
  CHECK_THROWS_AS(fit(points, init_1d({0, 1, 2})), DomainError);
  CHECK_THROWS_AS(fit(Eigen::MatrixXd(0, 1), init_1d({0})), DomainError);
  CentroidSet wrong_dim;
  wrong_dim.points = Eigen::MatrixXd::Zero(1, 2);
  CHECK_THROWS_AS(fit(points, wrong_dim), DomainError);
  KMeansConfig bad;
  bad.max_iter = 0;
  CHECK_THROWS_AS(fit(points, init_1d({0, 1}), bad), DomainError);
}

TEST_CASE("max_iter cap still returns a self-consistent result") {
  std::mt19937_64 rng(59);
  const Eigen::MatrixXd points = random_points(rng, 30, 2);
  KMeansConfig config;
  config.max_iter = 2;
  config.tol = 0.0;
  const KMeansResult result = fit(points, random_seed(points, 3, 5), config);
  CHECK(result.nik == 2);
  CHECK(std::abs(sse(points, result.centroids, result.labels) - result.sse) <=
        1e-12 * std::max(1.0, result.sse));
}
