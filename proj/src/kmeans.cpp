#include "entroseed/kmeans.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace entroseed {

double sse(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
           const Eigen::VectorXi& labels) {
  if (labels.size() != points.rows())
    throw DomainError("labels and points disagree on the number of rows");
  if (points.cols() != centroids.cols())
    throw DomainError("points and centroids disagree on dimensionality");
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= centroids.rows())
      throw DomainError("label out of range");
    total += (points.row(i) - centroids.row(c)).squaredNorm();
  }
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

// Assigns every point to its nearest centroid (ties broken toward the lowest
// centroid index) and returns the summed squared distances of the assignment.
double assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
              Eigen::VectorXi& labels) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_sq = (points.row(i) - centroids.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
      const double sq = (points.row(i) - centroids.row(c)).squaredNorm();
      if (sq < best_sq) {
        best_sq = sq;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    total += best_sq;
  }
  return total;
}

}  // namespace

KMeansResult fit(const Eigen::MatrixXd& points, const CentroidSet& init,
                 const KMeansConfig& config) {
  const auto start = Clock::now();
  const Eigen::Index n = points.rows();
  const Eigen::Index k = init.points.rows();
  if (n < 1) throw DomainError("no points to cluster");
  if (k < 1) throw DomainError("no initial centroids");
  if (n < k) throw DomainError("fewer points than centroids");
  if (points.cols() != init.points.cols())
    throw DomainError("points and centroids disagree on dimensionality");
  if (config.max_iter < 1) throw DomainError("max_iter must be at least 1");
  if (!(config.tol >= 0)) throw DomainError("tol must be non-negative");

  KMeansResult result;
  result.centroids = init.points;
  result.labels.resize(n);
  Eigen::VectorXi prev_labels(n);
  bool have_prev = false;

  int rounds = 0;
  bool converged = false;
  while (rounds < config.max_iter) {
    ++rounds;
    const double cost = assign(points, result.centroids, result.labels);
    result.sse_history.push_back(cost);
    if (have_prev && result.labels == prev_labels) {
      result.sse = cost;
      converged = true;
      break;
    }

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, points.cols());
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      next.row(result.labels[i]) += points.row(i);
      counts[result.labels[i]] += 1;
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        next.row(c) /= counts[c];
        continue;
      }
      if (config.empty_cluster_policy == EmptyClusterPolicy::DropError)
        throw DomainError("cluster " + std::to_string(c) +
                          " became empty at iteration " +
                          std::to_string(rounds));
      // ReseedFarthest: move the empty centroid to the point farthest from
      // its current position (lowest point index on ties).
      Eigen::Index far = 0;
      double far_sq = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sq =
            (points.row(i) - result.centroids.row(c)).squaredNorm();
        if (sq > far_sq) {
          far_sq = sq;
          far = i;
        }
      }
      next.row(c) = points.row(far);
    }

    double shift = 0.0;
    for (Eigen::Index c = 0; c < k; ++c)
      shift = std::max(shift, (next.row(c) - result.centroids.row(c)).norm());
    result.centroids = std::move(next);

    if (shift <= config.tol) {
      if (shift > 0.0) {
        const double cost_final =
            assign(points, result.centroids, result.labels);
        result.sse_history.push_back(cost_final);
        result.sse = cost_final;
      } else {
        result.sse = cost;
      }
      converged = true;
      break;
    }

    prev_labels = result.labels;
    have_prev = true;
  }

  if (!converged) {
    // max_iter exhausted after an update: realign labels to the final
    // centroids so the returned triple is self-consistent.
    const double cost_final = assign(points, result.centroids, result.labels);
    result.sse_history.push_back(cost_final);
    result.sse = cost_final;
  }

  result.nik = rounds;
  result.compute_time =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace entroseed
