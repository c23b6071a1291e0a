#pragma once

#include <Eigen/Core>
#include <vector>

#include "entroseed/seeding.hpp"

namespace entroseed {

enum class EmptyClusterPolicy {
  ReseedFarthest,  // move the empty centroid to the point farthest from it
  DropError,       // abort with a diagnostic
};

struct KMeansConfig {
  int max_iter = 300;
  double tol = 1e-4;  // centroid-shift convergence threshold
  EmptyClusterPolicy empty_cluster_policy = EmptyClusterPolicy::ReseedFarthest;
};

struct KMeansResult {
  Eigen::MatrixXd centroids;        // k x dim
  Eigen::VectorXi labels;           // nearest-centroid index per point
  double sse = 0.0;
  int nik = 0;                      // assign+update rounds to converge
  double compute_time = 0.0;        // wall-clock seconds around the fit
  std::vector<double> sse_history;  // cost after each assignment step
};

// Sum of squared Euclidean distances from each point to its assigned
// centroid. Throws DomainError on shape mismatch.
double sse(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
           const Eigen::VectorXi& labels);

// Lloyd's algorithm, instrumented. Alternates nearest-centroid assignment
// (ties to the lowest index) and mean updates until assignments stop
// changing, the largest centroid shift drops to tol, or max_iter rounds.
KMeansResult fit(const Eigen::MatrixXd& points, const CentroidSet& init,
                 const KMeansConfig& config = {});

}  // namespace entroseed
