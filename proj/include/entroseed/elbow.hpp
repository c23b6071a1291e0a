#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entroseed/kmeans.hpp"

namespace entroseed {

struct ElbowEntry {
  int k = 0;
  double inertia = 0.0;     // converged SSE
  double dispersion = 0.0;  // SSE / |points|
};

struct ElbowCurve {
  std::vector<ElbowEntry> entries;  // k strictly increasing
  std::string seeding_used;
};

// Produces the k initial centroids for one sweep step.
using Seeder = std::function<CentroidSet(int k)>;

// Runs fit for every k in [k_min, k_max] and records the cost curve.
ElbowCurve k_sweep(const Eigen::MatrixXd& points, int k_min, int k_max,
                   const Seeder& seeder, const KMeansConfig& config = {});

// The interior k maximizing the discrete second difference of inertia,
// provided that maximum is positive; nullopt on a curvature-free curve.
// Throws DomainError with fewer than 3 entries.
std::optional<int> detect_elbow(const ElbowCurve& curve);

enum class ElbowCost { Inertia, Dispersion };

// Two-column plot data: k and the chosen cost, tab-separated.
void write_curve(const ElbowCurve& curve, std::ostream& out,
                 ElbowCost cost = ElbowCost::Inertia);

}  // namespace entroseed
