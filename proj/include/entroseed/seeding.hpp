#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "entroseed/entropy.hpp"
#include "entroseed/pixel_grid.hpp"

namespace entroseed {

enum class ExhaustionPolicy {
  Strict,    // error out when the sorted list empties before k seeds
  Adaptive,  // halve th and rescan until k found or th < 1
};

struct SeedingConfig {
  int k = 2;
  // Minimum pairwise Euclidean spacing in intensity space. Negative means
  // "use the default": half the intensity-space diameter for the grid's
  // channel count (about 220 for RGB).
  double th = -1.0;
  EntropySpec spec;
  ExhaustionPolicy exhaustion_policy = ExhaustionPolicy::Adaptive;
};

double default_threshold(int channels);

// Ordered seed points in intensity feature space; rows are centroids.
struct CentroidSet {
  Eigen::MatrixXd points;      // k x channels
  std::string method_tag;
  double effective_th = 0.0;   // final threshold after any adaptation
  double init_time = 0.0;      // wall-clock seconds for the whole seeding

  int k() const { return static_cast<int>(points.rows()); }
};

// Smallest pairwise Euclidean distance between rows (infinity for < 2 rows).
double min_pairwise_distance(const Eigen::MatrixXd& points);

// Entropy-maximization seeding: scores every pixel, sorts descending
// (ties by row-major index), accepts the first pixel unconditionally and then
// every pixel whose minimum distance to the accepted set exceeds the
// threshold, until k are found. Throws ExhaustionError when the candidate
// list runs out (strict mode) or adaptation bottoms out below th = 1.
CentroidSet entropy_seed(const PixelGrid& grid, const SeedingConfig& config);

// k distinct pixel positions drawn uniformly without replacement from a
// generator seeded by rng_seed.
CentroidSet random_seed(const PixelGrid& grid, int k, std::uint64_t rng_seed);

// Same draw over the rows of an arbitrary point matrix.
CentroidSet random_seed(const Eigen::MatrixXd& points, int k,
                        std::uint64_t rng_seed);

}  // namespace entroseed
