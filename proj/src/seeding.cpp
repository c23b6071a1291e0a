#include "entroseed/seeding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace entroseed {

double default_threshold(int channels) {
  // Half the intensity-space diameter: 0.5 * 255 * sqrt(channels).
  return 0.5 * 255.0 * std::sqrt(static_cast<double>(channels));
}

double min_pairwise_distance(const Eigen::MatrixXd& points) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < points.rows(); ++j)
      best = std::min(best, (points.row(i) - points.row(j)).norm());
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double distance(const PixelGrid& grid, int pixel, const Eigen::RowVectorXd& c) {
  const std::uint8_t* p = grid.pixel(pixel);
  double sq = 0.0;
  for (int ch = 0; ch < grid.channels; ++ch) {
    const double d = static_cast<double>(p[ch]) - c[ch];
    sq += d * d;
  }
  return std::sqrt(sq);
}

// One greedy pass over the sorted candidate list: accepts every pixel whose
// minimum distance to the accepted set exceeds th (the very first acceptance
// is unconditional), stopping at k.
void greedy_pass(const PixelGrid& grid, const std::vector<int>& order,
                 double th, int k, std::vector<int>& accepted,
                 Eigen::MatrixXd& centroids) {
  std::vector<char> taken(grid.pixel_count(), 0);
  for (int idx : accepted) taken[idx] = 1;

  for (int idx : order) {
    if (static_cast<int>(accepted.size()) == k) break;
    if (taken[idx]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < accepted.size(); ++j) {
      if (!(distance(grid, idx, centroids.row(j)) > th)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const std::uint8_t* p = grid.pixel(idx);
    for (int ch = 0; ch < grid.channels; ++ch)
      centroids(static_cast<Eigen::Index>(accepted.size()), ch) = p[ch];
    accepted.push_back(idx);
    taken[idx] = 1;
  }
}

// Unbiased draw from [0, n) via rejection; avoids the distribution types
// whose output is implementation-defined.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t rem = (UINT64_MAX % n + 1) % n;
  const std::uint64_t limit = UINT64_MAX - rem;
  std::uint64_t v;
  do {
    v = rng();
  } while (v > limit);
  return v % n;
}

std::vector<int> draw_without_replacement(int population, int k,
                                          std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::vector<int> indices(population);
  std::iota(indices.begin(), indices.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(bounded(rng, population - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(k);
  return indices;
}

}  // namespace

CentroidSet entropy_seed(const PixelGrid& grid, const SeedingConfig& config) {
  check_grid(grid);
  if (config.k < 1) throw DomainError("k must be at least 1");
  double th = config.th < 0 ? default_threshold(grid.channels) : config.th;

  const auto start = Clock::now();
  const Eigen::ArrayXd scores = pixel_scores(grid, config.spec);

  const int n = grid.pixel_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });

  std::vector<int> accepted;
  accepted.reserve(config.k);
  Eigen::MatrixXd centroids(config.k, grid.channels);

  greedy_pass(grid, order, th, config.k, accepted, centroids);
  if (config.exhaustion_policy == ExhaustionPolicy::Strict) {
    if (static_cast<int>(accepted.size()) < config.k)
      throw ExhaustionError(
          "seeding exhausted: found " + std::to_string(accepted.size()) +
              " of " + std::to_string(config.k) + " centroids at th = " +
              std::to_string(th),
          static_cast<int>(accepted.size()));
  } else {
    while (static_cast<int>(accepted.size()) < config.k) {
      th /= 2.0;
      if (th < 1.0)
        throw ExhaustionError(
            "seeding exhausted: found " + std::to_string(accepted.size()) +
                " of " + std::to_string(config.k) +
                " centroids with adaptive threshold below 1",
            static_cast<int>(accepted.size()));
      greedy_pass(grid, order, th, config.k, accepted, centroids);
    }
  }

  CentroidSet set;
  set.points = std::move(centroids);
  set.method_tag = spec_label(config.spec);
  set.effective_th = th;
  set.init_time = seconds_since(start);
  return set;
}

CentroidSet random_seed(const PixelGrid& grid, int k, std::uint64_t rng_seed) {
  check_grid(grid);
  const auto start = Clock::now();
  if (k < 1) throw DomainError("k must be at least 1");
  if (k > grid.pixel_count())
    throw DomainError("k exceeds the number of pixels");

  const auto picks = draw_without_replacement(grid.pixel_count(), k, rng_seed);
  CentroidSet set;
  set.points.resize(k, grid.channels);
  for (int i = 0; i < k; ++i) {
    const std::uint8_t* p = grid.pixel(picks[i]);
    for (int c = 0; c < grid.channels; ++c) set.points(i, c) = p[c];
  }
  set.method_tag = "random";
  set.effective_th = 0.0;
  set.init_time = seconds_since(start);
  return set;
}

CentroidSet random_seed(const Eigen::MatrixXd& points, int k,
                        std::uint64_t rng_seed) {
  const auto start = Clock::now();
  if (k < 1) throw DomainError("k must be at least 1");
  if (k > points.rows()) throw DomainError("k exceeds the number of points");

  const auto picks =
      draw_without_replacement(static_cast<int>(points.rows()), k, rng_seed);
  CentroidSet set;
  set.points.resize(k, points.cols());
  for (int i = 0; i < k; ++i) set.points.row(i) = points.row(picks[i]);
  set.method_tag = "random";
  set.effective_th = 0.0;
  set.init_time = seconds_since(start);
  return set;
}

}  // namespace entroseed
