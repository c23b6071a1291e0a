#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "entroseed/pixel_grid.hpp"

namespace entroseed {

// Occurrence counts of each intensity value in one channel.
// sum(counts) == total == width*height of the source grid.
struct ChannelHistogram {
  std::array<std::int64_t, 256> counts{};
  std::int64_t total = 0;
};

// One distinct intensity tuple present in a grid, with its probability under
// the per-channel independence model and its occurrence count.
struct SupportEntry {
  std::array<std::uint8_t, 3> tuple{0, 0, 0};  // first `channels` entries used
  double probability = 0.0;
  std::int64_t multiplicity = 0;
};

// All distinct tuples of a grid, ordered lexicographically. The product
// model also assigns mass to absent tuples, so for multichannel grids the
// probabilities here may sum to less than 1.
struct SupportDistribution {
  int channels = 0;
  std::vector<SupportEntry> entries;
};

// One histogram per channel.
std::vector<ChannelHistogram> channel_histograms(const PixelGrid& grid);

// Joint probability of an intensity tuple as the product of its per-channel
// marginal frequencies. Zero if any marginal count is zero.
double pixel_probability(const std::vector<ChannelHistogram>& histograms,
                         const std::uint8_t* pixel);

SupportDistribution support_distribution(const PixelGrid& grid);

}  // namespace entroseed
