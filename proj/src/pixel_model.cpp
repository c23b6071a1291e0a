#include "entroseed/pixel_model.hpp"

#include <algorithm>

namespace entroseed {

std::vector<ChannelHistogram> channel_histograms(const PixelGrid& grid) {
  check_grid(grid);
  std::vector<ChannelHistogram> hists(grid.channels);
  const int n = grid.pixel_count();
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* p = grid.pixel(i);
    for (int c = 0; c < grid.channels; ++c) ++hists[c].counts[p[c]];
  }
  for (auto& h : hists) h.total = n;
  return hists;
}

double pixel_probability(const std::vector<ChannelHistogram>& histograms,
                         const std::uint8_t* pixel) {
  double prob = 1.0;
  for (std::size_t c = 0; c < histograms.size(); ++c) {
    prob *= static_cast<double>(histograms[c].counts[pixel[c]]) /
            static_cast<double>(histograms[c].total);
  }
  return prob;
}

namespace {

// Packs an intensity tuple so that numeric key order equals lexicographic
// tuple order.
std::uint32_t tuple_key(const std::uint8_t* p, int channels) {
  std::uint32_t key = 0;
  for (int c = 0; c < channels; ++c) key = key << 8 | p[c];
  return key;
}

}  // namespace

SupportDistribution support_distribution(const PixelGrid& grid) {
  const auto hists = channel_histograms(grid);
  const int n = grid.pixel_count();

  std::vector<std::uint32_t> keys(n);
  for (int i = 0; i < n; ++i)
    keys[i] = tuple_key(grid.pixel(i), grid.channels);
  std::sort(keys.begin(), keys.end());

  SupportDistribution support;
  support.channels = grid.channels;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && keys[j] == keys[i]) ++j;
    SupportEntry entry;
    for (int c = 0; c < grid.channels; ++c)
      entry.tuple[c] =
          static_cast<std::uint8_t>(keys[i] >> 8 * (grid.channels - 1 - c));
    entry.probability = pixel_probability(hists, entry.tuple.data());
    entry.multiplicity = j - i;
    support.entries.push_back(entry);
    i = j;
  }
  return support;
}

}  // namespace entroseed
