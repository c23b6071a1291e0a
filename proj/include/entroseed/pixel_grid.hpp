#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "entroseed/errors.hpp"

namespace entroseed {

// Decoded image: row-major, channel-interleaved 8-bit intensities.
// channels is 1 (grayscale) or 3 (RGB); data.size() == width*height*channels.
struct PixelGrid {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  int pixel_count() const { return width * height; }

  const std::uint8_t* pixel(int index) const {
    return data.data() + static_cast<std::size_t>(index) * channels;
  }

  // Intensity tuple of pixel `index`, padded with zeros past `channels`.
  std::array<std::uint8_t, 3> tuple(int index) const {
    std::array<std::uint8_t, 3> t{0, 0, 0};
    const std::uint8_t* p = pixel(index);
    for (int c = 0; c < channels; ++c) t[c] = p[c];
    return t;
  }
};

// Throws DomainError unless dimensions, channel count and data length agree.
void check_grid(const PixelGrid& grid);

// Pixels as clustering features: one row per pixel, one column per channel.
Eigen::MatrixXd feature_matrix(const PixelGrid& grid);

}  // namespace entroseed
