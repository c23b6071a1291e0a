#include "entroseed/pixel_grid.hpp"

namespace entroseed {

void check_grid(const PixelGrid& grid) {
  if (grid.width < 1 || grid.height < 1)
    throw DomainError("pixel grid dimensions must be at least 1x1");
  if (grid.channels != 1 && grid.channels != 3)
    throw DomainError("pixel grid must have 1 or 3 channels");
  const std::size_t expected = static_cast<std::size_t>(grid.width) *
                               grid.height * grid.channels;
  if (grid.data.size() != expected)
    throw DomainError("pixel grid data length does not match dimensions");
}

Eigen::MatrixXd feature_matrix(const PixelGrid& grid) {
  check_grid(grid);
  const int n = grid.pixel_count();
  Eigen::MatrixXd points(n, grid.channels);
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* p = grid.pixel(i);
    for (int c = 0; c < grid.channels; ++c)
      points(i, c) = static_cast<double>(p[c]);
  }
  return points;
}

}  // namespace entroseed
