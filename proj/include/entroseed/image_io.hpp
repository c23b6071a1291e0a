#pragma once

#include <filesystem>

#include "entroseed/pixel_grid.hpp"

namespace entroseed {

// Decodes a PNG, JPEG, PPM (P3/P6) or PGM (P2/P5) file. The format is
// detected from the file's magic bytes, not its extension. Color sources
// yield channels=3, single-channel sources channels=1; alpha is dropped.
// Only 8-bit samples are supported.
//
// Throws IoError for unreadable/truncated input, FormatError for anything
// that is not an 8-bit image in a supported format.
PixelGrid load_image(const std::filesystem::path& path);

// BT.601 luma conversion, rounded half up. 1-channel input is returned
// unchanged.
PixelGrid to_grayscale(const PixelGrid& grid);

}  // namespace entroseed
