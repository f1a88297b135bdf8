#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace propaxis::img {

/// 8-bit grayscale raster, row-major.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> luma;

    RasterImage() = default;
    RasterImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), luma(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const {
        return luma[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return luma[static_cast<std::size_t>(y) * width + x];
    }
};

/// Reads binary PGM (P5) or PPM (P6) with maxval 255. PPM is converted to
/// luma as round(0.299 R + 0.587 G + 0.114 B). Distinct errors: Io for an
/// unreadable file, Unsupported for an unknown magic number or maxval,
/// Malformed for a bad header or truncated payload.
RasterImage load_image(const std::string& path);

void save_pgm(const RasterImage& image, const std::string& path);

/// Box (area-average) resampling; exact fractional pixel coverage.
RasterImage resize_area(const RasterImage& image, int new_width, int new_height);

/// Center-aligned bilinear resampling.
RasterImage resize_bilinear(const RasterImage& image, int new_width, int new_height);

/// Rescales so the longer side is exactly `target` pixels (aspect preserved,
/// both up- and downscaling). Near-duplicate detection runs on normalized
/// images so resized variants land on a common scale; area resampling is
/// used when shrinking, bilinear when enlarging.
RasterImage normalize_max_side(const RasterImage& image, int target = 512);

} // namespace propaxis::img
