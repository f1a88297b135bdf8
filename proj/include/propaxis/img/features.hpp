#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "propaxis/img/image.hpp"

namespace propaxis::img {

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double response = 0.0; // Harris corner response
    double angle = 0.0;    // intensity-centroid orientation in [0, 2*pi)
};

/// 256-bit binary descriptor (steered BRIEF over a 31x31 patch).
struct BinaryDescriptor {
    std::array<std::uint64_t, 4> words{};

    bool bit(int i) const { return (words[i >> 6] >> (i & 63)) & 1; }
    static constexpr int kBits = 256;
};

int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b);

/// FAST-9/16 segment-test corners (9 contiguous circle pixels brighter or
/// darker than center by the threshold), 3x3 non-max suppressed on the
/// Harris response (Sobel gradients, Gaussian window sigma 1, k = 0.04),
/// ranked by response and truncated to max_kp. Orientation is the
/// intensity-centroid angle atan2(m01, m10) over a radius-15 patch.
/// Candidates keep a 16-pixel border margin; images below 32x32 error.
std::vector<Keypoint> detect_keypoints(const RasterImage& image, int fast_threshold = 20,
                                       std::size_t max_kp = 500);

/// True if the 16-pixel circle around (x, y) has a 9-long contiguous run
/// brighter or darker than the center by the threshold.
bool passes_segment_test(const RasterImage& image, int x, int y, int fast_threshold);

/// Steered BRIEF: 256 comparisons of 5x5-box-smoothed intensities at a fixed
/// committed test pattern (seeded Gaussian pairs inside the radius-15 disc),
/// with test coordinates rotated by the keypoint angle. The keypoint must be
/// at least 20 px from every border (callers drop closer ones).
BinaryDescriptor describe(const RasterImage& image, const Keypoint& kp);

/// Batch form sharing one integral image; bit-identical to describe().
std::vector<BinaryDescriptor> describe_all(const RasterImage& image,
                                           std::span<const Keypoint> kps);

/// The committed BRIEF test pattern: 256 quadruples (x1, y1, x2, y2).
std::span<const std::array<std::int8_t, 4>, 256> brief_pattern();

} // namespace propaxis::img
