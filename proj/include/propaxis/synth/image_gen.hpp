#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "propaxis/img/image.hpp"
#include "propaxis/ndup/neardup.hpp"

namespace propaxis::synth {

/// One edit applied to a base image. All sampled parameters (offsets,
/// deltas, rectangle, factor) are recorded so re-applying a step is
/// bit-exact.
struct TransformStep {
    enum class Kind { Resize, Crop, Brightness, Overlay };
    Kind kind = Kind::Brightness;

    double resize_factor = 1.0; // [0.5, 2]
    double crop_fraction = 0.0; // <= 0.2 of each dimension
    int crop_ox = 0, crop_oy = 0;
    int brightness_delta = 0; // |delta| <= 30
    int ov_x = 0, ov_y = 0, ov_w = 0, ov_h = 0; // overlay rect, area <= 0.15
    std::uint8_t ov_gray = 0;
};

struct VariantRecord {
    std::string id;
    std::string base_id;
    std::vector<TransformStep> chain; // length <= 2
    std::uint64_t noise_seed = 0;     // recompression stand-in noise
};

struct ImageSuite {
    std::vector<ndup::CorpusImage> images; // bases followed by their variants
    std::vector<std::pair<std::string, std::string>> true_pairs; // within-group pairs
    std::vector<VariantRecord> records;
};

img::RasterImage apply_step(const img::RasterImage& image, const TransformStep& step);

/// Chain plus the seeded Gaussian pixel noise (sigma 3, clamped) standing in
/// for recompression; reproduces the recorded variant bit-exactly.
img::RasterImage apply_variant(const img::RasterImage& base, const VariantRecord& record);

/// Procedurally drawn 256x256 base image: random rectangles, ellipses and
/// lines on a flat background.
img::RasterImage gen_base_image(std::uint64_t seed);

/// n_base bases, each with variants_per_base transformed copies via random
/// chains of length <= 2; returns the corpus plus the ground-truth
/// near-duplicate pair set (all pairs within a base group).
ImageSuite gen_image_suite(int n_base, int variants_per_base, std::uint64_t seed);

} // namespace propaxis::synth
