#include "propaxis/synth/image_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "propaxis/common/error.hpp"
#include "propaxis/num/rng.hpp"

namespace propaxis::synth {

using img::RasterImage;

namespace {

constexpr int kBaseSide = 256;

std::uint8_t clamp_u8(long v) { return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L)); }

void fill_rect(RasterImage& im, int x0, int y0, int w, int h, std::uint8_t gray) {
    for (int y = std::max(0, y0); y < std::min(im.height, y0 + h); ++y)
        for (int x = std::max(0, x0); x < std::min(im.width, x0 + w); ++x) im.at(x, y) = gray;
}

void fill_ellipse(RasterImage& im, int cx, int cy, int rx, int ry, std::uint8_t gray) {
    for (int y = std::max(0, cy - ry); y <= std::min(im.height - 1, cy + ry); ++y)
        for (int x = std::max(0, cx - rx); x <= std::min(im.width - 1, cx + rx); ++x) {
            const double nx = static_cast<double>(x - cx) / rx;
            const double ny = static_cast<double>(y - cy) / ry;
            if (nx * nx + ny * ny <= 1.0) im.at(x, y) = gray;
        }
}

void draw_line(RasterImage& im, int x0, int y0, int x1, int y1, int thickness,
               std::uint8_t gray) {
    const int steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0)) + 1;
    for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        const int x = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
        const int y = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
        fill_rect(im, x - thickness / 2, y - thickness / 2, thickness, thickness, gray);
    }
}

} // namespace

img::RasterImage gen_base_image(std::uint64_t seed) {
    num::RngState rng(seed);
    RasterImage im(kBaseSide, kBaseSide,
                   static_cast<std::uint8_t>(40 + rng.next_below(176)));
    const int shapes = 14 + static_cast<int>(rng.next_below(11));
    for (int s = 0; s < shapes; ++s) {
        const std::uint8_t gray = static_cast<std::uint8_t>(rng.next_below(256));
        switch (rng.next_below(3)) {
            case 0: {
                const int w = 16 + static_cast<int>(rng.next_below(90));
                const int h = 16 + static_cast<int>(rng.next_below(90));
                const int x = static_cast<int>(rng.next_below(kBaseSide - 16));
                const int y = static_cast<int>(rng.next_below(kBaseSide - 16));
                fill_rect(im, x, y, w, h, gray);
                break;
            }
            case 1: {
                const int rx = 8 + static_cast<int>(rng.next_below(52));
                const int ry = 8 + static_cast<int>(rng.next_below(52));
                const int cx = static_cast<int>(rng.next_below(kBaseSide));
                const int cy = static_cast<int>(rng.next_below(kBaseSide));
                fill_ellipse(im, cx, cy, rx, ry, gray);
                break;
            }
            default: {
                const int x0 = static_cast<int>(rng.next_below(kBaseSide));
                const int y0 = static_cast<int>(rng.next_below(kBaseSide));
                const int x1 = static_cast<int>(rng.next_below(kBaseSide));
                const int y1 = static_cast<int>(rng.next_below(kBaseSide));
                draw_line(im, x0, y0, x1, y1, 1 + static_cast<int>(rng.next_below(3)), gray);
                break;
            }
        }
    }
    return im;
}

img::RasterImage apply_step(const RasterImage& image, const TransformStep& step) {
    switch (step.kind) {
        case TransformStep::Kind::Resize: {
            if (step.resize_factor < 0.5 || step.resize_factor > 2.0)
                raise(ErrorKind::Domain, "transform: resize factor outside [0.5, 2]");
            const int nw = std::max(1, static_cast<int>(std::lround(image.width * step.resize_factor)));
            const int nh = std::max(1, static_cast<int>(std::lround(image.height * step.resize_factor)));
            return img::resize_bilinear(image, nw, nh);
        }
        case TransformStep::Kind::Crop: {
            if (step.crop_fraction < 0.0 || step.crop_fraction > 0.2)
                raise(ErrorKind::Domain, "transform: crop fraction outside [0, 0.2]");
            const int nw = std::max(1, static_cast<int>(std::lround(image.width * (1.0 - step.crop_fraction))));
            const int nh = std::max(1, static_cast<int>(std::lround(image.height * (1.0 - step.crop_fraction))));
            if (step.crop_ox < 0 || step.crop_oy < 0 || step.crop_ox + nw > image.width ||
                step.crop_oy + nh > image.height)
                raise(ErrorKind::Domain, "transform: crop window outside the image");
            RasterImage out(nw, nh);
            for (int y = 0; y < nh; ++y)
                for (int x = 0; x < nw; ++x)
                    out.at(x, y) = image.at(x + step.crop_ox, y + step.crop_oy);
            return out;
        }
        case TransformStep::Kind::Brightness: {
            if (std::abs(step.brightness_delta) > 30)
                raise(ErrorKind::Domain, "transform: |brightness delta| > 30");
            RasterImage out = image;
            for (auto& v : out.luma) v = clamp_u8(static_cast<long>(v) + step.brightness_delta);
            return out;
        }
        case TransformStep::Kind::Overlay: {
            const double area = static_cast<double>(step.ov_w) * step.ov_h /
                                (static_cast<double>(image.width) * image.height);
            if (area > 0.15) raise(ErrorKind::Domain, "transform: overlay area > 0.15");
            RasterImage out = image;
            fill_rect(out, step.ov_x, step.ov_y, step.ov_w, step.ov_h, step.ov_gray);
            return out;
        }
    }
    raise(ErrorKind::Domain, "transform: unknown kind");
}

img::RasterImage apply_variant(const RasterImage& base, const VariantRecord& record) {
    RasterImage im = base;
    for (const auto& step : record.chain) im = apply_step(im, step);
    num::RngState noise(record.noise_seed);
    for (auto& v : im.luma)
        v = clamp_u8(static_cast<long>(v) + std::lround(3.0 * noise.next_gaussian()));
    return im;
}

namespace {

TransformStep random_step(int width, int height, num::RngState& rng) {
    TransformStep s;
    switch (rng.next_below(4)) {
        case 0:
            s.kind = TransformStep::Kind::Resize;
            s.resize_factor = 0.5 + 1.5 * rng.next_double();
            break;
        case 1: {
            s.kind = TransformStep::Kind::Crop;
            s.crop_fraction = 0.05 + 0.15 * rng.next_double();
            const int nw = std::max(1, static_cast<int>(std::lround(width * (1.0 - s.crop_fraction))));
            const int nh = std::max(1, static_cast<int>(std::lround(height * (1.0 - s.crop_fraction))));
            s.crop_ox = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(width - nw + 1)));
            s.crop_oy = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(height - nh + 1)));
            break;
        }
        case 2: {
            s.kind = TransformStep::Kind::Brightness;
            const int magnitude = 5 + static_cast<int>(rng.next_below(26)); // 5..30
            s.brightness_delta = rng.next_bernoulli(0.5) ? magnitude : -magnitude;
            break;
        }
        default: {
            s.kind = TransformStep::Kind::Overlay;
            const double area = 0.05 + 0.10 * rng.next_double(); // <= 0.15
            const double aspect = 0.5 + 1.5 * rng.next_double();
            int w = std::max(4, static_cast<int>(std::lround(std::sqrt(area * aspect) * width)));
            int h = std::max(4, static_cast<int>(std::lround(std::sqrt(area / aspect) * height)));
            while (static_cast<double>(w) * h > 0.15 * width * height) (h > w ? h : w) -= 1;
            s.ov_w = w;
            s.ov_h = h;
            s.ov_x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(std::max(1, width - w))));
            s.ov_y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(std::max(1, height - h))));
            s.ov_gray = rng.next_bernoulli(0.5) ? static_cast<std::uint8_t>(rng.next_below(41))
                                                : static_cast<std::uint8_t>(215 + rng.next_below(41));
            break;
        }
    }
    return s;
}

std::string base_name(int b) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "b%03d", b);
    return buf;
}

} // namespace

ImageSuite gen_image_suite(int n_base, int variants_per_base, std::uint64_t seed) {
    if (n_base < 2) raise(ErrorKind::Domain, "gen_image_suite: n_base must be >= 2");
    if (variants_per_base < 0)
        raise(ErrorKind::Domain, "gen_image_suite: variants_per_base must be >= 0");

    ImageSuite suite;
    num::RngState chain_rng(num::derive_seed(seed, 0x7261776E, 0));
    for (int b = 0; b < n_base; ++b) {
        const std::string bid = base_name(b);
        const RasterImage base = gen_base_image(num::derive_seed(seed, b, 0));
        suite.images.push_back({bid, base});

        std::vector<std::string> group{bid};
        for (int v = 0; v < variants_per_base; ++v) {
            VariantRecord rec;
            rec.base_id = bid;
            rec.id = bid + "_v" + std::to_string(v);
            rec.noise_seed = num::derive_seed(seed, b, v + 1);
            const int chain_len = 1 + static_cast<int>(chain_rng.next_below(2));
            RasterImage cur = base;
            for (int c = 0; c < chain_len; ++c) {
                TransformStep step = random_step(cur.width, cur.height, chain_rng);
                cur = apply_step(cur, step);
                rec.chain.push_back(step);
            }
            suite.images.push_back({rec.id, apply_variant(base, rec)});
            group.push_back(rec.id);
            suite.records.push_back(std::move(rec));
        }
        for (std::size_t i = 0; i < group.size(); ++i)
            for (std::size_t j = i + 1; j < group.size(); ++j)
                suite.true_pairs.emplace_back(group[i], group[j]);
    }
    return suite;
}

} // namespace propaxis::synth
