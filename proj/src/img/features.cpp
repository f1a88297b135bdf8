#include "propaxis/img/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "propaxis/common/error.hpp"

namespace propaxis::img {

namespace {

// Bresenham circle of radius 3, clockwise from 12 o'clock.
constexpr std::array<std::array<int, 2>, 16> kCircle = {{
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
    {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
}};

constexpr int kDetectMargin = 16;
constexpr int kCentroidRadius = 15;
constexpr double kHarrisK = 0.04;

int sobel_x(const RasterImage& img, int x, int y) {
    return (img.at(x + 1, y - 1) + 2 * img.at(x + 1, y) + img.at(x + 1, y + 1)) -
           (img.at(x - 1, y - 1) + 2 * img.at(x - 1, y) + img.at(x - 1, y + 1));
}

int sobel_y(const RasterImage& img, int x, int y) {
    return (img.at(x - 1, y + 1) + 2 * img.at(x, y + 1) + img.at(x + 1, y + 1)) -
           (img.at(x - 1, y - 1) + 2 * img.at(x, y - 1) + img.at(x + 1, y - 1));
}

// Gaussian window (sigma = 1) over a 7x7 neighbourhood of Sobel products.
double harris_response(const RasterImage& img, int x, int y) {
    double sxx = 0.0, syy = 0.0, sxy = 0.0, wsum = 0.0;
    for (int dy = -3; dy <= 3; ++dy) {
        for (int dx = -3; dx <= 3; ++dx) {
            const double w = std::exp(-0.5 * (dx * dx + dy * dy));
            const double ix = sobel_x(img, x + dx, y + dy);
            const double iy = sobel_y(img, x + dx, y + dy);
            sxx += w * ix * ix;
            syy += w * iy * iy;
            sxy += w * ix * iy;
            wsum += w;
        }
    }
    sxx /= wsum;
    syy /= wsum;
    sxy /= wsum;
    const double det = sxx * syy - sxy * sxy;
    const double tr = sxx + syy;
    return det - kHarrisK * tr * tr;
}

double centroid_angle(const RasterImage& img, int x, int y) {
    std::int64_t m10 = 0, m01 = 0;
    for (int dy = -kCentroidRadius; dy <= kCentroidRadius; ++dy)
        for (int dx = -kCentroidRadius; dx <= kCentroidRadius; ++dx) {
            if (dx * dx + dy * dy > kCentroidRadius * kCentroidRadius) continue;
            const int xx = std::clamp(x + dx, 0, img.width - 1);
            const int yy = std::clamp(y + dy, 0, img.height - 1);
            const int v = img.at(xx, yy);
            m10 += static_cast<std::int64_t>(dx) * v;
            m01 += static_cast<std::int64_t>(dy) * v;
        }
    if (m10 == 0 && m01 == 0) return 0.0;
    double a = std::atan2(static_cast<double>(m01), static_cast<double>(m10));
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

// Summed-area table with a one-cell top/left border of zeros.
struct Integral {
    int width, height;
    std::vector<std::uint64_t> sums;

    explicit Integral(const RasterImage& img) : width(img.width), height(img.height) {
        sums.assign(static_cast<std::size_t>(width + 1) * (height + 1), 0);
        for (int y = 0; y < height; ++y) {
            std::uint64_t row = 0;
            for (int x = 0; x < width; ++x) {
                row += img.at(x, y);
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }

    std::uint64_t& at(int x, int y) { return sums[static_cast<std::size_t>(y) * (width + 1) + x]; }
    std::uint64_t at(int x, int y) const {
        return sums[static_cast<std::size_t>(y) * (width + 1) + x];
    }

    // 5x5 box sum centered at (x, y), clamped to the image.
    std::uint32_t box5(int x, int y) const {
        const int x0 = std::max(x - 2, 0), y0 = std::max(y - 2, 0);
        const int x1 = std::min(x + 2, width - 1), y1 = std::min(y + 2, height - 1);
        return static_cast<std::uint32_t>(at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) +
                                          at(x0, y0));
    }
};

BinaryDescriptor describe_with(const Integral& integral, const Keypoint& kp) {
    BinaryDescriptor d;
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    const double c = std::cos(kp.angle);
    const double s = std::sin(kp.angle);
    const auto pattern = brief_pattern();
    for (int i = 0; i < BinaryDescriptor::kBits; ++i) {
        const auto& t = pattern[i];
        const int x1 = cx + static_cast<int>(std::lround(t[0] * c - t[1] * s));
        const int y1 = cy + static_cast<int>(std::lround(t[0] * s + t[1] * c));
        const int x2 = cx + static_cast<int>(std::lround(t[2] * c - t[3] * s));
        const int y2 = cy + static_cast<int>(std::lround(t[2] * s + t[3] * c));
        if (integral.box5(x1, y1) < integral.box5(x2, y2))
            d.words[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    return d;
}

} // namespace

int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b) {
    int d = 0;
    for (int w = 0; w < 4; ++w) d += std::popcount(a.words[w] ^ b.words[w]);
    return d;
}

bool passes_segment_test(const RasterImage& image, int x, int y, int fast_threshold) {
    const int center = image.at(x, y);
    const int hi = center + fast_threshold;
    const int lo = center - fast_threshold;
    unsigned bright = 0, dark = 0;
    for (int i = 0; i < 16; ++i) {
        const int v = image.at(x + kCircle[i][0], y + kCircle[i][1]);
        if (v > hi) bright |= 1u << i;
        if (v < lo) dark |= 1u << i;
    }
    auto has_run9 = [](unsigned mask) {
        if (mask == 0) return false;
        const unsigned wrapped = mask | (mask << 16);
        int run = 0;
        for (int i = 0; i < 32; ++i) {
            run = (wrapped >> i) & 1 ? run + 1 : 0;
            if (run >= 9) return true;
        }
        return false;
    };
    return has_run9(bright) || has_run9(dark);
}

std::vector<Keypoint> detect_keypoints(const RasterImage& image, int fast_threshold,
                                       std::size_t max_kp) {
    if (fast_threshold < 5 || fast_threshold > 100)
        raise(ErrorKind::Domain, "detect_keypoints: fast_threshold must be in [5, 100]");
    if (image.width < 32 || image.height < 32)
        raise(ErrorKind::Domain, "detect_keypoints: image smaller than 32x32");

    const double kNoCandidate = -std::numeric_limits<double>::infinity();
    std::vector<double> response(static_cast<std::size_t>(image.width) * image.height,
                                 kNoCandidate);
    std::vector<std::pair<int, int>> candidates;
    for (int y = kDetectMargin; y < image.height - kDetectMargin; ++y)
        for (int x = kDetectMargin; x < image.width - kDetectMargin; ++x)
            if (passes_segment_test(image, x, y, fast_threshold)) {
                response[static_cast<std::size_t>(y) * image.width + x] =
                    harris_response(image, x, y);
                candidates.emplace_back(x, y);
            }

    auto resp = [&](int x, int y) {
        return response[static_cast<std::size_t>(y) * image.width + x];
    };

    std::vector<Keypoint> kps;
    for (const auto& [x, y] : candidates) {
        const double r = resp(x, y);
        bool is_max = true;
        for (int dy = -1; dy <= 1 && is_max; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const double rn = resp(x + dx, y + dy);
                // Ties on a plateau go to the first pixel in scan order.
                if (rn > r || (rn == r && (dy < 0 || (dy == 0 && dx < 0)))) {
                    is_max = false;
                    break;
                }
            }
        if (is_max)
            kps.push_back({static_cast<double>(x), static_cast<double>(y), r,
                           centroid_angle(image, x, y)});
    }

    std::sort(kps.begin(), kps.end(), [](const Keypoint& a, const Keypoint& b) {
        if (a.response != b.response) return a.response > b.response;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    if (kps.size() > max_kp) kps.resize(max_kp);
    return kps;
}

BinaryDescriptor describe(const RasterImage& image, const Keypoint& kp) {
    return describe_with(Integral(image), kp);
}

std::vector<BinaryDescriptor> describe_all(const RasterImage& image,
                                           std::span<const Keypoint> kps) {
    const Integral integral(image);
    std::vector<BinaryDescriptor> out;
    out.reserve(kps.size());
    for (const auto& kp : kps) out.push_back(describe_with(integral, kp));
    return out;
}

} // namespace propaxis::img
