// Regenerates src/img/brief_pattern.cpp. The table is committed so
// descriptors stay stable; rerun only if the sampling scheme changes.
//
// Scheme: for each of the 256 tests, draw both endpoints from an isotropic
// Gaussian with sigma = 31/5 (seed 0x5EED), rounding to integers and
// rejecting draws outside the radius-15 disc; the second endpoint is also
// redrawn while it equals the first.

#include <cmath>
#include <cstdio>

#include "propaxis/num/rng.hpp"

int main() {
    propaxis::num::RngState rng(0x5EED);
    const double sigma = 31.0 / 5.0;

    auto draw_point = [&](int& x, int& y) {
        for (;;) {
            const double gx = sigma * rng.next_gaussian();
            const double gy = sigma * rng.next_gaussian();
            x = static_cast<int>(std::lround(gx));
            y = static_cast<int>(std::lround(gy));
            if (x * x + y * y <= 15 * 15) return;
        }
    };

    std::printf("// Generated by tools/gen_brief_pattern.cpp (seed 0x5EED); do not edit.\n");
    std::printf("#include \"propaxis/img/features.hpp\"\n\n");
    std::printf("namespace propaxis::img {\n\n");
    std::printf("namespace {\n");
    std::printf("constexpr std::array<std::array<std::int8_t, 4>, 256> kBriefPattern = {{\n");
    for (int i = 0; i < 256; ++i) {
        int x1, y1, x2, y2;
        draw_point(x1, y1);
        do {
            draw_point(x2, y2);
        } while (x2 == x1 && y2 == y1);
        std::printf("    {%d, %d, %d, %d},\n", x1, y1, x2, y2);
    }
    std::printf("}};\n");
    std::printf("} // namespace\n\n");
    std::printf(
        "std::span<const std::array<std::int8_t, 4>, 256> brief_pattern() { return kBriefPattern; }\n");
    std::printf("\n} // namespace propaxis::img\n");
    return 0;
}
