#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace propaxis::eval {

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    std::optional<int> label; // 0|1 colors the point; unset renders gray
};

/// Writes a standalone SVG 1.1 scatter plot of a 2-D embedding.
///
/// Viewport transform (also used by tests): the data box is the min/max of
/// the points extended to include the origin, padded by 5% per side (a
/// degenerate extent expands to width 1); with canvas 640x640 and margin 40,
///   px = 40 + (x - lox) * (560 / (hix - lox))
///   py = 640 - 40 - (y - loy) * (560 / (hiy - loy))
/// Coordinates are printed with %.6f, so identical inputs give byte-identical
/// files. Axis lines are drawn through the data origin.
void scatter_svg(std::span<const ScatterPoint> points, const std::string& path);

/// The exact transform used by scatter_svg, exposed for verification.
struct SvgTransform {
    double lox, hix, loy, hiy;
    double px(double x) const;
    double py(double y) const;
};
SvgTransform svg_transform(std::span<const ScatterPoint> points);

} // namespace propaxis::eval
