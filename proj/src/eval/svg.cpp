#include "propaxis/eval/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "propaxis/common/error.hpp"

namespace propaxis::eval {

namespace {
constexpr double kCanvas = 640.0;
constexpr double kMargin = 40.0;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}
} // namespace

double SvgTransform::px(double x) const {
    return kMargin + (x - lox) * ((kCanvas - 2.0 * kMargin) / (hix - lox));
}

double SvgTransform::py(double y) const {
    return kCanvas - kMargin - (y - loy) * ((kCanvas - 2.0 * kMargin) / (hiy - loy));
}

SvgTransform svg_transform(std::span<const ScatterPoint> points) {
    double lox = 0.0, hix = 0.0, loy = 0.0, hiy = 0.0;
    for (const auto& p : points) {
        lox = std::min(lox, p.x);
        hix = std::max(hix, p.x);
        loy = std::min(loy, p.y);
        hiy = std::max(hiy, p.y);
    }
    if (hix - lox < 1e-12) hix = lox + 1.0;
    if (hiy - loy < 1e-12) hiy = loy + 1.0;
    const double padx = 0.05 * (hix - lox);
    const double pady = 0.05 * (hiy - loy);
    return SvgTransform{lox - padx, hix + padx, loy - pady, hiy + pady};
}

void scatter_svg(std::span<const ScatterPoint> points, const std::string& path) {
    const SvgTransform t = svg_transform(points);
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::Io, "cannot write " + path);

    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
         "height=\"640\" viewBox=\"0 0 640 640\">\n";
    f << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";
    // Axis lines through the data origin.
    f << "<line x1=\"" << fmt(t.px(t.lox)) << "\" y1=\"" << fmt(t.py(0.0)) << "\" x2=\""
      << fmt(t.px(t.hix)) << "\" y2=\"" << fmt(t.py(0.0))
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    f << "<line x1=\"" << fmt(t.px(0.0)) << "\" y1=\"" << fmt(t.py(t.loy)) << "\" x2=\""
      << fmt(t.px(0.0)) << "\" y2=\"" << fmt(t.py(t.hiy))
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (const auto& p : points) {
        const char* color = "#888888";
        if (p.label.has_value()) color = *p.label == 0 ? "#d62728" : "#1f77b4";
        f << "<circle cx=\"" << fmt(t.px(p.x)) << "\" cy=\"" << fmt(t.py(p.y))
          << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.8\"/>\n";
    }
    f << "</svg>\n";
}

} // namespace propaxis::eval
